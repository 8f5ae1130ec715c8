#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bemery/curvature.hpp"
#include "bemery/gamma.hpp"
#include "bemery/heat.hpp"

namespace bemery {

// A statement counts as holding when its slack is >= -kReportTol.
inline constexpr double kReportTol = 1e-8;
// Relative agreement of successive Simpson halvings for the integral in (ii).
inline constexpr double kQuadTol = 1e-8;
inline constexpr std::size_t kMinSimpsonIntervals = 8;
// |K| below this uses the K = 0 limit forms of the coefficients.
inline constexpr double kZeroCurvature = 1e-12;

// Time coefficients of the gradient estimates, stable for small K t:
//   exp_growth  = (e^{2Kt} - 1) / K               -> 2t   as K -> 0
//   exp_decay   = (1 - e^{-2Kt}) / K              -> 2t
//   exp_growth2 = (e^{2Kt} - 1 - 2Kt) / K^2       -> 2t^2
//   exp_decay2  = (e^{-2Kt} - 1 + 2Kt) / K^2      -> 2t^2
double exp_growth(double K, double t);
double exp_decay(double K, double t);
double exp_growth2(double K, double t);
double exp_decay2(double K, double t);

/// Slacks of the four gradient estimates for a single (f, t, x) under the
/// assumption CD(-K, n). Each slack is right-hand side minus left-hand side
/// oriented so that slack >= 0 means the inequality holds:
///   (ii)  Γ(P_t f) <= e^{2Kt} P_tΓ(f) - (2/n) ∫_0^t e^{2Ks} P_s (P_{t-s}Δf)^2 ds
///   (iii) Γ(P_t f) <= e^{2Kt} P_tΓ(f) - exp_growth/n · (P_tΔf)^2
///   (iv)  P_t f^2 - (P_t f)^2 <= exp_growth · P_tΓ(f) - exp_growth2/n · (P_tΔf)^2
///   (v)   P_t f^2 - (P_t f)^2 >= exp_decay · Γ(P_t f) + exp_decay2/n · (P_tΔf)^2
struct EstimateReport {
  std::size_t function_id = 0;
  double t = 0.0;
  VertexIndex x = 0;
  double K = 0.0;
  Dimension n = Dimension::infinite();
  double slack_ii = 0.0;
  double slack_iii = 0.0;
  double slack_iv = 0.0;
  double slack_v = 0.0;
  double quadrature_error_ii = 0.0;
  bool pass_ii = true;
  bool pass_iii = true;
  bool pass_iv = true;
  bool pass_v = true;

  bool all_pass() const noexcept { return pass_ii && pass_iii && pass_iv && pass_v; }
};

// Throws Error(invalid_argument) for negative entries of f or negative t and
// Error(precondition) for an operator with a Dirichlet domain.
EstimateReport verify_estimates(const HeatOperator& heat, double K, Dimension n,
                                const GraphFunction& f, double t, VertexIndex x,
                                std::size_t function_id = 0);
EstimateReport verify_estimates(const WeightedGraph& g, double K, Dimension n,
                                const GraphFunction& f, double t, VertexIndex x);

// Reports for every vertex at once; the (ii) integral is shared.
std::vector<EstimateReport> verify_estimates_all(const HeatOperator& heat, double K, Dimension n,
                                                 const GraphFunction& f, double t,
                                                 std::size_t function_id = 0);

struct SweepResult {
  std::vector<EstimateReport> reports;
  bool all_pass = true;
  // Index into reports of the first failing report.
  std::optional<std::size_t> first_counterexample;
  std::vector<std::string> warnings;
};

// Reports ordered by function, then t, then vertex.
SweepResult estimate_sweep(const HeatOperator& heat, double K, Dimension n,
                           std::span<const double> t_grid,
                           const std::vector<GraphFunction>& corpus, unsigned jobs = 1);

// Vertex indicators, `random_count` functions uniform in [0, 1], and the
// indicators smoothed by P_{smoothing_time}.
std::vector<GraphFunction> standard_corpus(const HeatOperator& heat, std::uint64_t seed,
                                           std::size_t random_count = 20,
                                           double smoothing_time = 0.1);

// For each non-isolated vertex, the CD(K(x), n) tightness witness shifted and
// scaled into [0, 1]. These are the functions on which a claimed curvature
// above K(x) is first visible.
std::vector<GraphFunction> witness_corpus(const WeightedGraph& g, Dimension n);

struct ConverseScan {
  bool violated = false;
  double t = 0.0;
  std::size_t function_id = 0;
  VertexIndex x = 0;
  double slack_iii = 0.0;
};

// Smallest t of the ascending grid at which statement (iii) fails for some
// function of the corpus at some vertex.
ConverseScan converse_scan(const HeatOperator& heat, double K, Dimension n,
                           const std::vector<GraphFunction>& corpus,
                           std::span<const double> t_grid);

// Geometric grid of `count` points from t_min to t_max inclusive.
std::vector<double> geometric_grid(double t_min, double t_max, std::size_t count);

struct GreenTriple {
  double f_laplace_h = 0.0;   // <f, Δh>_m
  double laplace_f_h = 0.0;   // <Δf, h>_m
  double gamma_sum = 0.0;     // -sum_x Γ(f, h)(x) m(x)
  // Largest sum of absolute terms among the three sums; the rounding scale.
  double term_scale = 0.0;

  double relative_gap() const noexcept;
};

GreenTriple green_check(const WeightedGraph& g, const GraphFunction& f, const GraphFunction& h);

struct EcNormPair {
  double ellipticity_constant = 0.0;
  // max_y ||A 1_y||_inf / ||1_y||_1, from applying the adjacency operator.
  double operator_norm = 0.0;
};

EcNormPair ec_norm_check(const WeightedGraph& g);

struct CutoffResult {
  GraphFunction eta;
  std::vector<VertexIndex> target_set;
  double epsilon = 0.0;
  double time = 0.0;
  double max_gamma = 0.0;
  // Pointwise Γ(η) <= 4Γ(P_t 1_U) <= (2/t)(P_t 1_U - (P_t 1_U)^2), with the
  // largest excess over both steps.
  bool intermediate_bound_holds = true;
  double intermediate_bound_excess = 0.0;
};

// η = 1 ∧ (2 P_t 1_U - 1/2)_+ with t = 2/ε. Throws Error(precondition) if the
// graph fails CD(0, ∞), if P_t 1_U < 3/4 somewhere on S, or if the operator
// has a Dirichlet domain.
CutoffResult build_cutoff(const HeatOperator& heat, const std::vector<VertexIndex>& target_set,
                          double epsilon, const std::vector<VertexIndex>& source_set);

struct FinitenessVertex {
  VertexIndex x = 0;
  double degree = 0.0;
  // Deg(x) = 0: no bound, nothing to contradict.
  bool vacuous = false;
  // Cutoffs with Γ(η) < threshold force 1 > sqrt(2εDeg(x))/K.
  double epsilon_threshold = 0.0;
  std::vector<double> bounds;          // sqrt(2εDeg(x))/K per grid entry
  std::vector<bool> contradiction;     // bound < 1
  double jensen_max_excess = 0.0;      // max of (Δg)^2 - 2Deg Γ(g) at x
  double decay_max_excess = 0.0;       // max of η(x) - lim P_tη(x) - bound(ε=maxΓ(η))
};

struct FinitenessReport {
  double K = 0.0;
  std::vector<double> epsilon_grid;
  std::vector<FinitenessVertex> vertices;
  std::size_t samples = 0;
  double jensen_max_excess = 0.0;
  double decay_max_excess = 0.0;
  bool inequalities_hold = true;
};

// Requires a connected graph with CD(K, ∞), K > 0 (Error(precondition)).
FinitenessReport finiteness_probe(const HeatOperator& heat, double K,
                                  std::span<const double> epsilon_grid, std::uint64_t seed,
                                  std::size_t samples = 1000);

struct TaylorCoefficients {
  double fitted_first = 0.0;
  double exact_first = 0.0;
  double fitted_second = 0.0;
  double exact_second = 0.0;

  double relative_error() const noexcept;
};

struct TaylorReport {
  VertexIndex x = 0;
  double K = 0.0;
  TaylorCoefficients variance;  // P_t f^2 - (P_t f)^2
  TaylorCoefficients growth;    // exp_growth(K, t) P_tΓ(f)
  TaylorCoefficients decay;     // exp_decay(K, t) Γ(P_t f)

  double max_relative_error() const noexcept;
};

// Richardson extrapolation of the first two t-derivatives at t = 0 against
// their closed forms 2Γ(f), ΔΓ(f) + 2Γ(f,Δf), 2(ΔΓ(f) + KΓ(f)) and
// 2(2Γ(f,Δf) - KΓ(f)).
TaylorReport taylor_check(const HeatOperator& heat, const GraphFunction& f, VertexIndex x,
                          double K);

}  // namespace bemery
