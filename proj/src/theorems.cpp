#include "bemery/theorems.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "bemery/error.hpp"

namespace bemery {

namespace {

constexpr double kRescaleExponent = 600.0;

// (e^z - 1) / z
double phi1(double z) {
  if (z == 0.0) return 1.0;
  return std::expm1(z) / z;
}

// (e^z - 1 - z) / z^2
double phi2(double z) {
  if (std::abs(z) < 0.5) {
    double term = 0.5;
    double sum = term;
    for (int k = 1; k < 24; ++k) {
      term *= z / (k + 2);
      sum += term;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

void require_nonnegative_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorCode::invalid_argument, "time t must be finite and nonnegative");
  }
}

void require_full_graph(const HeatOperator& heat, const char* what) {
  if (heat.is_dirichlet()) {
    fail(ErrorCode::precondition,
         std::string(what) + " needs the heat semigroup of the full graph, not a Dirichlet restriction");
  }
}

struct Quadrature {
  Eigen::VectorXd value;
  Eigen::VectorXd error;
};

void simpson_sum(const std::vector<Eigen::VectorXd>& nodes, double h, Eigen::VectorXd& out) {
  const std::size_t n = nodes.size() - 1;
  out = nodes.front() + nodes.back();
  for (std::size_t j = 1; j < n; ++j) out += (j % 2 ? 4.0 : 2.0) * nodes[j];
  out *= h / 3.0;
}

// ∫_0^t e^{2Ks} P_s (P_{t-s} Δf)^2 ds at every vertex by composite Simpson,
// halving the step until successive estimates agree to kQuadTol.
// The weight is e^{2Ks - shift}.
Quadrature integrate_dimension_term(const HeatOperator& heat, const GraphFunction& lap_f, double K,
                                    double t, double shift) {
  auto integrand = [&](double s) -> Eigen::VectorXd {
    const GraphFunction w = heat.apply(std::max(0.0, t - s), lap_f);
    return std::exp(2.0 * K * s - shift) * heat.apply(s, w.cwiseAbs2());
  };
  constexpr std::size_t kMaxIntervals = std::size_t{1} << 16;

  std::size_t n = kMinSimpsonIntervals;
  std::vector<Eigen::VectorXd> nodes(n + 1);
  for (std::size_t j = 0; j <= n; ++j) nodes[j] = integrand(t * static_cast<double>(j) / n);
  Eigen::VectorXd previous;
  simpson_sum(nodes, t / n, previous);
  Eigen::VectorXd current = previous;
  while (true) {
    std::vector<Eigen::VectorXd> refined(2 * n + 1);
    for (std::size_t j = 0; j <= n; ++j) refined[2 * j] = std::move(nodes[j]);
    for (std::size_t j = 0; j < n; ++j) {
      refined[2 * j + 1] = integrand(t * static_cast<double>(2 * j + 1) / (2 * n));
    }
    nodes = std::move(refined);
    n *= 2;
    simpson_sum(nodes, t / n, current);
    const Eigen::ArrayXd diff = (current - previous).array().abs();
    const bool converged = (diff <= kQuadTol * current.array().abs()).all();
    if (converged || n >= kMaxIntervals) {
      Quadrature q;
      q.error = diff / 15.0;
      q.value = current + (current - previous) / 15.0;
      return q;
    }
    previous = current;
  }
}

std::vector<EstimateReport> compute_reports(const HeatOperator& heat, double K, Dimension n,
                                            const GraphFunction& f, double t,
                                            std::size_t function_id, bool with_integral) {
  require_full_graph(heat, "gradient estimate verification");
  const auto& g = heat.graph();
  check_domain(g, f);
  require_nonnegative_time(t);
  if (!std::isfinite(K)) fail(ErrorCode::invalid_argument, "K must be finite");
  if ((f.array() < 0.0).any()) {
    fail(ErrorCode::invalid_argument, "gradient estimates are stated for nonnegative f");
  }

  const GraphFunction u = heat.apply(t, f);
  // Γ and Δ ignore the stationary part, which would otherwise leave a
  // rounding floor that the large coefficients at big |K|t amplify.
  const GraphFunction gamma_u = carre_du_champ(g, heat.apply_transient(t, f));
  const GraphFunction pt_gamma_f = heat.apply(t, carre_du_champ(g, f));
  const GraphFunction lap_f = laplacian(g, f);
  const GraphFunction pt_lap_f = heat.apply_transient(t, lap_f);
  const GraphFunction variance = heat.apply(t, f.cwiseAbs2()) - u.cwiseAbs2();
  const Eigen::ArrayXd lap_sq = pt_lap_f.array().square();

  const double inv_n = n.inverse();
  const double decay = exp_decay(K, t);
  const double decay2 = exp_decay2(K, t);

  // For large 2Kt, (ii)-(iv) are evaluated divided by e^{2Kt} and scaled
  // back at the end, so overflow gives +-inf instead of inf - inf.
  const double z = 2.0 * K * t;
  const bool rescaled = z > kRescaleExponent;
  const double e2kt = rescaled ? 1.0 : std::exp(z);
  const double lhs_weight = rescaled ? std::exp(-z) : 1.0;
  const double growth = rescaled ? decay : exp_growth(K, t);
  const double growth2 = rescaled ? -std::expm1(-z) / (K * K) - std::exp(-z) * 2.0 * t / K : exp_growth2(K, t);
  const double scale = rescaled ? std::exp(z) : 1.0;
  auto unscale = [&](double v) { return v == 0.0 ? 0.0 : v * scale; };

  const auto size = f.size();
  Eigen::VectorXd integral = Eigen::VectorXd::Zero(size);
  Eigen::VectorXd quad_error = Eigen::VectorXd::Zero(size);
  if (with_integral && inv_n > 0.0 && t > 0.0) {
    auto q = integrate_dimension_term(heat, lap_f, K, t, rescaled ? z : 0.0);
    integral = q.value;
    quad_error = q.error;
  }

  std::vector<EstimateReport> reports(static_cast<std::size_t>(size));
  for (Eigen::Index i = 0; i < size; ++i) {
    auto& r = reports[static_cast<std::size_t>(i)];
    r.function_id = function_id;
    r.t = t;
    r.x = static_cast<VertexIndex>(i);
    r.K = K;
    r.n = n;
    r.slack_ii = unscale(e2kt * pt_gamma_f[i] - 2.0 * inv_n * integral[i] - lhs_weight * gamma_u[i]);
    r.slack_iii = unscale(e2kt * pt_gamma_f[i] - growth * inv_n * lap_sq[i] - lhs_weight * gamma_u[i]);
    r.slack_iv = unscale(growth * pt_gamma_f[i] - growth2 * inv_n * lap_sq[i] - lhs_weight * variance[i]);
    r.slack_v = variance[i] - decay * gamma_u[i] - decay2 * inv_n * lap_sq[i];
    r.quadrature_error_ii = unscale(2.0 * inv_n * quad_error[i]);
    r.pass_ii = with_integral ? r.slack_ii >= -kReportTol : true;
    r.pass_iii = r.slack_iii >= -kReportTol;
    r.pass_iv = r.slack_iv >= -kReportTol;
    r.pass_v = r.slack_v >= -kReportTol;
  }
  return reports;
}

}  // namespace

double exp_growth(double K, double t) {
  if (std::abs(K) < kZeroCurvature) return 2.0 * t;
  return 2.0 * t * phi1(2.0 * K * t);
}

double exp_decay(double K, double t) {
  if (std::abs(K) < kZeroCurvature) return 2.0 * t;
  return 2.0 * t * phi1(-2.0 * K * t);
}

double exp_growth2(double K, double t) {
  if (std::abs(K) < kZeroCurvature) return 2.0 * t * t;
  return 4.0 * t * t * phi2(2.0 * K * t);
}

double exp_decay2(double K, double t) {
  if (std::abs(K) < kZeroCurvature) return 2.0 * t * t;
  return 4.0 * t * t * phi2(-2.0 * K * t);
}

std::vector<EstimateReport> verify_estimates_all(const HeatOperator& heat, double K, Dimension n,
                                                 const GraphFunction& f, double t,
                                                 std::size_t function_id) {
  return compute_reports(heat, K, n, f, t, function_id, true);
}

EstimateReport verify_estimates(const HeatOperator& heat, double K, Dimension n,
                                const GraphFunction& f, double t, VertexIndex x,
                                std::size_t function_id) {
  heat.graph().check_vertex(x);
  return compute_reports(heat, K, n, f, t, function_id, true)[x];
}

EstimateReport verify_estimates(const WeightedGraph& g, double K, Dimension n,
                                const GraphFunction& f, double t, VertexIndex x) {
  return verify_estimates(HeatOperator(g), K, n, f, t, x);
}

SweepResult estimate_sweep(const HeatOperator& heat, double K, Dimension n,
                           std::span<const double> t_grid,
                           const std::vector<GraphFunction>& corpus, unsigned jobs) {
  require_full_graph(heat, "estimate sweep");
  SweepResult result;
  if (corpus.empty()) {
    result.warnings.push_back("empty function corpus: vacuous pass");
    return result;
  }
  if (t_grid.empty()) result.warnings.push_back("empty time grid: vacuous pass");

  std::vector<std::vector<EstimateReport>> per_function(corpus.size());
  auto work = [&](std::size_t i) {
    for (double t : t_grid) {
      auto reports = verify_estimates_all(heat, K, n, corpus[i], t, i);
      per_function[i].insert(per_function[i].end(), reports.begin(), reports.end());
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(corpus.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < corpus.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < corpus.size(); i = next++) work(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (auto& reports : per_function) {
    for (auto& r : reports) {
      if (!r.all_pass() && !result.first_counterexample) {
        result.first_counterexample = result.reports.size();
        result.all_pass = false;
      }
      result.reports.push_back(r);
    }
  }
  return result;
}

std::vector<GraphFunction> standard_corpus(const HeatOperator& heat, std::uint64_t seed,
                                           std::size_t random_count, double smoothing_time) {
  const auto& g = heat.graph();
  const auto size = static_cast<Eigen::Index>(g.size());
  std::vector<GraphFunction> corpus;
  for (VertexIndex x = 0; x < g.size(); ++x) corpus.push_back(indicator(g, x));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < random_count; ++i) {
    GraphFunction f(size);
    for (Eigen::Index j = 0; j < size; ++j) f[j] = unit(rng);
    corpus.push_back(std::move(f));
  }
  for (VertexIndex x = 0; x < g.size(); ++x) {
    // Positivity of P_t holds up to rounding; clamp the last few ulps.
    corpus.push_back(heat.apply(smoothing_time, indicator(g, x)).cwiseMax(0.0));
  }
  return corpus;
}

std::vector<GraphFunction> witness_corpus(const WeightedGraph& g, Dimension n) {
  std::vector<GraphFunction> corpus;
  for (VertexIndex x = 0; x < g.size(); ++x) {
    const auto solved = curvature_solve(g, x, n);
    if (g.neighbors(x).empty()) continue;
    GraphFunction w = tightness_witness(g, x, n, solved.curvature);
    const double lo = w.minCoeff();
    const double spread = w.maxCoeff() - lo;
    if (!(spread > 1e-14)) continue;
    corpus.push_back(((w.array() - lo) / spread).matrix());
  }
  return corpus;
}

ConverseScan converse_scan(const HeatOperator& heat, double K, Dimension n,
                           const std::vector<GraphFunction>& corpus,
                           std::span<const double> t_grid) {
  ConverseScan scan;
  for (double t : t_grid) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto reports = compute_reports(heat, K, n, corpus[i], t, i, false);
      for (const auto& r : reports) {
        if (!r.pass_iii && (!scan.violated || r.slack_iii < scan.slack_iii)) {
          scan.violated = true;
          scan.t = t;
          scan.function_id = i;
          scan.x = r.x;
          scan.slack_iii = r.slack_iii;
        }
      }
    }
    if (scan.violated) return scan;
  }
  return scan;
}

std::vector<double> geometric_grid(double t_min, double t_max, std::size_t count) {
  if (!(t_min > 0.0) || t_max < t_min || count == 0) {
    fail(ErrorCode::invalid_argument, "geometric grid needs 0 < t_min <= t_max and count >= 1");
  }
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = t_min;
    return grid;
  }
  const double ratio = std::log(t_max / t_min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) grid[i] = t_min * std::exp(ratio * static_cast<double>(i));
  grid.back() = t_max;
  return grid;
}

double GreenTriple::relative_gap() const noexcept {
  const double gap = std::max({std::abs(f_laplace_h - laplace_f_h), std::abs(f_laplace_h - gamma_sum),
                               std::abs(laplace_f_h - gamma_sum)});
  if (term_scale == 0.0) return gap == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return gap / term_scale;
}

GreenTriple green_check(const WeightedGraph& g, const GraphFunction& f, const GraphFunction& h) {
  check_domain(g, f);
  check_domain(g, h);
  const Eigen::Map<const Eigen::VectorXd> m(g.measures().data(), static_cast<Eigen::Index>(g.size()));
  const Eigen::ArrayXd a = f.array() * laplacian(g, h).array() * m.array();
  const Eigen::ArrayXd b = laplacian(g, f).array() * h.array() * m.array();
  const Eigen::ArrayXd c = carre_du_champ(g, f, h).array() * m.array();
  GreenTriple triple;
  triple.f_laplace_h = a.sum();
  triple.laplace_f_h = b.sum();
  triple.gamma_sum = -c.sum();
  triple.term_scale = std::max({a.abs().sum(), b.abs().sum(), c.abs().sum()});
  return triple;
}

EcNormPair ec_norm_check(const WeightedGraph& g) {
  EcNormPair pair;
  pair.ellipticity_constant = ellipticity_constant(g).constant;
  for (VertexIndex y = 0; y < g.size(); ++y) {
    const GraphFunction image = adjacency_apply(g, indicator(g, y));
    const double ratio = image.cwiseAbs().maxCoeff() / g.measure(y);
    pair.operator_norm = std::max(pair.operator_norm, ratio);
  }
  return pair;
}

CutoffResult build_cutoff(const HeatOperator& heat, const std::vector<VertexIndex>& target_set,
                          double epsilon, const std::vector<VertexIndex>& source_set) {
  require_full_graph(heat, "cutoff construction");
  const auto& g = heat.graph();
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    fail(ErrorCode::invalid_argument, "epsilon must be positive");
  }
  for (auto x : target_set) g.check_vertex(x);
  for (auto x : source_set) g.check_vertex(x);

  const auto profile = curvature_profile(g, Dimension::infinite());
  if (profile.global_curvature < -kCurvatureTol) {
    fail(ErrorCode::precondition, "graph violates CD(0, inf): global curvature " +
                                      std::to_string(profile.global_curvature));
  }

  CutoffResult result;
  result.target_set = target_set;
  result.epsilon = epsilon;
  result.time = 2.0 / epsilon;
  GraphFunction source = GraphFunction::Zero(static_cast<Eigen::Index>(g.size()));
  for (auto x : source_set) source[static_cast<Eigen::Index>(x)] = 1.0;
  const GraphFunction p = heat.apply(result.time, source);
  for (auto x : target_set) {
    if (p[static_cast<Eigen::Index>(x)] < 0.75) {
      fail(ErrorCode::precondition, "P_t 1_U = " + std::to_string(p[static_cast<Eigen::Index>(x)]) +
                                        " < 3/4 at '" + g.id(x) + "'; choose a larger U");
    }
  }
  result.eta = (2.0 * p.array() - 0.5).max(0.0).min(1.0).matrix();
  const GraphFunction gamma_eta = carre_du_champ(g, result.eta);
  result.max_gamma = gamma_eta.size() ? gamma_eta.maxCoeff() : 0.0;

  // 1_U^2 = 1_U, so P_t 1_U^2 - (P_t 1_U)^2 = p - p^2.
  const GraphFunction four_gamma_p = 4.0 * carre_du_champ(g, p);
  const GraphFunction variance_bound = (2.0 / result.time) * (p - p.cwiseAbs2());
  const double first = (gamma_eta - four_gamma_p).maxCoeff();
  const double second = (four_gamma_p - variance_bound).maxCoeff();
  result.intermediate_bound_excess = std::max(first, second);
  result.intermediate_bound_holds = result.intermediate_bound_excess <= 1e-12;
  return result;
}

FinitenessReport finiteness_probe(const HeatOperator& heat, double K,
                                  std::span<const double> epsilon_grid, std::uint64_t seed,
                                  std::size_t samples) {
  require_full_graph(heat, "finiteness probe");
  const auto& g = heat.graph();
  if (!(K > 0.0) || !std::isfinite(K)) fail(ErrorCode::invalid_argument, "K must be positive");
  for (double eps : epsilon_grid) {
    if (!(eps > 0.0)) fail(ErrorCode::invalid_argument, "epsilon grid entries must be positive");
  }
  if (!is_connected(g)) fail(ErrorCode::precondition, "finiteness probe needs a connected graph");
  const auto profile = curvature_profile(g, Dimension::infinite());
  if (profile.global_curvature < K - kCurvatureTol) {
    fail(ErrorCode::precondition, "graph does not satisfy CD(K, inf): global curvature " +
                                      std::to_string(profile.global_curvature));
  }

  FinitenessReport report;
  report.K = K;
  report.epsilon_grid.assign(epsilon_grid.begin(), epsilon_grid.end());
  report.samples = samples;
  report.jensen_max_excess = -std::numeric_limits<double>::infinity();
  report.decay_max_excess = -std::numeric_limits<double>::infinity();

  const auto size = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd deg(size);
  for (VertexIndex x = 0; x < g.size(); ++x) deg[static_cast<Eigen::Index>(x)] = degree(g, x);

  Eigen::VectorXd jensen = Eigen::VectorXd::Constant(size, -std::numeric_limits<double>::infinity());
  Eigen::VectorXd decay = jensen;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> symmetric(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t s = 0; s < samples; ++s) {
    GraphFunction fn(size);
    for (Eigen::Index i = 0; i < size; ++i) fn[i] = symmetric(rng);
    const Eigen::ArrayXd excess =
        laplacian(g, fn).array().square() - 2.0 * deg.array() * carre_du_champ(g, fn).array();
    jensen = jensen.cwiseMax(excess.matrix());

    GraphFunction eta(size);
    for (Eigen::Index i = 0; i < size; ++i) eta[i] = unit(rng);
    const double eps = carre_du_champ(g, eta).maxCoeff();
    const GraphFunction limit = heat.stationary_limit(eta);
    const Eigen::ArrayXd drop =
        eta.array() - limit.array() - (2.0 * eps * deg.array()).sqrt() / K;
    decay = decay.cwiseMax(drop.matrix());
  }

  for (VertexIndex x = 0; x < g.size(); ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    FinitenessVertex v;
    v.x = x;
    v.degree = deg[xi];
    v.vacuous = v.degree == 0.0;
    v.epsilon_threshold = v.vacuous ? std::numeric_limits<double>::infinity()
                                    : K * K / (2.0 * v.degree);
    for (double eps : epsilon_grid) {
      const double bound = std::sqrt(2.0 * eps * v.degree) / K;
      v.bounds.push_back(bound);
      v.contradiction.push_back(!v.vacuous && bound < 1.0);
    }
    v.jensen_max_excess = jensen[xi];
    v.decay_max_excess = decay[xi];
    report.jensen_max_excess = std::max(report.jensen_max_excess, jensen[xi]);
    report.decay_max_excess = std::max(report.decay_max_excess, decay[xi]);
    report.vertices.push_back(std::move(v));
  }
  report.inequalities_hold = samples == 0 ||
                             (report.jensen_max_excess <= 1e-10 && report.decay_max_excess <= 1e-10);
  return report;
}

double TaylorCoefficients::relative_error() const noexcept {
  auto rel = [](double fitted, double exact) {
    const double diff = std::abs(fitted - exact);
    if (exact == 0.0) return diff;
    return diff / std::abs(exact);
  };
  return std::max(rel(fitted_first, exact_first), rel(fitted_second, exact_second));
}

double TaylorReport::max_relative_error() const noexcept {
  return std::max({variance.relative_error(), growth.relative_error(), decay.relative_error()});
}

namespace {

constexpr int kRichardsonLevels = 7;

// The fitted series are differences of nearly equal terms, so they are
// evaluated in extended precision.
using Real = long double;
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Richardson extrapolation of values sampled at h, h/2, h/4, ... whose error
// expands in integer powers of h.
Real richardson(std::vector<Real> column) {
  Real scale = 2.0L;
  for (std::size_t level = 1; level < column.size(); ++level, scale *= 2.0L) {
    for (std::size_t i = column.size() - 1; i >= level; --i) {
      column[i] = (scale * column[i] - column[i - 1]) / (scale - 1.0L);
    }
  }
  return column.back();
}

template <typename Series>
void fit(const Series& psi, double h0, TaylorCoefficients& out) {
  std::vector<Real> first;
  std::vector<Real> second;
  for (int j = 0; j < kRichardsonLevels; ++j) {
    const Real h = h0 / std::ldexp(1.0L, j);
    const Real at_h = psi(h);
    const Real at_2h = psi(2.0L * h);
    first.push_back(at_h / h);
    second.push_back((at_2h - 2.0L * at_h) / (2.0L * h * h));
  }
  out.fitted_first = static_cast<double>(richardson(std::move(first)));
  out.fitted_second = static_cast<double>(richardson(std::move(second)));
}

RealVector real_laplacian(const WeightedGraph& g, const RealVector& f) {
  RealVector out(f.size());
  for (VertexIndex x = 0; x < g.size(); ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    Real sum = 0.0L;
    for (const auto& nb : g.neighbors(x)) sum += nb.weight * (f[static_cast<Eigen::Index>(nb.vertex)] - f[xi]);
    out[xi] = sum / g.measure(x);
  }
  return out;
}

Real real_gamma(const WeightedGraph& g, const RealVector& f, VertexIndex x) {
  const auto xi = static_cast<Eigen::Index>(x);
  Real sum = 0.0L;
  for (const auto& nb : g.neighbors(x)) {
    const Real d = f[static_cast<Eigen::Index>(nb.vertex)] - f[xi];
    sum += nb.weight * d * d;
  }
  return sum / (2.0L * g.measure(x));
}

// Power series of e^{tΔ}; only called with t small against the spectrum.
RealVector real_heat(const WeightedGraph& g, Real t, const RealVector& f) {
  RealVector term = f;
  RealVector sum = f;
  for (int k = 1; k < 400; ++k) {
    term = (t / k) * real_laplacian(g, term);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-24L * sum.cwiseAbs().maxCoeff()) break;
  }
  return sum;
}

// 2t (e^z - 1) / z with z = 2Kt, and its mirror for -K.
Real real_growth(Real K, Real t) {
  const Real z = 2.0L * K * t;
  if (z == 0.0L) return 2.0L * t;
  return 2.0L * t * std::expm1(z) / z;
}

}  // namespace

TaylorReport taylor_check(const HeatOperator& heat, const GraphFunction& f, VertexIndex x,
                          double K) {
  require_full_graph(heat, "Taylor check");
  const auto& g = heat.graph();
  g.check_vertex(x);
  check_domain(g, f);
  if (!std::isfinite(K)) fail(ErrorCode::invalid_argument, "K must be finite");
  if ((f.array() < 0.0).any()) fail(ErrorCode::invalid_argument, "Taylor check needs f >= 0");

  const auto xi = static_cast<Eigen::Index>(x);
  const GraphFunction gamma_f = carre_du_champ(g, f);
  const GraphFunction lap_f = laplacian(g, f);
  const double gam = gamma_f[xi];
  const double lap_gam = laplacian(g, gamma_f)[xi];
  const double mixed = carre_du_champ(g, f, lap_f)[xi];

  TaylorReport report;
  report.x = x;
  report.K = K;
  report.variance.exact_first = 2.0 * gam;
  report.variance.exact_second = lap_gam + 2.0 * mixed;
  report.growth.exact_first = 2.0 * gam;
  report.growth.exact_second = 2.0 * (lap_gam + K * gam);
  report.decay.exact_first = 2.0 * gam;
  report.decay.exact_second = 2.0 * (2.0 * mixed - K * gam);

  const double spectral_scale = std::max({heat.eigenvalues().maxCoeff(), 2.0 * std::abs(K), 1e-12});
  const double h0 = std::min(0.5, 0.5 / spectral_scale);
  const RealVector fr = f.cast<Real>();
  const RealVector f_sq = fr.cwiseAbs2();
  const RealVector gamma_fr = gamma_f.cast<Real>();
  const Real Kr = K;

  fit([&](Real t) {
        const RealVector u = real_heat(g, t, fr);
        return real_heat(g, t, f_sq)[xi] - u[xi] * u[xi];
      },
      h0, report.variance);
  fit([&](Real t) { return real_growth(Kr, t) * real_heat(g, t, gamma_fr)[xi]; }, h0, report.growth);
  fit([&](Real t) { return real_growth(-Kr, t) * real_gamma(g, real_heat(g, t, fr), x); }, h0,
      report.decay);
  return report;
}

}  // namespace bemery
