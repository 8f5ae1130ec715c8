#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bemery/gamma.hpp"
#include "bemery/graph.hpp"

namespace bemery {

// Absolute tolerance on the smallest eigenvalue of M(K).
inline constexpr double kEigTol = 1e-10;
// Final bisection bracket width.
inline constexpr double kCurvatureTol = 1e-9;
// Solved curvatures are clamped to [-kCurvatureCap, kCurvatureCap].
inline constexpr double kCurvatureCap = 1e6;

/// Dimension parameter n of CD(K, n): a positive real or infinity.
class Dimension {
 public:
  // Throws Error(invalid_argument) unless n > 0 (infinity allowed).
  explicit Dimension(double n);
  static Dimension infinite();

  bool is_infinite() const noexcept;
  double value() const noexcept { return n_; }
  // 1/n, zero for n = infinity.
  double inverse() const noexcept;

 private:
  double n_;
};

// M(K) = A_2 - (1/n) d^T d - K B; CD(K, n) holds at the center iff M(K) >= 0.
Eigen::MatrixXd cd_matrix(const LocalForms& forms, double K, Dimension n);

struct CdCheckResult {
  bool holds = true;
  // Smallest eigenvalue of M(K); +infinity for an empty support.
  double min_eigenvalue = 0.0;
};

CdCheckResult cd_check(const WeightedGraph& g, double K, Dimension n, VertexIndex x);

struct CurvatureResult {
  VertexIndex vertex = 0;
  Dimension dimension = Dimension::infinite();
  // Feasible end of the final bracket.
  double curvature = 0.0;
  bool converged = false;
  double bracket_width = 0.0;
};

// Largest K with CD(K, n) at x, by bisection on the smallest eigenvalue of
// M(K). Isolated vertices return kCurvatureCap, flagged converged.
CurvatureResult curvature_solve(const WeightedGraph& g, VertexIndex x, Dimension n);

struct CurvatureProfile {
  std::vector<CurvatureResult> per_vertex;
  double global_curvature = kCurvatureCap;
};

// Per-vertex solves spread over `jobs` worker threads.
CurvatureProfile curvature_profile(const WeightedGraph& g, Dimension n, unsigned jobs = 1);

// Eigenvector of M(K) for its smallest eigenvalue, extended by zero at x and
// outside the 2-ball; the zero function when x is isolated.
GraphFunction tightness_witness(const WeightedGraph& g, VertexIndex x, Dimension n, double K);

}  // namespace bemery
