#include "bemery/curvature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "bemery/error.hpp"

namespace bemery {

Dimension::Dimension(double n) : n_(n) {
  if (!(n > 0.0)) fail(ErrorCode::invalid_argument, "dimension n must be positive");
}

Dimension Dimension::infinite() { return Dimension(std::numeric_limits<double>::infinity()); }

bool Dimension::is_infinite() const noexcept { return std::isinf(n_); }

double Dimension::inverse() const noexcept { return is_infinite() ? 0.0 : 1.0 / n_; }

Eigen::MatrixXd cd_matrix(const LocalForms& forms, double K, Dimension n) {
  Eigen::MatrixXd m = forms.gamma2_matrix - K * forms.gamma_matrix;
  if (!n.is_infinite()) {
    m.noalias() -= n.inverse() * forms.laplace_vector.transpose() * forms.laplace_vector;
  }
  return m;
}

namespace {

double smallest_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

// Unshifted Cholesky: succeeds iff M(K) is positive definite, up to rounding.
bool feasible(const LocalForms& forms, double K, Dimension n) {
  Eigen::LLT<Eigen::MatrixXd> llt(cd_matrix(forms, K, n));
  return llt.info() == Eigen::Success;
}

}  // namespace

CdCheckResult cd_check(const WeightedGraph& g, double K, Dimension n, VertexIndex x) {
  if (!std::isfinite(K)) fail(ErrorCode::invalid_argument, "curvature K must be finite");
  const auto forms = local_forms(g, x);
  CdCheckResult result;
  result.min_eigenvalue = smallest_eigenvalue(cd_matrix(forms, K, n));
  result.holds = result.min_eigenvalue >= -kEigTol;
  return result;
}

CurvatureResult curvature_solve(const WeightedGraph& g, VertexIndex x, Dimension n) {
  const auto forms = local_forms(g, x);
  CurvatureResult result;
  result.vertex = x;
  result.dimension = n;
  if (forms.support.empty()) {
    result.curvature = kCurvatureCap;
    result.converged = true;
    return result;
  }

  double lo = -1.0;
  double hi = 1.0;
  while (feasible(forms, hi, n)) {
    if (hi >= kCurvatureCap) {
      result.curvature = kCurvatureCap;
      result.converged = false;
      return result;
    }
    lo = hi;
    hi = std::min(2.0 * hi, kCurvatureCap);
  }
  while (!feasible(forms, lo, n)) {
    if (lo <= -kCurvatureCap) {
      result.curvature = -kCurvatureCap;
      result.converged = false;
      return result;
    }
    hi = lo;
    lo = std::max(2.0 * lo, -kCurvatureCap);
  }
  while (hi - lo > kCurvatureTol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (feasible(forms, mid, n) ? lo : hi) = mid;
  }
  result.curvature = lo;
  result.bracket_width = hi - lo;
  result.converged = true;
  return result;
}

CurvatureProfile curvature_profile(const WeightedGraph& g, Dimension n, unsigned jobs) {
  CurvatureProfile profile;
  profile.per_vertex.resize(g.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(g.size())));
  if (workers <= 1) {
    for (VertexIndex x = 0; x < g.size(); ++x) profile.per_vertex[x] = curvature_solve(g, x, n);
  } else {
    std::atomic<VertexIndex> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (VertexIndex x = next++; x < g.size(); x = next++) {
            profile.per_vertex[x] = curvature_solve(g, x, n);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (const auto& r : profile.per_vertex)
    profile.global_curvature = std::min(profile.global_curvature, r.curvature);
  return profile;
}

GraphFunction tightness_witness(const WeightedGraph& g, VertexIndex x, Dimension n, double K) {
  const auto forms = local_forms(g, x);
  if (forms.support.empty()) return GraphFunction::Zero(static_cast<Eigen::Index>(g.size()));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cd_matrix(forms, K, n));
  return forms.extend(g, solver.eigenvectors().col(0));
}

}  // namespace bemery
