#include "bemery/heat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bemery/error.hpp"

namespace bemery {

HeatOperator::HeatOperator(WeightedGraph graph,
                           std::optional<std::vector<VertexIndex>> dirichlet_domain)
    : graph_(std::move(graph)), dirichlet_(dirichlet_domain.has_value()) {
  if (graph_.empty()) fail(ErrorCode::invalid_argument, "heat operator of the empty graph");
  if (dirichlet_) {
    domain_ = std::move(*dirichlet_domain);
    if (domain_.empty()) fail(ErrorCode::invalid_argument, "empty Dirichlet domain");
    for (auto x : domain_) graph_.check_vertex(x);
    std::sort(domain_.begin(), domain_.end());
    domain_.erase(std::unique(domain_.begin(), domain_.end()), domain_.end());
  } else {
    domain_.resize(graph_.size());
    for (VertexIndex x = 0; x < graph_.size(); ++x) domain_[x] = x;
  }
  in_domain_.assign(graph_.size(), 0);
  std::vector<Eigen::Index> local(graph_.size(), -1);
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    in_domain_[domain_[i]] = 1;
    local[domain_[i]] = static_cast<Eigen::Index>(i);
  }

  const auto n = static_cast<Eigen::Index>(domain_.size());
  sqrt_measure_.resize(n);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const VertexIndex x = domain_[static_cast<std::size_t>(i)];
    sqrt_measure_[i] = std::sqrt(graph_.measure(x));
    s(i, i) = degree(graph_, x);
    for (const auto& nb : graph_.neighbors(x)) {
      const Eigen::Index j = local[nb.vertex];
      if (j >= 0) s(i, j) = -nb.weight / std::sqrt(graph_.measure(x) * graph_.measure(nb.vertex));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::invalid_argument, "eigendecomposition of the heat generator failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenbasis_ = solver.eigenvectors();
}

bool HeatOperator::in_domain(VertexIndex x) const {
  return x < in_domain_.size() && in_domain_[x];
}

Eigen::VectorXd HeatOperator::to_spectral(const GraphFunction& f) const {
  Eigen::VectorXd scaled(static_cast<Eigen::Index>(domain_.size()));
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    scaled[ii] = sqrt_measure_[ii] * f[static_cast<Eigen::Index>(domain_[i])];
  }
  return eigenbasis_.transpose() * scaled;
}

GraphFunction HeatOperator::from_spectral(const Eigen::VectorXd& coeffs) const {
  const Eigen::VectorXd scaled = eigenbasis_ * coeffs;
  GraphFunction out = GraphFunction::Zero(static_cast<Eigen::Index>(graph_.size()));
  for (std::size_t i = 0; i < domain_.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out[static_cast<Eigen::Index>(domain_[i])] = scaled[ii] / sqrt_measure_[ii];
  }
  return out;
}

GraphFunction HeatOperator::apply(double t, const GraphFunction& f) const {
  check_domain(graph_, f);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorCode::invalid_argument, "heat time t must be finite and nonnegative");
  }
  if (t == 0.0) {
    if (!dirichlet_) return f;
    GraphFunction out = GraphFunction::Zero(f.size());
    for (auto x : domain_) out[static_cast<Eigen::Index>(x)] = f[static_cast<Eigen::Index>(x)];
    return out;
  }
  Eigen::VectorXd coeffs = to_spectral(f);
  coeffs.array() *= (-t * eigenvalues_.array()).exp();
  return from_spectral(coeffs);
}

double HeatOperator::heat_mass(double t, VertexIndex x) const {
  graph_.check_vertex(x);
  if (!in_domain(x)) {
    fail(ErrorCode::unknown_vertex, "vertex '" + graph_.id(x) + "' is outside the Dirichlet domain");
  }
  const GraphFunction one = GraphFunction::Ones(static_cast<Eigen::Index>(graph_.size()));
  return apply(t, one)[static_cast<Eigen::Index>(x)];
}

GraphFunction HeatOperator::stationary_limit(const GraphFunction& f) const {
  check_domain(graph_, f);
  Eigen::VectorXd coeffs = to_spectral(f);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    if (eigenvalues_[i] > kKernelTol) coeffs[i] = 0.0;
  return from_spectral(coeffs);
}

GraphFunction HeatOperator::apply_transient(double t, const GraphFunction& f) const {
  check_domain(graph_, f);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    fail(ErrorCode::invalid_argument, "heat time t must be finite and nonnegative");
  }
  Eigen::VectorXd coeffs = to_spectral(f);
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    coeffs[i] = eigenvalues_[i] > kKernelTol ? coeffs[i] * std::exp(-t * eigenvalues_[i]) : 0.0;
  return from_spectral(coeffs);
}

std::vector<double> semigroup_gamma_path(const HeatOperator& heat, int k, const GraphFunction& f,
                                         double t, std::span<const double> s_grid, VertexIndex x) {
  if (k != 0 && k != 1) fail(ErrorCode::invalid_argument, "semigroup path order k must be 0 or 1");
  if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorCode::invalid_argument, "t must be nonnegative");
  const auto& g = heat.graph();
  g.check_vertex(x);
  check_domain(g, f);
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (!(s_grid[i] >= 0.0 && s_grid[i] <= t)) {
      fail(ErrorCode::invalid_argument, "grid point outside [0, t]");
    }
    if (i > 0 && s_grid[i] < s_grid[i - 1]) fail(ErrorCode::invalid_argument, "grid is not sorted");
  }
  std::vector<double> values;
  values.reserve(s_grid.size());
  for (double s : s_grid) {
    const GraphFunction u = heat.apply(std::max(0.0, t - s), f);
    const GraphFunction gk = (k == 0) ? GraphFunction(u.cwiseProduct(u)) : carre_du_champ(g, u);
    values.push_back(heat.apply(s, gk)[static_cast<Eigen::Index>(x)]);
  }
  return values;
}

}  // namespace bemery
