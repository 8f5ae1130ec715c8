#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bemery/gamma.hpp"
#include "bemery/graph.hpp"

namespace bemery {

/// Heat semigroup P_t = e^{tΔ} of a finite graph.
///
/// Built from the eigendecomposition of S = D^{1/2} (-Δ) D^{-1/2} with
/// D = diag(m), which is symmetric: S(x,x) = Deg(x), S(x,y) =
/// -b(x,y)/sqrt(m(x)m(y)). With a Dirichlet domain Ω the rows and columns
/// outside Ω are removed, so functions vanish off Ω and heat mass can leave
/// through the boundary.
class HeatOperator {
 public:
  // Throws Error(invalid_argument) for an empty graph or empty domain and
  // Error(unknown_vertex) for domain vertices outside the graph.
  explicit HeatOperator(WeightedGraph graph,
                        std::optional<std::vector<VertexIndex>> dirichlet_domain = std::nullopt);

  const WeightedGraph& graph() const noexcept { return graph_; }
  bool is_dirichlet() const noexcept { return dirichlet_; }
  // Sorted vertices of Ω; every vertex without a Dirichlet domain.
  const std::vector<VertexIndex>& domain() const noexcept { return domain_; }
  bool in_domain(VertexIndex x) const;

  // Ascending, indexed like the columns of eigenbasis().
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  // Orthonormal eigenvectors of S over domain() coordinates.
  const Eigen::MatrixXd& eigenbasis() const noexcept { return eigenbasis_; }

  // P_t f, with f restricted to Ω first. t = 0 returns that restriction
  // unchanged. Throws Error(invalid_argument) for t < 0.
  GraphFunction apply(double t, const GraphFunction& f) const;

  // (P_t 1)(x); Error(unknown_vertex) when x is outside the domain.
  double heat_mass(double t, VertexIndex x) const;

  // lim_{t -> inf} P_t f: projection onto the kernel of S.
  GraphFunction stationary_limit(const GraphFunction& f) const;

  // P_t f - stationary_limit(f), summed over the decaying modes only. Keeps
  // its relative accuracy for large t where apply() bottoms out at rounding.
  GraphFunction apply_transient(double t, const GraphFunction& f) const;

 private:
  Eigen::VectorXd to_spectral(const GraphFunction& f) const;
  GraphFunction from_spectral(const Eigen::VectorXd& coeffs) const;

  WeightedGraph graph_;
  bool dirichlet_ = false;
  std::vector<VertexIndex> domain_;
  std::vector<char> in_domain_;
  Eigen::VectorXd sqrt_measure_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenbasis_;
};

// Eigenvalues below this count as the kernel of S.
inline constexpr double kKernelTol = 1e-10;

// s -> P_s Γ_k(P_{t-s} f)(x) on a sorted grid in [0, t]; k in {0, 1} with
// Γ_0(u) = u^2 and Γ_1 the carré du champ.
std::vector<double> semigroup_gamma_path(const HeatOperator& heat, int k, const GraphFunction& f,
                                         double t, std::span<const double> s_grid, VertexIndex x);

}  // namespace bemery
