#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bemery/graph.hpp"

namespace bemery {

// A real function on the vertex set, indexed by VertexIndex.
using GraphFunction = Eigen::VectorXd;

// Throws Error(domain_mismatch) unless f has one value per vertex of g.
void check_domain(const WeightedGraph& g, const GraphFunction& f);

GraphFunction indicator(const WeightedGraph& g, VertexIndex x);

// (Δf)(x) = (1/m(x)) sum_y b(x,y) (f(y) - f(x)).
GraphFunction laplacian(const WeightedGraph& g, const GraphFunction& f);

// Adjacency operator (Af)(x) = (1/m(x)) sum_y b(x,y) f(y) = Δf + Deg·f.
GraphFunction adjacency_apply(const WeightedGraph& g, const GraphFunction& f);

// Γ_k(f, h) for k in {0, 1, 2} through the defining recursion
//   Γ_0(f, h) = f h,  2Γ_{k+1}(f, h) = ΔΓ_k(f, h) - Γ_k(f, Δh) - Γ_k(Δf, h).
GraphFunction gamma_k(const WeightedGraph& g, int k, const GraphFunction& f,
                      const GraphFunction& h);

// Closed form Γ(f, h)(x) = (1/2m(x)) sum_y b(x,y)(f(y)-f(x))(h(y)-h(x)).
GraphFunction carre_du_champ(const WeightedGraph& g, const GraphFunction& f,
                             const GraphFunction& h);
inline GraphFunction carre_du_champ(const WeightedGraph& g, const GraphFunction& f) {
  return carre_du_champ(g, f, f);
}

/// Quadratic forms of Γ_2, Γ and the linear form of Δ at a single vertex,
/// restricted to functions with f(center) = 0. Coordinates follow `support`,
/// the punctured 2-ball around the center in increasing vertex order.
struct LocalForms {
  VertexIndex center = 0;
  std::vector<VertexIndex> support;
  Eigen::MatrixXd gamma2_matrix;
  Eigen::MatrixXd gamma_matrix;
  Eigen::RowVectorXd laplace_vector;

  // Coordinates of a full graph function on the support.
  Eigen::VectorXd restrict(const GraphFunction& f) const;
  // Graph function with the given support coordinates and zero elsewhere.
  GraphFunction extend(const WeightedGraph& g, const Eigen::VectorXd& coords) const;
};

LocalForms local_forms(const WeightedGraph& g, VertexIndex x);

}  // namespace bemery
