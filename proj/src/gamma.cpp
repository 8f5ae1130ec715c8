#include "bemery/gamma.hpp"

#include <string>
#include <unordered_map>

#include "bemery/error.hpp"

namespace bemery {

void check_domain(const WeightedGraph& g, const GraphFunction& f) {
  if (static_cast<std::size_t>(f.size()) != g.size()) {
    fail(ErrorCode::domain_mismatch, "function has " + std::to_string(f.size()) +
                                         " values but the graph has " +
                                         std::to_string(g.size()) + " vertices");
  }
}

GraphFunction indicator(const WeightedGraph& g, VertexIndex x) {
  g.check_vertex(x);
  GraphFunction f = GraphFunction::Zero(static_cast<Eigen::Index>(g.size()));
  f[static_cast<Eigen::Index>(x)] = 1.0;
  return f;
}

GraphFunction laplacian(const WeightedGraph& g, const GraphFunction& f) {
  check_domain(g, f);
  GraphFunction out(f.size());
  for (VertexIndex x = 0; x < g.size(); ++x) {
    const double fx = f[static_cast<Eigen::Index>(x)];
    double sum = 0.0;
    for (const auto& n : g.neighbors(x)) sum += n.weight * (f[static_cast<Eigen::Index>(n.vertex)] - fx);
    out[static_cast<Eigen::Index>(x)] = sum / g.measure(x);
  }
  return out;
}

GraphFunction adjacency_apply(const WeightedGraph& g, const GraphFunction& f) {
  check_domain(g, f);
  GraphFunction out(f.size());
  for (VertexIndex x = 0; x < g.size(); ++x) {
    double sum = 0.0;
    for (const auto& n : g.neighbors(x)) sum += n.weight * f[static_cast<Eigen::Index>(n.vertex)];
    out[static_cast<Eigen::Index>(x)] = sum / g.measure(x);
  }
  return out;
}

GraphFunction gamma_k(const WeightedGraph& g, int k, const GraphFunction& f,
                      const GraphFunction& h) {
  if (k < 0 || k > 2) {
    fail(ErrorCode::invalid_argument, "gamma order k must be 0, 1 or 2, got " + std::to_string(k));
  }
  check_domain(g, f);
  check_domain(g, h);
  if (k == 0) return f.cwiseProduct(h);
  const GraphFunction lf = laplacian(g, f);
  const GraphFunction lh = laplacian(g, h);
  return 0.5 * (laplacian(g, gamma_k(g, k - 1, f, h)) - gamma_k(g, k - 1, f, lh) -
                gamma_k(g, k - 1, lf, h));
}

GraphFunction carre_du_champ(const WeightedGraph& g, const GraphFunction& f,
                             const GraphFunction& h) {
  check_domain(g, f);
  check_domain(g, h);
  GraphFunction out(f.size());
  for (VertexIndex x = 0; x < g.size(); ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    double sum = 0.0;
    for (const auto& n : g.neighbors(x)) {
      const auto yi = static_cast<Eigen::Index>(n.vertex);
      sum += n.weight * (f[yi] - f[xi]) * (h[yi] - h[xi]);
    }
    out[xi] = sum / (2.0 * g.measure(x));
  }
  return out;
}

Eigen::VectorXd LocalForms::restrict(const GraphFunction& f) const {
  Eigen::VectorXd coords(static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i)
    coords[static_cast<Eigen::Index>(i)] = f[static_cast<Eigen::Index>(support[i])];
  return coords;
}

GraphFunction LocalForms::extend(const WeightedGraph& g, const Eigen::VectorXd& coords) const {
  GraphFunction f = GraphFunction::Zero(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < support.size(); ++i)
    f[static_cast<Eigen::Index>(support[i])] = coords[static_cast<Eigen::Index>(i)];
  return f;
}

// The forms are assembled on ball(x, 2) as matrices of the same recursion
// that gamma_k evaluates pointwise:
//   G_y        Γ(·,·)(y) for y in ball(x, 1),
//   L          rows of Δ at ball(x, 1),
//   Γ_2 at x   (1/2) [ sum_y L(x,y) G_y - G_x L - L^T G_x ],
// and the center coordinate is then dropped.
LocalForms local_forms(const WeightedGraph& g, VertexIndex x) {
  const auto region = ball(g, x, 2);
  const auto inner = ball(g, x, 1);
  const auto n = static_cast<Eigen::Index>(region.size());
  std::unordered_map<VertexIndex, Eigen::Index> local;
  for (std::size_t i = 0; i < region.size(); ++i) local[region[i]] = static_cast<Eigen::Index>(i);

  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::MatrixXd> grad(inner.size());
  for (std::size_t k = 0; k < inner.size(); ++k) {
    const VertexIndex y = inner[k];
    const Eigen::Index yi = local.at(y);
    const double my = g.measure(y);
    Eigen::MatrixXd& gy = grad[k];
    gy = Eigen::MatrixXd::Zero(n, n);
    for (const auto& nb : g.neighbors(y)) {
      const Eigen::Index zi = local.at(nb.vertex);
      lap(yi, zi) += nb.weight / my;
      lap(yi, yi) -= nb.weight / my;
      const double c = nb.weight / (2.0 * my);
      gy(zi, zi) += c;
      gy(yi, yi) += c;
      gy(zi, yi) -= c;
      gy(yi, zi) -= c;
    }
  }

  const Eigen::Index xi = local.at(x);
  const Eigen::MatrixXd* gx = nullptr;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < inner.size(); ++k) {
    const Eigen::Index yi = local.at(inner[k]);
    sum += lap(xi, yi) * grad[k];
    if (inner[k] == x) gx = &grad[k];
  }
  Eigen::MatrixXd gamma2 = 0.5 * (sum - (*gx) * lap - lap.transpose() * (*gx));
  gamma2 = 0.5 * (gamma2 + gamma2.transpose()).eval();

  LocalForms forms;
  forms.center = x;
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < region.size(); ++i) {
    if (region[i] != x) {
      forms.support.push_back(region[i]);
      keep.push_back(static_cast<Eigen::Index>(i));
    }
  }
  const auto s = static_cast<Eigen::Index>(keep.size());
  forms.gamma2_matrix.resize(s, s);
  forms.gamma_matrix.resize(s, s);
  forms.laplace_vector.resize(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    forms.laplace_vector[i] = lap(xi, keep[i]);
    for (Eigen::Index j = 0; j < s; ++j) {
      forms.gamma2_matrix(i, j) = gamma2(keep[i], keep[j]);
      forms.gamma_matrix(i, j) = (*gx)(keep[i], keep[j]);
    }
  }
  return forms;
}

}  // namespace bemery
