#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bemery/generators.hpp"

namespace oracle {

Eigen::MatrixXd dense_laplacian(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto u = static_cast<Eigen::Index>(e.u);
    const auto v = static_cast<Eigen::Index>(e.v);
    L(u, v) += e.weight / g.measure(e.u);
    L(v, u) += e.weight / g.measure(e.v);
    L(u, u) -= e.weight / g.measure(e.u);
    L(v, v) -= e.weight / g.measure(e.v);
  }
  return L;
}

Eigen::VectorXd gamma(const WeightedGraph& g, const Eigen::VectorXd& f, const Eigen::VectorXd& h) {
  const Eigen::MatrixXd L = dense_laplacian(g);
  const Eigen::VectorXd fh = f.cwiseProduct(h);
  return 0.5 * (L * fh - f.cwiseProduct(L * h) - h.cwiseProduct(L * f));
}

Eigen::VectorXd gamma2(const WeightedGraph& g, const Eigen::VectorXd& f, const Eigen::VectorXd& h) {
  const Eigen::MatrixXd L = dense_laplacian(g);
  return 0.5 * (L * gamma(g, f, h) - gamma(g, f, L * h) - gamma(g, L * f, h));
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);
  const auto n = a.rows();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 24; ++k) {
    term = term * scaled / k;
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Eigen::VectorXd heat(const WeightedGraph& g, double t, const Eigen::VectorXd& f) {
  return expm(t * dense_laplacian(g)) * f;
}

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Eigen::VectorXd uniform(std::size_t n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = dist(rng);
  return v;
}

WeightedGraph single_edge(double ma, double mb, double w) {
  return WeightedGraph({"a", "b"}, {ma, mb}, {{0, 1, w}});
}

WeightedGraph path_abc(double ma, double mb, double mc) {
  return WeightedGraph({"a", "b", "c"}, {ma, mb, mc}, {{0, 1, 1.0}, {1, 2, 1.0}});
}

WeightedGraph isolated(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("x" + std::to_string(i));
  return WeightedGraph(ids, std::vector<double>(n, 1.0), {});
}

std::vector<WeightedGraph> random_graphs(std::size_t count, std::size_t min_vertices,
                                         std::size_t max_vertices, std::uint64_t seed,
                                         double extra_edge_probability) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(min_vertices, max_vertices);
  std::vector<WeightedGraph> graphs;
  for (std::size_t i = 0; i < count; ++i) {
    bemery::RandomGraphParams p;
    p.vertices = size(rng);
    p.extra_edge_probability = extra_edge_probability;
    p.seed = rng();
    graphs.push_back(bemery::random_connected_graph(p));
  }
  return graphs;
}

double scaled_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace oracle
