#include <doctest.h>

#include <cmath>

#include "bemery/curvature.hpp"
#include "bemery/error.hpp"
#include "bemery/gamma.hpp"
#include "bemery/generators.hpp"
#include "oracles.hpp"

using namespace bemery;

namespace {

const Dimension kInf = Dimension::infinite();

// Γ_2(f) - (1/n)(Δf)^2 - K Γ(f) at x from the dense definitions.
double cd_slack(const WeightedGraph& g, const Eigen::VectorXd& f, VertexIndex x, double K, Dimension n) {
  const auto xi = static_cast<Eigen::Index>(x);
  const double g2 = oracle::gamma2(g, f, f)(xi);
  const double g1 = oracle::gamma(g, f, f)(xi);
  const double lap = (oracle::dense_laplacian(g) * f)(xi);
  return g2 - n.inverse() * lap * lap - K * g1;
}

}  // namespace

TEST_CASE("dimension") {
  CHECK(kInf.is_infinite());
  CHECK(kInf.inverse() == 0.0);
  CHECK(Dimension(4).inverse() == 0.25);
  CHECK_THROWS_AS(Dimension(0.0), Error);
  CHECK_THROWS_AS(Dimension(-1.0), Error);
  CHECK_THROWS_AS(Dimension(std::nan("")), Error);
}

TEST_CASE("cd_check examples") {
  const auto e = oracle::single_edge();
  auto r = cd_check(e, 2.0, kInf, 0);
  CHECK(r.holds);
  CHECK(r.min_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));
  r = cd_check(e, 2.1, kInf, 0);
  CHECK_FALSE(r.holds);
  CHECK(r.min_eigenvalue == doctest::Approx(-0.05));
  r = cd_check(e, 1.0, Dimension(2), 0);
  CHECK(r.holds);
  CHECK(std::abs(r.min_eigenvalue) <= 1e-12);
  try {
    cd_check(e, 1.0, kInf, 9);
    FAIL("expected unknown vertex");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::unknown_vertex);
  }
}

TEST_CASE("cd_check at an isolated vertex is vacuous") {
  const auto r = cd_check(oracle::isolated(1), 1e9, kInf, 0);
  CHECK(r.holds);
  CHECK(std::isinf(r.min_eigenvalue));
}

TEST_CASE("curvature_solve examples") {
  const auto e = oracle::single_edge();
  auto r = curvature_solve(e, 0, kInf);
  CHECK(r.converged);
  CHECK(std::abs(r.curvature - 2.0) <= 1e-9);
  CHECK(r.bracket_width <= kCurvatureTol);
  r = curvature_solve(e, 0, Dimension(1));
  CHECK(std::abs(r.curvature) <= 1e-9);
  for (double n : {2.0, 5.0, 100.0}) {
    CHECK(std::abs(curvature_solve(e, 1, Dimension(n)).curvature - (2.0 - 2.0 / n)) <= 1e-8);
  }
  r = curvature_solve(oracle::isolated(2), 1, kInf);
  CHECK(r.curvature == kCurvatureCap);
  CHECK(r.converged);
}

TEST_CASE("curvature bracket invariant") {
  for (const auto& g : oracle::random_graphs(4, 3, 15, 21)) {
    for (VertexIndex x = 0; x < g.size(); ++x) {
      const auto r = curvature_solve(g, x, kInf);
      REQUIRE(r.converged);
      const double w = std::max(r.bracket_width, 1e-12);
      CHECK(cd_check(g, r.curvature - 2 * w, kInf, x).holds);
      const auto above = cd_check(g, r.curvature + 2 * w + 2e-10 / 1.0, kInf, x);
      // M(K) changes by K·B, so the step above must show a negative eigenvalue
      CHECK(above.min_eigenvalue < 0.0);
    }
  }
}

TEST_CASE("curvature profile") {
  auto p = curvature_profile(oracle::single_edge(), kInf);
  REQUIRE(p.per_vertex.size() == 2);
  CHECK(std::abs(p.global_curvature - 2.0) <= 1e-9);

  const auto path = oracle::path_abc();
  p = curvature_profile(path, kInf, 2);
  double mn = p.per_vertex[0].curvature;
  for (const auto& r : p.per_vertex) mn = std::min(mn, r.curvature);
  CHECK(p.global_curvature == mn);
  std::mt19937_64 rng(3);
  for (int s = 0; s < 1000; ++s) {
    const auto f = oracle::uniform(3, rng, -1, 1);
    for (VertexIndex x = 0; x < 3; ++x) {
      CHECK(cd_slack(path, f, x, p.global_curvature - 1e-8, kInf) >= -1e-9);
    }
  }
}

TEST_CASE("threaded profile matches the serial one") {
  for (const auto& g : oracle::random_graphs(3, 10, 20, 31)) {
    const auto a = curvature_profile(g, Dimension(3), 1);
    const auto b = curvature_profile(g, Dimension(3), 4);
    for (std::size_t i = 0; i < a.per_vertex.size(); ++i) {
      CHECK(a.per_vertex[i].curvature == b.per_vertex[i].curvature);
      CHECK(b.per_vertex[i].vertex == i);
    }
  }
}

TEST_CASE("infinite dimension agrees with very large n") {
  for (const auto& g : oracle::random_graphs(4, 3, 15, 41)) {
    const auto a = curvature_profile(g, kInf);
    const auto b = curvature_profile(g, Dimension(1e9));
    for (std::size_t i = 0; i < a.per_vertex.size(); ++i) {
      CHECK(std::abs(a.per_vertex[i].curvature - b.per_vertex[i].curvature) <= 1e-6);
    }
  }
}

TEST_CASE("soundness and tightness against the dense definitions") {
  std::mt19937_64 rng(77);
  for (const auto& g : oracle::random_graphs(5, 3, 15, 51)) {
    for (const Dimension n : {kInf, Dimension(2.5)}) {
      for (VertexIndex x = 0; x < g.size(); ++x) {
        const auto r = curvature_solve(g, x, n);
        const double K = r.curvature - 10 * kCurvatureTol;
        for (int s = 0; s < 200; ++s) {
          CHECK(cd_slack(g, oracle::uniform(g.size(), rng, -1, 1), x, K, n) >= -1e-9);
        }
        const auto w = tightness_witness(g, x, n, r.curvature);
        CHECK(w(static_cast<Eigen::Index>(x)) == 0.0);
        const double norm = w.squaredNorm();
        REQUIRE(norm > 0.0);
        CHECK(cd_slack(g, w, x, r.curvature, n) <= 10 * kCurvatureTol * norm);
      }
    }
  }
}

TEST_CASE("monotone in the dimension") {
  for (const auto& g : oracle::random_graphs(4, 3, 12, 61)) {
    for (VertexIndex x = 0; x < g.size(); ++x) {
      double prev = -kCurvatureCap;
      for (double n : {0.5, 1.0, 2.0, 10.0, HUGE_VAL}) {
        const double k = curvature_solve(g, x, Dimension(n)).curvature;
        CHECK(prev <= k + 1e-8);
        prev = k;
      }
    }
  }
}

TEST_CASE("curvature scales with the weights") {
  for (const auto& g : oracle::random_graphs(3, 3, 12, 71)) {
    const auto scaled = g.scaled_weights(3.5);
    for (VertexIndex x = 0; x < g.size(); ++x) {
      const double a = curvature_solve(g, x, Dimension(4)).curvature;
      const double b = curvature_solve(scaled, x, Dimension(4)).curvature;
      CHECK(std::abs(b - 3.5 * a) <= 1e-8 * std::max(1.0, std::abs(3.5 * a)));
    }
  }
}

TEST_CASE("smallest eigenvalue decreases in K") {
  for (const auto& g : oracle::random_graphs(3, 3, 12, 81)) {
    for (VertexIndex x = 0; x < g.size(); ++x) {
      double prev = INFINITY;
      for (double K = -3; K <= 3; K += 0.5) {
        const double e = cd_check(g, K, kInf, x).min_eigenvalue;
        CHECK(e <= prev + 1e-12);
        prev = e;
      }
    }
  }
}

TEST_CASE("kernel safety") {
  std::mt19937_64 rng(5);
  for (const auto& g : oracle::random_graphs(5, 8, 20, 91, 0.1)) {
    for (VertexIndex x = 0; x < g.size(); ++x) {
      const auto near = ball(g, x, 1);
      for (int s = 0; s < 20; ++s) {
        Eigen::VectorXd f = oracle::uniform(g.size(), rng, -1, 1);
        for (auto y : near) f(static_cast<Eigen::Index>(y)) = 0.0;
        const auto xi = static_cast<Eigen::Index>(x);
        CHECK(std::abs(gamma_k(g, 1, f, f)(xi)) <= 1e-14);
        CHECK(std::abs(laplacian(g, f)(xi)) <= 1e-14);
        CHECK(gamma_k(g, 2, f, f)(xi) >= -1e-12);
      }
    }
  }
}

TEST_CASE("known curvatures of standard families") {
  // complete graph K_N, unit weights and measure: K(x, inf) = 1 + N/2
  for (std::size_t N : {3, 4, 6}) {
    const auto g = generate(Family::complete, {N});
    CHECK(std::abs(curvature_profile(g, kInf).global_curvature - (1.0 + N / 2.0)) <= 1e-8);
  }
  // unit hypercube: K = 2
  const auto q = generate(Family::hypercube, {3});
  CHECK(std::abs(curvature_profile(q, kInf).global_curvature - 2.0) <= 1e-8);
}

TEST_CASE("cd_matrix is symmetric and drops the dimension term at infinity") {
  const auto forms = local_forms(oracle::path_abc(), 1);
  const auto a = cd_matrix(forms, 0.3, kInf);
  const auto b = cd_matrix(forms, 0.3, Dimension(2));
  CHECK((a - a.transpose()).norm() == 0.0);
  const Eigen::MatrixXd rank_one = forms.laplace_vector.transpose() * forms.laplace_vector;
  CHECK((a - b - 0.5 * rank_one).norm() <= 1e-14);
}
