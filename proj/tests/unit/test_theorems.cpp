#include <doctest.h>

#include <cmath>

#include "bemery/curvature.hpp"
#include "bemery/error.hpp"
#include "bemery/gamma.hpp"
#include "bemery/generators.hpp"
#include "bemery/heat.hpp"
#include "bemery/theorems.hpp"
#include "oracles.hpp"

using namespace bemery;
using oracle::vec;

namespace {

const Dimension kInf = Dimension::infinite();

// Statement (iii) slack computed from the dense oracles.
double slack_iii_oracle(const WeightedGraph& g, double K, double n_inv, const Eigen::VectorXd& f, double t,
                        Eigen::Index x) {
  const Eigen::VectorXd pf = oracle::heat(g, t, f);
  const Eigen::VectorXd lhs = oracle::gamma(g, pf, pf);
  const Eigen::VectorXd pgf = oracle::heat(g, t, oracle::gamma(g, f, f));
  const Eigen::VectorXd pdf = oracle::heat(g, t, oracle::dense_laplacian(g) * f);
  const double coeff = K == 0.0 ? 2 * t : (std::exp(2 * K * t) - 1) / K;
  return std::exp(2 * K * t) * pgf(x) - coeff * n_inv * pdf(x) * pdf(x) - lhs(x);
}

}  // namespace

TEST_CASE("time coefficients") {
  for (double K : {-1.5, -0.2, 0.3, 2.0}) {
    for (double t : {0.01, 0.5, 2.0}) {
      const double z = 2 * K * t;
      CHECK(exp_growth(K, t) == doctest::Approx((std::exp(z) - 1) / K).epsilon(1e-12));
      CHECK(exp_decay(K, t) == doctest::Approx((1 - std::exp(-z)) / K).epsilon(1e-12));
      CHECK(exp_growth2(K, t) == doctest::Approx((std::exp(z) - 1 - z) / (K * K)).epsilon(1e-9));
      CHECK(exp_decay2(K, t) == doctest::Approx((std::exp(-z) - 1 + z) / (K * K)).epsilon(1e-9));
    }
  }
  for (double t : {0.1, 3.0}) {
    CHECK(exp_growth(0.0, t) == doctest::Approx(2 * t));
    CHECK(exp_decay(0.0, t) == doctest::Approx(2 * t));
    CHECK(exp_growth2(0.0, t) == doctest::Approx(2 * t * t));
    CHECK(exp_decay2(0.0, t) == doctest::Approx(2 * t * t));
    for (double K : {1e-8, -1e-8, 1e-13}) {
      CHECK(std::abs(exp_growth(K, t) - 2 * t) <= 1e-6 * t);
      CHECK(std::abs(exp_growth2(K, t) - 2 * t * t) <= 1e-6 * t * t);
      CHECK(std::abs(exp_decay2(K, t) - 2 * t * t) <= 1e-6 * t * t);
    }
  }
}

TEST_CASE("verify_estimates at t = 0 is equality") {
  std::mt19937_64 rng(1);
  for (const auto& g : oracle::random_graphs(3, 3, 12, 201)) {
    const auto f = oracle::uniform(g.size(), rng);
    for (VertexIndex x = 0; x < g.size(); ++x) {
      const auto r = verify_estimates(g, 0.7, Dimension(3), f, 0.0, x);
      CHECK(std::abs(r.slack_ii) <= 1e-10);
      CHECK(std::abs(r.slack_iii) <= 1e-10);
      CHECK(std::abs(r.slack_iv) <= 1e-10);
      CHECK(std::abs(r.slack_v) <= 1e-10);
    }
  }
}

TEST_CASE("single edge example passes under CD(2, inf)") {
  const auto g = oracle::single_edge();
  HeatOperator h(g);
  for (double t : {0.1, 1.0, 10.0}) {
    for (VertexIndex x : {0, 1}) {
      const auto r = verify_estimates(h, -2.0, kInf, vec({0, 1}), t, x);
      CHECK(r.all_pass());
      CHECK(r.K == -2.0);
      CHECK(r.t == t);
    }
  }
}

TEST_CASE("claiming too much curvature breaks (iii) at small t") {
  HeatOperator h(oracle::single_edge());
  const auto grid = geometric_grid(1e-3, 1.0, 25);
  const auto scan = converse_scan(h, -2.5, kInf, {vec({0, 1})}, grid);
  CHECK(scan.violated);
  CHECK(scan.t <= 1.0);
  CHECK(scan.slack_iii < -kReportTol);
  const auto r = verify_estimates(h, -2.5, kInf, vec({0, 1}), scan.t, scan.x);
  CHECK_FALSE(r.pass_iii);
}

TEST_CASE("constant functions give zero slack") {
  HeatOperator h(oracle::path_abc());
  for (double t : {0.2, 2.0}) {
    const auto r = verify_estimates(h, 0.5, Dimension(2), vec({3, 3, 3}), t, 1);
    CHECK(std::abs(r.slack_ii) <= 1e-12);
    CHECK(std::abs(r.slack_iii) <= 1e-12);
    CHECK(std::abs(r.slack_iv) <= 1e-12);
    CHECK(std::abs(r.slack_v) <= 1e-12);
  }
}

TEST_CASE("slack (iii) matches the dense oracle") {
  std::mt19937_64 rng(2);
  for (const auto& g : oracle::random_graphs(4, 3, 15, 211)) {
    HeatOperator h(g);
    const auto f = oracle::uniform(g.size(), rng);
    for (double K : {-0.4, 0.0, 0.9}) {
      for (double t : {0.05, 0.8}) {
        const auto reports = verify_estimates_all(h, K, Dimension(4), f, t);
        for (const auto& r : reports) {
          const double o = slack_iii_oracle(g, K, 0.25, f, t, static_cast<Eigen::Index>(r.x));
          CHECK(std::abs(r.slack_iii - o) <= 1e-9);
          const auto single = verify_estimates(h, K, Dimension(4), f, t, r.x);
          CHECK(std::abs(single.slack_ii - r.slack_ii) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("statement (ii) integral against a fine trapezoid oracle") {
  const auto g = oracle::path_abc(1.0, 2.0, 0.5);
  HeatOperator h(g);
  const auto f = vec({0.2, 0.9, 0.4});
  const double K = 0.3, t = 1.3;
  const Eigen::VectorXd lap = oracle::dense_laplacian(g) * f;
  const int N = 20000;
  double integral = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double s = t * i / N;
    const Eigen::VectorXd inner = oracle::heat(g, t - s, lap);
    const double v = std::exp(2 * K * s) * oracle::heat(g, s, inner.cwiseProduct(inner))(0);
    integral += (i == 0 || i == N ? 0.5 : 1.0) * v;
  }
  integral *= t / N;
  const Eigen::VectorXd pf = oracle::heat(g, t, f);
  const double expected = std::exp(2 * K * t) * oracle::heat(g, t, oracle::gamma(g, f, f))(0) -
                          (2.0 / 3.0) * integral - oracle::gamma(g, pf, pf)(0);
  const auto r = verify_estimates(h, K, Dimension(3), f, t, 0);
  CHECK(std::abs(r.slack_ii - expected) <= 1e-8);
  CHECK(r.quadrature_error_ii <= 1e-8);
}

TEST_CASE("verify_estimates argument errors") {
  const auto g = oracle::single_edge();
  HeatOperator h(g);
  try {
    verify_estimates(h, 0.0, kInf, vec({-0.1, 1}), 1.0, 0);
    FAIL("expected invalid argument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
  CHECK_THROWS_AS(verify_estimates(h, 0.0, kInf, vec({0, 1}), -1.0, 0), Error);
  CHECK_THROWS_AS(verify_estimates(h, 0.0, kInf, vec({0, 1, 2}), 1.0, 0), Error);
  HeatOperator dir(g, std::vector<VertexIndex>{0});
  try {
    verify_estimates(dir, 0.0, kInf, vec({0, 1}), 1.0, 0);
    FAIL("expected precondition failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precondition);
  }
}

TEST_CASE("sweep") {
  const auto g = generate(Family::cycle, {5});
  HeatOperator h(g);
  const double kappa = curvature_profile(g, kInf).global_curvature;
  const std::vector<double> ts{0.01, 0.1, 1.0};
  const auto corpus = standard_corpus(h, 3);
  CHECK(corpus.size() == 2 * g.size() + 20);
  for (const auto& f : corpus) CHECK(f.minCoeff() >= 0.0);

  auto s = estimate_sweep(h, -kappa + 0.01, kInf, ts, corpus, 2);
  CHECK(s.all_pass);
  CHECK(s.reports.size() == corpus.size() * ts.size() * g.size());
  CHECK_FALSE(s.first_counterexample.has_value());
  CHECK(s.reports[1].x == 1);
  CHECK(s.reports[g.size()].t == 0.1);

  auto witnesses = witness_corpus(g, kInf);
  CHECK_FALSE(witnesses.empty());
  for (const auto& w : witnesses) {
    CHECK(w.minCoeff() >= 0.0);
    CHECK(w.maxCoeff() <= 1.0 + 1e-15);
  }
  witnesses.insert(witnesses.end(), corpus.begin(), corpus.end());
  const auto small_t = geometric_grid(1e-3, 1.0, 16);
  s = estimate_sweep(h, -kappa - 0.1, kInf, small_t, witnesses);
  CHECK_FALSE(s.all_pass);
  REQUIRE(s.first_counterexample.has_value());
  CHECK_FALSE(s.reports[*s.first_counterexample].all_pass());

  s = estimate_sweep(h, 0.0, kInf, ts, {});
  CHECK(s.all_pass);
  CHECK(s.reports.empty());
  CHECK(s.warnings.size() == 1);
}

TEST_CASE("sweep is deterministic across thread counts") {
  const auto g = oracle::random_graphs(1, 10, 10, 221)[0];
  HeatOperator h(g);
  const auto corpus = standard_corpus(h, 5, 4);
  const std::vector<double> ts{0.1, 1.0};
  const auto a = estimate_sweep(h, 0.2, Dimension(3), ts, corpus, 1);
  const auto b = estimate_sweep(h, 0.2, Dimension(3), ts, corpus, 3);
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) CHECK(a.reports[i].slack_ii == b.reports[i].slack_ii);
  CHECK(standard_corpus(h, 5, 4) == corpus);
}

TEST_CASE("geometric grid") {
  const auto g = geometric_grid(0.01, 1.0, 3);
  REQUIRE(g.size() == 3);
  CHECK(g[0] == 0.01);
  CHECK(g[1] == doctest::Approx(0.1));
  CHECK(g[2] == 1.0);
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 3), Error);
}

TEST_CASE("Green triple examples") {
  const auto e = oracle::single_edge();
  auto triple = green_check(e, indicator(e, 0), indicator(e, 1));
  CHECK(triple.f_laplace_h == doctest::Approx(1.0));
  CHECK(triple.laplace_f_h == doctest::Approx(1.0));
  CHECK(triple.gamma_sum == doctest::Approx(1.0));
  triple = green_check(e, vec({2, 2}), vec({2, 2}));
  CHECK(triple.f_laplace_h == 0.0);
  CHECK(triple.gamma_sum == 0.0);
  CHECK(triple.relative_gap() == 0.0);

  RandomGraphParams p;
  p.vertices = 30;
  p.seed = 8;
  const auto g = random_connected_graph(p);
  std::mt19937_64 rng(3);
  triple = green_check(g, oracle::uniform(30, rng, -1, 1), oracle::uniform(30, rng, -1, 1));
  CHECK(triple.relative_gap() <= 1e-10);
  CHECK_THROWS_AS(green_check(g, vec({1}), vec({1})), Error);
}

TEST_CASE("EC norm pair examples") {
  auto pair = ec_norm_check(oracle::single_edge());
  CHECK(pair.ellipticity_constant == doctest::Approx(1.0));
  CHECK(pair.operator_norm == doctest::Approx(1.0));
  pair = ec_norm_check(oracle::isolated(3));
  CHECK(pair.ellipticity_constant == 0.0);
  CHECK(pair.operator_norm == 0.0);
  pair = ec_norm_check(oracle::single_edge(2, 1));
  CHECK(pair.ellipticity_constant == doctest::Approx(0.5));
  CHECK(pair.operator_norm == doctest::Approx(0.5));
  for (const auto& g : oracle::random_graphs(10, 2, 30, 231)) {
    pair = ec_norm_check(g);
    CHECK(std::abs(pair.ellipticity_constant - pair.operator_norm) <= 1e-12 * pair.ellipticity_constant);
  }
}

TEST_CASE("cutoff examples") {
  HeatOperator e(oracle::single_edge());
  auto c = build_cutoff(e, {0}, 1.0, {0, 1});
  CHECK(oracle::scaled_diff(c.eta, vec({1, 1})) <= 1e-12);
  CHECK(c.max_gamma <= 1e-15);
  CHECK(c.time == 2.0);
  CHECK(c.intermediate_bound_holds);

  GeneratorParams p{3, MeasureProfile::normalizing};
  const auto q = generate(Family::hypercube, p);
  HeatOperator hq(q);
  std::vector<VertexIndex> all(q.size());
  for (VertexIndex x = 0; x < q.size(); ++x) all[x] = x;
  c = build_cutoff(hq, {0}, 0.5, all);
  CHECK((c.eta.array() - 1.0).abs().maxCoeff() <= 1e-12);
  CHECK(c.max_gamma <= 0.5);
}

TEST_CASE("cutoff with a partial source set") {
  const auto q = generate(Family::hypercube, {4});
  HeatOperator h(q);
  std::vector<VertexIndex> U;
  for (VertexIndex x = 0; x < q.size(); ++x) {
    if (x != 15) U.push_back(x);
  }
  for (double eps : {0.1, 0.5, 1.0}) {
    const auto c = build_cutoff(h, {0}, eps, U);
    CHECK(c.max_gamma <= eps + 1e-10);
    CHECK(c.intermediate_bound_holds);
    CHECK(c.eta(0) == 1.0);
    CHECK(c.eta.minCoeff() >= 0.0);
    CHECK(c.eta.maxCoeff() <= 1.0);
  }
}

TEST_CASE("cutoff preconditions") {
  const auto path = generate(Family::path, {20});
  HeatOperator h(path);
  std::vector<VertexIndex> all(20);
  for (VertexIndex x = 0; x < 20; ++x) all[x] = x;
  const double kappa = curvature_profile(path, kInf).global_curvature;
  if (kappa < -kCurvatureTol) {
    try {
      build_cutoff(h, {0}, 1.0, all);
      FAIL("expected precondition failure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::precondition);
    }
  } else {
    CHECK(build_cutoff(h, {0}, 1.0, all).max_gamma <= 1.0 + 1e-10);
  }
  // U far from S: P_t 1_U is small on S
  const auto q = generate(Family::hypercube, {3});
  HeatOperator hq(q);
  CHECK_THROWS_AS(build_cutoff(hq, {0}, 1.0, {7}), Error);
  HeatOperator dir(oracle::single_edge(), std::vector<VertexIndex>{0});
  CHECK_THROWS_AS(build_cutoff(dir, {0}, 1.0, {0}), Error);
}

TEST_CASE("finiteness probe on a single edge") {
  HeatOperator h(oracle::single_edge());
  const std::vector<double> eps{0.5, 2.0, 4.0};
  const auto r = finiteness_probe(h, 2.0, eps, 1, 200);
  REQUIRE(r.vertices.size() == 2);
  const auto& a = r.vertices[0];
  CHECK_FALSE(a.vacuous);
  CHECK(a.epsilon_threshold == doctest::Approx(2.0));
  CHECK(a.bounds[0] == doctest::Approx(0.5));
  CHECK(a.contradiction == std::vector<bool>{true, false, false});
  CHECK(r.inequalities_hold);
  CHECK(r.jensen_max_excess <= 1e-10);
  CHECK(r.decay_max_excess <= 1e-10);
}

TEST_CASE("finiteness probe on random graphs") {
  for (const auto& g : oracle::random_graphs(5, 3, 15, 241)) {
    const double kappa = curvature_profile(g, kInf).global_curvature;
    if (kappa <= 0.0) continue;
    HeatOperator h(g);
    const std::vector<double> eps{0.1};
    const auto r = finiteness_probe(h, kappa, eps, 7, 1000);
    CHECK(r.inequalities_hold);
    CHECK(r.jensen_max_excess <= 1e-10);
  }
  const auto cube = generate(Family::complete, {5});
  HeatOperator h(cube);
  const std::vector<double> eps{0.1, 1.0};
  CHECK(finiteness_probe(h, 3.0, eps, 2).inequalities_hold);
}

TEST_CASE("finiteness probe degenerate cases and preconditions") {
  HeatOperator single(oracle::isolated(1));
  const std::vector<double> eps{1.0};
  const auto r = finiteness_probe(single, 1.0, eps, 1, 10);
  REQUIRE(r.vertices.size() == 1);
  CHECK(r.vertices[0].vacuous);

  HeatOperator two(oracle::isolated(2));
  CHECK_THROWS_AS(finiteness_probe(two, 1.0, eps, 1), Error);
  HeatOperator e(oracle::single_edge());
  try {
    finiteness_probe(e, 3.0, eps, 1);
    FAIL("expected precondition failure");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::precondition);
  }
  CHECK_THROWS_AS(finiteness_probe(e, 0.0, eps, 1), Error);
}

TEST_CASE("taylor check examples") {
  HeatOperator e(oracle::single_edge());
  auto r = taylor_check(e, vec({0, 1}), 0, 0.0);
  CHECK(r.variance.exact_first == doctest::Approx(1.0));
  CHECK(std::abs(r.variance.fitted_first - 1.0) <= 1e-6);
  CHECK(r.max_relative_error() <= 1e-6);

  HeatOperator p(oracle::path_abc());
  r = taylor_check(p, vec({2, 2, 2}), 1, 0.5);
  for (const auto* c : {&r.variance, &r.growth, &r.decay}) {
    CHECK(std::abs(c->fitted_first) <= 1e-9);
    CHECK(std::abs(c->fitted_second) <= 1e-6);
    CHECK(c->exact_first == 0.0);
  }

  const auto path4 = generate(Family::path, {4});
  HeatOperator h4(path4);
  std::mt19937_64 rng(9);
  for (int s = 0; s < 5; ++s) {
    const auto f = oracle::uniform(4, rng);
    for (VertexIndex x = 0; x < 4; ++x) {
      r = taylor_check(h4, f, x, -0.7);
      CHECK(r.max_relative_error() <= 1e-6);
    }
  }
  CHECK_THROWS_AS(taylor_check(e, vec({-1, 1}), 0, 0.0), Error);
}

TEST_CASE("large |K| t keeps the lower variance bound") {
  GeneratorParams p;
  p.size = 5;
  const auto g = generate(Family::complete, p);
  HeatOperator heat(g);
  const double kappa = curvature_profile(g, kInf).global_curvature;
  for (double t : {5.0, 25.0}) {
    for (const auto& r : verify_estimates_all(heat, -kappa, kInf, vec({1, 0, 0.5, 0.2, 0}), t)) {
      CHECK(r.all_pass());
      CHECK(std::isfinite(r.slack_v));
    }
  }
}

TEST_CASE("huge e^{2Kt} never yields NaN") {
  HeatOperator heat(oracle::single_edge());
  for (double K : {200.0, 400.0}) {
    for (const Dimension n : {kInf, Dimension(3.0)}) {
      const auto r = verify_estimates(heat, K, n, vec({0, 1}), 2.0, 0);
      for (double s : {r.slack_ii, r.slack_iii, r.slack_iv, r.slack_v}) CHECK_FALSE(std::isnan(s));
      CHECK(r.all_pass());
    }
  }
  // Constant f: every term vanishes, so the slacks stay exactly zero.
  const auto c = verify_estimates(heat, 400.0, Dimension(3.0), vec({1, 1}), 2.0, 1);
  CHECK(c.slack_ii == 0.0);
  CHECK(c.slack_iv == 0.0);
}
