#include <doctest.h>

#include <cmath>

#include "sppm/verify.hpp"

using namespace sppm;

namespace {

RegressionProblem toy1() {
  RegressionProblem p;
  p.n = 2;
  p.d = 1;
  p.rows = {{1.0}, {1.0}};
  p.targets = {2.0, -2.0};
  p.lambdas = {0.5, 0.5};
  return p;
}

}  // namespace

TEST_CASE("prox oracle hand values") {
  RegressionProblem p = toy1();
  Vec x = prox_oracle(p, {0}, {1.0}, 1.0, {0.0});
  CHECK(std::fabs(x[0] - 2.0 / 3.0) <= 1e-10);

  // Fact 1 anchor: v = m + gamma grad f_i(m) maps back to m.
  RegressionProblem q = make_gaussian_problem(5, 3, Vec(5, 0.5), 120);
  Rng rng(121, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t i = std::size_t(rng.next_index(q.n));
    Vec m(q.d);
    for (auto& e : m) e = rng.next_gaussian();
    const double gamma = std::exp(2.0 * (rng.next_double() - 0.5));
    Vec v = m;
    axpy(gamma, q.grad_i(i, m), v);
    Vec back = prox_oracle(q, {i}, {1.0}, gamma, v);
    REQUIRE(std::sqrt(dist_sq(back, m)) <= 1e-8 * (1.0 + norm(m)));
  }
}

TEST_CASE("oracle and closed-form prox agree") {
  Rng rng(122, 0);
  for (std::uint64_t seed = 123; seed < 127; ++seed) {
    RegressionProblem p = make_gaussian_problem(6 + (seed % 3), 3, Vec(6 + (seed % 3), 0.5), seed);
    CheckReport r = check_prox_oracle_gap(p, 30, rng);
    REQUIRE(r.passed);
  }
}

TEST_CASE("prox contraction check") {
  RegressionProblem p = toy1();
  ProblemConstants c = compute_constants(p);
  Rng rng(124, 0);
  CheckReport r = check_contraction(p, 0, c.mu_each[0], {0.01, 1.0, 100.0}, 1000, rng);
  CHECK(r.passed);

  // In one dimension the prox is affine: the factor is exactly 1/(1 + gamma mu).
  const double gamma = 1.0;
  Vec a = p.prox_single(0, gamma, {5.0});
  Vec b = p.prox_single(0, gamma, {-3.0});
  CHECK(std::fabs(a[0] - b[0]) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("first parametric bound holds with the table constants") {
  RegressionProblem p = toy1();
  ProblemConstants c = compute_constants(p);
  Rng rng(125, 0);

  // Known-shift method: the left side is identically zero.
  MethodSpec star;
  star.strategy = {CorrectionKind::star, 1.0};
  star.sampler = Sampler::uniform_singleton(2);
  star.gamma = 1.0;
  AssumptionParams zero;
  CheckReport r = check_correction_variance_bound(star, p, c, zero, 5, rng);
  CHECK(r.passed);

  // Plain method: the left side equals sigma*^2 = C1 = 4 exactly at any state.
  MethodSpec plain = star;
  plain.strategy = {CorrectionKind::none, 1.0};
  AssumptionParams q;
  q.C1 = 4.0;
  r = check_correction_variance_bound(plain, p, c, q, 5, rng);
  CHECK(r.passed);
  CHECK(std::fabs(r.worst_margin) <= 1e-9);  // tight, not just satisfied
}

TEST_CASE("control-state recursions are reproduced exactly") {
  RegressionProblem p = make_gaussian_problem(5, 2, Vec(5, 0.5), 126);
  ProblemConstants c = compute_constants(p);
  Rng rng(127, 0);

  MethodSpec lv;
  lv.strategy = {CorrectionKind::lsvrp, 0.3};
  lv.sampler = Sampler::uniform_singleton(p.n);
  lv.gamma = 0.5;
  CheckReport r =
      check_control_recursion(lv, p, c, method_params(lv.strategy, c, p.n), 10, rng);
  CHECK(r.passed);

  MethodSpec ps;
  ps.strategy = {CorrectionKind::point_saga, 1.0};
  ps.sampler = Sampler::uniform_singleton(p.n);
  ps.gamma = 0.5;
  r = check_control_recursion(ps, p, c, method_params(ps.strategy, c, p.n), 10, rng);
  CHECK(r.passed);
  CHECK(std::fabs(r.worst_margin) <= 1e-9);  // the n-term average is an identity
}

TEST_CASE("similarity constants are respected and tight") {
  RegressionProblem p = toy1();
  ProblemConstants c = compute_constants(p);
  Rng rng(128, 0);
  CheckReport r = check_similarity_constants(p, c, 20, rng);
  CHECK(r.passed);

  RegressionProblem mixed;
  mixed.n = 2;
  mixed.d = 1;
  mixed.rows = {{1.0}, {1.0}};
  mixed.targets = {0.0, 0.0};
  mixed.lambdas = {0.5, 1.5};
  ProblemConstants mc = compute_constants(mixed);
  r = check_similarity_constants(mixed, mc, 20, rng);
  CHECK(r.passed);

  // Fault injection: halving delta must be detected.
  ProblemConstants broken = mc;
  broken.delta *= 0.5;
  r = check_similarity_constants(mixed, broken, 20, rng);
  CHECK(!r.passed);
}

TEST_CASE("recurrence arithmetic") {
  Rng rng(129, 0);
  CheckReport r = check_recurrence_bound(100, rng);
  CHECK(r.passed);
}

TEST_CASE("ensemble recursion check on the toy fixture") {
  RegressionProblem p = toy1();
  ProblemConstants c = compute_constants(p);
  MethodSpec m;
  m.sampler = Sampler::uniform_singleton(2);
  m.gamma = 1.0;
  m.strategy = {CorrectionKind::none, 1.0};
  CheckReport r = check_lyapunov_recursion(m, p, c, 1.0, 1000, 50, 130);
  CHECK(r.passed);
}

TEST_CASE("quick default suite passes") {
  for (const CheckReport& r : default_suite(2024, true)) {
    INFO(r.name, " margin ", r.worst_margin);
    REQUIRE(r.passed);
  }
}
