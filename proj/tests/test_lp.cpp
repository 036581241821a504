#include <doctest.h>

#include <cmath>
#include <limits>

#include "dp/lp.hpp"
#include "support.hpp"

using namespace dp;
using namespace dp::testing;

namespace {

StandardLP make(MatrixXd a, VectorXd b, VectorXd c) {
  return StandardLP{std::move(a), std::move(b), std::move(c)};
}

// Feasible (b = A x0, x0 >= 0) and bounded (c = A^T y0 + s, s >= 0).
StandardLP random_lp(Rng& rng, Index m, Index n, bool degenerate) {
  MatrixXd a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  if (degenerate && m >= 2) a.row(m - 1) = a.row(0) + a.row(1);
  VectorXd x0(n), y0(m), s(n);
  for (Index j = 0; j < n; ++j) {
    x0(j) = degenerate && rng.coin() ? 0.0 : rng.uniform();
    s(j) = degenerate && rng.coin() ? 0.0 : rng.uniform();
  }
  for (Index i = 0; i < m; ++i) y0(i) = rng.uniform(-1.0, 1.0);
  return make(a, a * x0, a.transpose() * y0 + s);
}

void check_optimal(const StandardLP& lp, const LPSolution& sol) {
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK((lp.a * sol.x - lp.b).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(sol.x.minCoeff() >= -1e-10);
  const DualCheck dc = dual_check(lp, sol);
  CHECK(dc.gap <= 1e-8);
  CHECK(dc.feasible);
  CHECK(((lp.a.transpose() * sol.dual - lp.c).array() <= 1e-9).all());
  Index positive = 0;
  for (Index j = 0; j < sol.x.size(); ++j) positive += sol.x(j) > 1e-12;
  CHECK(positive <= lp.a.rows());
}

}  // namespace

TEST_CASE("solve: trivial equality") {
  const StandardLP lp = make(mat({{1}}), vec({1}), vec({1}));
  const LPSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.value == doctest::Approx(1.0));
  check_optimal(lp, s);
}

TEST_CASE("solve: unbounded returns an improving ray") {
  const StandardLP lp = make(mat({{1, -1}}), vec({0}), vec({-1, 0}));
  const LPSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::unbounded);
  REQUIRE(s.ray.size() == 2);
  CHECK(s.ray.minCoeff() >= -1e-12);
  CHECK((lp.a * s.ray).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(lp.c.dot(s.ray) < 0.0);
  CHECK_THROWS_AS(dual_check(lp, s), SolverError);
}

TEST_CASE("solve: infeasible returns a Farkas certificate") {
  const StandardLP lp = make(mat({{1, 1}}), vec({-1}), vec({1, 1}));
  const LPSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::infeasible);
  REQUIRE(s.ray.size() == 1);
  CHECK(((lp.a.transpose() * s.ray).array() <= 1e-12).all());
  CHECK(lp.b.dot(s.ray) > 0.0);

  // x1 + x2 = 1 and x1 + x2 = 2
  const StandardLP lp2 = make(mat({{1, 1}, {1, 1}}), vec({1, 2}), vec({0, 0}));
  const LPSolution s2 = solve(lp2);
  REQUIRE(s2.status == LpStatus::infeasible);
  CHECK(((lp2.a.transpose() * s2.ray).array() <= 1e-12).all());
  CHECK(lp2.b.dot(s2.ray) > 0.0);
}

TEST_CASE("solve: 2x2 transportation LP equals TV") {
  // variables pi(x, x_hat) row-major, rows: source marginals then target
  const StandardLP lp = make(mat({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}}),
                             vec({0.6, 0.4, 1.0, 0.0}), vec({0, 1, 1, 0}));
  const LPSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.value == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(s.dropped_rows.size() == 1);
  CHECK(dual_check(lp, s).gap <= 1e-10);
  check_optimal(lp, s);
}

TEST_CASE("solve: input errors") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    solve(make(mat({{nan}}), vec({1}), vec({1})));
    FAIL("expected LpError");
  } catch (const LpError& e) {
    CHECK(e.kind() == LpError::Kind::non_finite);
  }
  try {
    solve(make(mat({{1, 1}}), vec({1, 2}), vec({1, 1})));
    FAIL("expected LpError");
  } catch (const LpError& e) {
    CHECK(e.kind() == LpError::Kind::dimension);
  }
}

TEST_CASE("solve: iteration budget reported distinctly") {
  Rng rng(21);
  const StandardLP lp = random_lp(rng, 10, 25, false);
  SimplexOptions opts;
  opts.max_iterations = 1;
  try {
    solve(lp, opts);
    FAIL("expected LpError");
  } catch (const LpError& e) {
    CHECK(e.kind() == LpError::Kind::iteration_limit);
  }
}

TEST_CASE("dual_check: perturbed dual is flagged") {
  const StandardLP lp = make(mat({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}}),
                             vec({0.6, 0.4, 1.0, 0.0}), vec({0, 1, 1, 0}));
  LPSolution s = solve(lp);
  REQUIRE(s.status == LpStatus::optimal);
  s.dual(0) += 0.5;
  const DualCheck dc = dual_check(lp, s);
  CHECK_FALSE(dc.feasible);
  CHECK(dc.max_violation >= 0.5 - 1e-12);
}

TEST_CASE("property: 500 random feasible bounded LPs") {
  Rng rng(22);
  Index worst_iterations = 0;
  for (int t = 0; t < 500; ++t) {
    const Index m = rng.integer(1, 20);
    const Index n = rng.integer(m, 40);
    const StandardLP lp = random_lp(rng, m, n, t % 4 == 0);
    const LPSolution s = solve(lp);
    check_optimal(lp, s);
    worst_iterations = std::max(worst_iterations, s.iterations);
    CHECK(s.iterations <= 100 * (m + n));
    if (t % 10 == 0) {
      SimplexOptions opts;
      opts.rule = PivotRule::dantzig;
      const LPSolution d = solve(lp, opts);
      REQUIRE(d.status == LpStatus::optimal);
      CHECK(d.value == doctest::Approx(s.value).epsilon(1e-9));
    }
  }
  MESSAGE("max simplex iterations: " << worst_iterations);
}
