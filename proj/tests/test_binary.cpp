#include <doctest.h>

#include <cmath>

#include "dp/binary.hpp"
#include "support.hpp"

using namespace dp;
using namespace dp::testing;

namespace {

// Binary instance with n_y in [2, 8]; some columns are scaled copies of
// others so that u ties occur exactly.
Problem random_binary(Rng& rng, bool ties, bool scaled_metric) {
  const Index ny = rng.integer(2, 8);
  MatrixXd p = rng.joint(2, ny);
  if (ties) {
    for (Index y = 1; y < ny; ++y) {
      if (rng.integer(0, 2) == 0) p.col(y) = p.col(rng.integer(0, y - 1)) * rng.uniform(0.5, 2.0);
    }
    p /= p.sum();
  }
  MatrixXd h = hamming(2);
  if (scaled_metric) h *= rng.uniform(0.2, 1.0);
  return Problem(p, rng.distortion(2), h);
}

bool zero_one(const MatrixXd& q) {
  return ((q.array() == 0.0) || (q.array() == 1.0)).all();
}

double perception(const Problem& p, const MatrixXd& q) {
  return wasserstein1(p.p_x(), output_distribution(q, p.p_y()), p.metric()).value;
}

}  // namespace

TEST_CASE("StepCdf") {
  const StepCdf cdf(vec({0.3, -0.1, 0.3, 0.5}), vec({0.1, 0.2, 0.3, 0.4}), 1e-12);
  CHECK(cdf.jumps().size() == 3);
  CHECK(cdf.at(-1.0) == 0.0);
  CHECK(cdf.at(-0.1) == doctest::Approx(0.2));
  CHECK(cdf.left_limit(-0.1) == 0.0);
  CHECK(cdf.at(0.3) == doctest::Approx(0.6));
  CHECK(cdf.left_limit(0.3) == doctest::Approx(0.2));
  CHECK(cdf.at(0.0) == doctest::Approx(0.2));
  CHECK(cdf.at(0.5) == doctest::Approx(1.0));
  CHECK(cdf.at(0.3 + 1e-13) == doctest::Approx(0.6));
}

TEST_CASE("analyze examples") {
  const BinaryAnalysis b = analyze(bsc());
  CHECK(b.u(0) == doctest::Approx(-0.43103448275862066).epsilon(1e-12));
  CHECK(b.u(1) == doctest::Approx(0.35714285714285715).epsilon(1e-12));
  CHECK(b.allocation == AllocationCase::x1_underallocated);

  const BinaryAnalysis i = analyze(independent());
  CHECK(i.u(0) == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(i.u(1) == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(i.cdf.left_limit(0.0) == doctest::Approx(1.0));
  CHECK(i.allocation == AllocationCase::x1_overallocated);

  const Problem sym(mat({{0.4, 0.1}, {0.1, 0.4}}), hamming(2), hamming(2));
  const BinaryAnalysis s = analyze(sym);
  CHECK(s.allocation == AllocationCase::balanced);
  const PiecewiseLinearDP sc = closed_form_curve(s);
  CHECK(sc.breakpoints().empty());
  CHECK(sc(0.0) == doctest::Approx(0.2).epsilon(1e-14));

  Rng rng(1);
  CHECK_THROWS_AS(analyze(random_problem(rng, 3, 2, false)), InputError);
  CHECK_THROWS_AS(jp_oracle_value(random_problem(rng, 3, 2, false), 0.1), InputError);
}

TEST_CASE("closed_form_curve examples") {
  const PiecewiseLinearDP b = closed_form_curve(bsc());
  REQUIRE(b.breakpoints().size() == 1);
  CHECK(b.breakpoints()[0] == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(b(0.0) == doctest::Approx(0.1142857142857143).epsilon(1e-12));
  CHECK(b.segments()[0].slope == doctest::Approx(-0.7142857142857143).epsilon(1e-12));
  CHECK(b(0.5) == d_star(bsc()).value);

  const PiecewiseLinearDP i = closed_form_curve(independent());
  REQUIRE(i.breakpoints().size() == 1);
  CHECK(i.breakpoints()[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(i(0.0) == doctest::Approx(0.48).epsilon(1e-12));
  CHECK(i(0.2) == doctest::Approx(0.44).epsilon(1e-12));
  CHECK(i(0.7) == doctest::Approx(0.4).epsilon(1e-12));

  const PiecewiseLinearDP n = closed_form_curve(noiseless());
  CHECK(n(0.0) == 0.0);
  CHECK(n.d_star() == 0.0);
}

TEST_CASE("breakpoint estimators and estimator_at examples") {
  const auto b = breakpoint_estimators(bsc(), analyze(bsc()));
  REQUIRE(b.size() == 1);
  CHECK(b[0].q.isApprox(MatrixXd::Identity(2, 2)));
  const auto i = breakpoint_estimators(independent(), analyze(independent()));
  REQUIRE(i.size() == 1);
  CHECK(i[0].q.isApprox(mat({{1, 1}, {0, 0}})));

  const MatrixXd z = estimator_at(bsc(), analyze(bsc()), 0.0);
  CHECK(z(0, 0) == doctest::Approx(1.0));
  CHECK(z(0, 1) == doctest::Approx(0.02 / 0.42).epsilon(1e-12));
  CHECK((output_distribution(z, bsc().p_y()) - vec({0.6, 0.4})).cwiseAbs().maxCoeff() <= 1e-15);

  const MatrixXd mid = estimator_at(bsc(), analyze(bsc()), 0.01);
  CHECK(expected_distortion(bsc(), mid) == doctest::Approx(0.5 * (0.1142857142857143 + 0.1)).epsilon(1e-10));
  CHECK(estimator_at(bsc(), analyze(bsc()), 0.02).isApprox(b[0].q));
  CHECK(estimator_at(bsc(), analyze(bsc()), 0.9).isApprox(b[0].q));
}

TEST_CASE("J_P examples") {
  for (double level : {0.0, 0.3, 1.0}) {
    CHECK(jp_objective(bsc(), level, 0.0) == doctest::Approx(0.1).epsilon(1e-14));
  }
  CHECK(jp_objective(bsc(), 0.0, 0.35714285714285715) == doctest::Approx(0.1142857142857143).epsilon(1e-12));
  CHECK(jp_oracle_value(bsc(), 0.01) == doctest::Approx(0.10714285714285714).epsilon(1e-12));
  CHECK(jp_oracle_value(bsc(), 1.0) == doctest::Approx(0.1).epsilon(1e-14));
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const Problem p = random_binary(rng, false, false);
    const double j0 = jp_objective(p, 1.0, 0.0);
    for (Index y = 0; y < p.ny(); ++y) {
      CHECK(jp_objective(p, 1.0, analyze(p).u(y)) <= j0 + 1e-12);
    }
  }
}

TEST_CASE("property: triple agreement on 200 binary instances") {
  Rng rng(61);
  double worst_lp = 0.0, worst_jp = 0.0;
  for (int t = 0; t < 200; ++t) {
    const Problem p = random_binary(rng, t % 3 == 0, t % 7 == 0);
    const BinaryAnalysis a = analyze(p);
    const PiecewiseLinearDP c = closed_form_curve(a);
    CHECK(c.slopes_nondecreasing());
    CHECK(c.continuity_gap() <= 1e-12);
    for (std::size_t i = 0; i < a.breakpoints.size(); ++i) {
      CHECK(a.breakpoints[i] >= 0.0);
      CHECK(a.breakpoints[i] <= 1.0);
      if (i > 0) CHECK(a.breakpoints[i] < a.breakpoints[i - 1]);
    }
    // slopes are -2|u| / c with u the interval's cost level
    for (std::size_t k = 0; k + 1 < c.segments().size(); ++k) {
      const double u = a.interval_u[a.interval_u.size() - 1 - k];
      CHECK(c.segments()[k].slope == doctest::Approx(-2.0 * std::abs(u) / a.metric_scale).epsilon(1e-12));
    }
    for (int k = 0; k <= 20; ++k) {
      const double level = k / 20.0;
      worst_lp = std::max(worst_lp, std::abs(c(level) - solve_dp_at(p, level).value));
      worst_jp = std::max(worst_jp, std::abs(c(level) - jp_oracle_value(p, level)));
    }
    const double level = rng.uniform();
    worst_jp = std::max(worst_jp, std::abs(c(level) - jp_oracle_value(p, level)));
  }
  CHECK(worst_lp <= 1e-8);
  CHECK(worst_jp <= 1e-10);
}

TEST_CASE("property: breakpoint increments equal tied symbol mass; cases are exclusive") {
  Rng rng(62);
  int under = 0, over = 0;
  for (int t = 0; t < 300; ++t) {
    const Problem p = random_binary(rng, false, false);
    const BinaryAnalysis a = analyze(p);
    const double p1 = p.p_x()(0);
    const bool is_under = p1 > a.cdf.at(0.0) + 1e-12;
    const bool is_over = a.cdf.left_limit(0.0) > p1 + 1e-12;
    CHECK(!(is_under && is_over));
    if (is_under) {
      ++under;
      CHECK(a.allocation == AllocationCase::x1_underallocated);
      for (std::size_t i = 1; i < a.breakpoints.size(); ++i) {
        // masses of the symbols whose u_y equals u_i
        double mass = 0.0;
        for (Index y = 0; y < p.ny(); ++y) {
          if (std::abs(a.u(y) - a.breakpoint_u[i]) <= 1e-12) mass += p.p_y()(y);
        }
        CHECK(a.breakpoints[i] == doctest::Approx(a.breakpoints[i - 1] - mass).epsilon(1e-12));
      }
    } else if (is_over) {
      ++over;
      CHECK(a.allocation == AllocationCase::x1_overallocated);
    } else {
      CHECK(a.allocation == AllocationCase::balanced);
    }
  }
  CHECK(under > 0);
  CHECK(over > 0);
}

TEST_CASE("property: estimators are feasible, optimal and deterministic at breakpoints") {
  Rng rng(63);
  for (int t = 0; t < 200; ++t) {
    const Problem p = random_binary(rng, t % 3 == 0, t % 5 == 0);
    const BinaryAnalysis a = analyze(p);
    const PiecewiseLinearDP c = closed_form_curve(a);
    for (const auto& e : breakpoint_estimators(p, a)) {
      CHECK(e.p_level > 0.0);
      CHECK(zero_one(e.q));
      CHECK(is_column_stochastic(e.q, 1e-12));
      CHECK(perception(p, e.q) <= e.p_level + 1e-10);
      CHECK(std::abs(expected_distortion(p, e.q) - c(e.p_level)) <= 1e-10);
    }
    for (int k = 0; k <= 20; ++k) {
      const double level = k / 20.0;
      const MatrixXd q = estimator_at(p, a, level);
      CHECK(is_column_stochastic(q, 1e-10));
      CHECK(perception(p, q) <= level + 1e-9);
      CHECK(std::abs(expected_distortion(p, q) - c(level)) <= 1e-9);
    }
    const CurveReport rep = closed_form_report(p);
    CHECK(rep.method == CurveMethod::closed_form);
    CHECK(rep.estimators.front().p_level == 0.0);
  }
}
