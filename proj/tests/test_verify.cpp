#include <doctest.h>

#include <cmath>
#include <limits>

#include "dp/verify.hpp"
#include "support.hpp"

using namespace dp;
using namespace dp::testing;

TEST_CASE("grid oracle examples") {
  for (double level : {0.0, 0.3, 1.0}) CHECK(grid_oracle(noiseless(), level, 10) == 0.0);

  const double b = grid_oracle(bsc(), 1.0, 50);
  CHECK(b >= 0.1 - 1e-12);
  CHECK(b <= 0.1 + 0.02);

  const double i = grid_oracle(independent(), 0.2, 100);
  CHECK(std::abs(i - 0.44) <= 0.01);

  const GridOracle g(bsc(), 200);
  CHECK(g.lipschitz_band() == doctest::Approx(2.0 / 200.0));
  CHECK(g.size() == 201u * 201u);
}

TEST_CASE("grid oracle guard and infeasible levels") {
  Rng rng(1);
  CHECK_THROWS_AS(GridOracle(random_problem(rng, 3, 5, false), 200), BudgetExceeded);
  CHECK_THROWS_AS(GridOracle(bsc(), 0), InputError);
  // no grid point of the 1/7 lattice reproduces P_X = (0.6, 0.4) exactly
  const double v = grid_oracle(bsc(), 0.0, 7);
  CHECK(v == std::numeric_limits<double>::infinity());
}

TEST_CASE("property: grid oracle is an upper bound inside its band") {
  Rng rng(71);
  for (int t = 0; t < 20; ++t) {
    const Problem p = random_problem(rng, 2, 2, t % 2 == 0);
    const GridOracle g(p, 100);
    for (int k = 0; k < 5; ++k) {
      const double level = rng.uniform(0.02, 1.0);
      const double exact = solve_dp_at(p, level).value;
      const double grid = g.value(level);
      CHECK(grid >= exact - 1e-9);
      CHECK(grid <= exact + g.lipschitz_band() + 1e-12);
    }
  }
  for (int t = 0; t < 3; ++t) {
    const Problem p = random_problem(rng, 3, 2, true);
    const GridOracle g(p, 12);
    for (int k = 0; k < 5; ++k) {
      const double level = rng.uniform();
      CHECK(g.value(level) >= solve_dp_at(p, level).value - 1e-9);
    }
  }
}

TEST_CASE("cross_verify: BSC on 21 points") {
  const auto levels = uniform_levels(21);
  const VerifyReport r = cross_verify(bsc(), levels);
  CHECK(r.pass);
  CHECK(r.max_discrepancy <= 1e-8);
  CHECK(r.rows.size() == 21);
  CHECK(r.methods == std::vector<std::string>{"closed-form", "vertex", "sweep", "lp", "grid"});
  for (const auto& row : r.rows) {
    REQUIRE(row.closed_form);
    REQUIRE(row.grid);
  }
}

TEST_CASE("cross_verify: seeded 3x5 instance") {
  Rng rng(35);
  const Problem p = random_problem(rng, 3, 5, true);
  const VerifyReport r = cross_verify(p, uniform_levels(21));
  CHECK(r.pass);
  CHECK(r.methods == std::vector<std::string>{"vertex", "sweep", "lp"});
  for (const auto& row : r.rows) CHECK(std::abs(*row.vertex - *row.sweep) <= 1e-8);
}

TEST_CASE("cross_verify: corrupted slope fails with a localized report") {
  VerifyOptions opts;
  opts.slope_fault = 1e-3;
  const VerifyReport r = cross_verify(independent(), uniform_levels(21), opts);
  CHECK_FALSE(r.pass);
  bool localized = false;
  for (const auto& f : r.failures) localized |= f.find("P=0.05:") != std::string::npos;
  CHECK(localized);

  const VerifyReport b = cross_verify(bsc(), uniform_levels(21), opts);
  CHECK_FALSE(b.pass);
  bool at_break = false;
  for (const auto& f : b.failures) at_break |= f.find("P=0.02") != std::string::npos;
  CHECK(at_break);
}

TEST_CASE("cross_verify is deterministic") {
  Rng rng(36);
  const Problem p = random_problem(rng, 2, 3, true);
  const auto levels = uniform_levels(11);
  CHECK(render(cross_verify(p, levels)) == render(cross_verify(p, levels)));
  CHECK_THROWS_AS(uniform_levels(1), InputError);
}
