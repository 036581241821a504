#pragma once

// Slow, independent checks: brute-force search over a uniform grid of
// estimators, and cross-method comparison of D(P).

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dp/core_model.hpp"
#include "dp/curve.hpp"

namespace dp {

// Every column of Q ranges over the simplex grid with denominator `steps`.
// Distortion and W1 are tabulated once; value(P) is the best distortion
// among grid points with W1 <= P (+infinity if none), an upper bound on
// D(P).
class GridOracle {
 public:
  GridOracle(const Problem& problem, Index steps, double max_points = 1e8);

  double value(double p_level) const;
  // n_y (max d - min d) / steps.
  double lipschitz_band() const { return band_; }
  Index steps() const { return steps_; }
  std::size_t size() const { return table_.size(); }

 private:
  struct Entry {
    double w1;
    double distortion;
  };
  std::vector<Entry> table_;  // sorted by w1
  std::vector<double> prefix_min_;
  Index steps_;
  double band_;
};

double grid_oracle(const Problem& problem, double p_level, Index steps);

struct VerifyRow {
  double p_level = 0.0;
  std::optional<double> closed_form;
  std::optional<double> vertex;
  std::optional<double> sweep;
  std::optional<double> lp;
  std::optional<double> grid;
  double discrepancy = 0.0;  // spread among the exact methods
};

struct VerifyReport {
  std::string description;
  std::vector<std::string> methods;
  std::vector<VerifyRow> rows;
  double max_discrepancy = 0.0;
  double tolerance = 1e-8;
  double grid_band = 0.0;
  std::vector<std::string> failures;
  bool pass = true;
};

struct VerifyOptions {
  double tolerance = 1e-8;
  Index grid_steps = 200;        // used when n_x * n_y <= 4
  CurveOptions curve;
  double slope_fault = 0.0;      // added to the first sweep segment slope
  std::string name;
};

VerifyReport cross_verify(const Problem& problem, std::span<const double> p_grid,
                          const VerifyOptions& options = {});

// Uniform grid of `points` levels on [0, 1].
std::vector<double> uniform_levels(Index points);

std::string render(const VerifyReport& report);

}  // namespace dp
