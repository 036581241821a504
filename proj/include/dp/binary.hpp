#pragma once

// Solver-free curve and estimators for a binary source alphabet {x1, x2}.
//
// Each output symbol y gets u_y = (rho'(x1, y) - rho'(x2, y)) / 2, half the
// extra conditional cost of reconstructing y as x1. With P_Y^-(u) the mass
// of symbols with u_y <= u, the curve has breakpoints p_x1 - P_Y^-(u_i)
// (x1 under-allocated) or P_Y^-(u_{-i}^-) - p_x1 (over-allocated) and
// slopes -2|u_i| between them. Any ground metric on two points is
// c * Hamming; levels are rescaled by c so the analysis runs in TV units.

#include <Eigen/Dense>

#include <vector>

#include "dp/core_model.hpp"
#include "dp/curve.hpp"

namespace dp {

// Right-continuous step CDF of u_Y under P_Y.
class StepCdf {
 public:
  StepCdf() = default;
  StepCdf(const VectorXd& u, const VectorXd& weights, double tie_tol);

  double at(double u) const;          // P(u_Y <= u)
  double left_limit(double u) const;  // P(u_Y < u)

  // Distinct jump locations (ties merged) and the mass at each.
  const std::vector<double>& jumps() const { return jumps_; }
  const std::vector<double>& masses() const { return masses_; }

 private:
  std::vector<double> jumps_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;
  double tie_tol_ = 0.0;
};

enum class AllocationCase { x1_underallocated, x1_overallocated, balanced };

const char* to_string(AllocationCase c);

struct BinaryAnalysis {
  VectorXd u;                // per output symbol
  std::vector<Index> order;  // symbols sorted by u, ascending
  AllocationCase allocation = AllocationCase::balanced;
  StepCdf cdf;

  double p_x1 = 0.0;
  double d_star = 0.0;
  double metric_scale = 1.0;  // H(x1, x2)
  double tie_tol = 1e-12;

  // P*_0 >= P*_1 >= ... >= P*_I in the problem's perception units, with
  // breakpoint_u[i] the grouped cost value u_i defining P*_i (u_0 = 0).
  std::vector<double> breakpoints;
  std::vector<double> breakpoint_u;
  std::vector<double> breakpoint_values;  // D(P*_i)
  Index i_max = 0;

  // interval_u[i - 1] drives the segment [P*_i, P*_{i-1}], i = 1..I; a
  // trailing entry drives [0, P*_I] when P*_I > 0. Slope is -2|u| / c.
  std::vector<double> interval_u;
};

BinaryAnalysis analyze(const Problem& problem);

PiecewiseLinearDP closed_form_curve(const Problem& problem);
PiecewiseLinearDP closed_form_curve(const BinaryAnalysis& analysis);

// Deterministic estimators at the nonzero breakpoints, P*_0 first.
std::vector<BreakpointEstimator> breakpoint_estimators(
    const Problem& problem, const BinaryAnalysis& analysis);

// Estimator that attains the curve at P = 0 (greedy fill of x1 mass).
MatrixXd zero_level_estimator(const Problem& problem,
                              const BinaryAnalysis& analysis);

MatrixXd estimator_at(const Problem& problem, const BinaryAnalysis& analysis,
                      double p_level);

// Curve plus stored estimators at P = 0 and each breakpoint.
CurveReport closed_form_report(const Problem& problem);

// Dual objective restricted to u = nu_1 - nu_2:
//   sum_{u_y <= u} rho(x1, y) + sum_{u_y > u} rho(x2, y)
//     + 2 (p_x1 - P_Y^-(u)) u - 2 (P / c) |u|.
double jp_objective(const Problem& problem, double p_level, double u);

// max of jp_objective over u in {0} union {u_y}.
double jp_oracle_value(const Problem& problem, double p_level);

}  // namespace dp
