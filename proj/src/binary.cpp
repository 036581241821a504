#include "dp/binary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dp {

StepCdf::StepCdf(const VectorXd& u, const VectorXd& weights, double tie_tol)
    : tie_tol_(tie_tol) {
  std::vector<Index> idx(static_cast<std::size_t>(u.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return u(a) < u(b); });
  double previous = 0.0;
  for (Index i : idx) {
    if (jumps_.empty() || u(i) - previous > tie_tol_) {
      jumps_.push_back(u(i));
      masses_.push_back(0.0);
    }
    masses_.back() += weights(i);
    previous = u(i);
  }
  std::partial_sum(masses_.begin(), masses_.end(),
                   std::back_inserter(cumulative_));
}

double StepCdf::at(double u) const {
  const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), u + tie_tol_);
  const auto k = it - jumps_.begin();
  return k == 0 ? 0.0 : cumulative_[static_cast<std::size_t>(k - 1)];
}

double StepCdf::left_limit(double u) const {
  const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), u - tie_tol_);
  const auto k = it - jumps_.begin();
  return k == 0 ? 0.0 : cumulative_[static_cast<std::size_t>(k - 1)];
}

const char* to_string(AllocationCase c) {
  switch (c) {
    case AllocationCase::x1_underallocated:
      return "x1_underallocated";
    case AllocationCase::x1_overallocated:
      return "x1_overallocated";
    case AllocationCase::balanced:
      return "balanced";
  }
  return "unknown";
}

namespace {

void require_binary(const Problem& problem, const char* what) {
  if (problem.nx() != 2) {
    throw InputError(std::string(what) + ": source alphabet must be binary, "
                     "got " + std::to_string(problem.nx()) + " symbols");
  }
}

VectorXd half_cost_gap(const Problem& problem) {
  const MatrixXd rp = rho_prime(problem);
  return 0.5 * (rp.row(0) - rp.row(1)).transpose();
}

}  // namespace

BinaryAnalysis analyze(const Problem& problem) {
  require_binary(problem, "analyze");
  BinaryAnalysis a;
  const double tol = problem.tolerances().validation;
  a.tie_tol = tol;
  a.u = half_cost_gap(problem);
  a.order.resize(static_cast<std::size_t>(a.u.size()));
  std::iota(a.order.begin(), a.order.end(), Index{0});
  std::stable_sort(a.order.begin(), a.order.end(),
                   [&](Index i, Index j) { return a.u(i) < a.u(j); });
  a.cdf = StepCdf(a.u, problem.p_y(), tol);
  a.p_x1 = problem.p_x()(0);
  a.d_star = d_star(problem).value;
  a.metric_scale = problem.metric()(0, 1);

  const double below_zero = a.cdf.left_limit(0.0);
  const double upto_zero = a.cdf.at(0.0);
  if (a.metric_scale <= 0.0) {
    // W1 vanishes identically; the perception constraint never binds.
    a.allocation = AllocationCase::balanced;
  } else if (a.p_x1 > upto_zero + tol) {
    a.allocation = AllocationCase::x1_underallocated;
  } else if (below_zero > a.p_x1 + tol) {
    a.allocation = AllocationCase::x1_overallocated;
  } else {
    a.allocation = AllocationCase::balanced;
  }

  a.breakpoints = {0.0};
  a.breakpoint_u = {0.0};
  a.breakpoint_values = {a.d_star};
  const auto& jumps = a.cdf.jumps();

  // Walks the cost groups outward from zero; `reach` is P_Y^- evaluated so
  // that level = |p_x1 - reach| is the next breakpoint in TV units.
  auto extend = [&](double group_u, double reach, double sign) {
    const double level = sign * (a.p_x1 - reach);
    a.interval_u.push_back(group_u);
    if (level < -tol) return false;
    const double p = std::max(0.0, level);
    a.breakpoint_values.push_back(a.breakpoint_values.back() +
                                  2.0 * std::abs(group_u) *
                                      (a.breakpoints.back() - p));
    a.breakpoints.push_back(p);
    a.breakpoint_u.push_back(group_u);
    return p > tol;
  };

  if (a.allocation == AllocationCase::x1_underallocated) {
    a.breakpoints[0] = a.p_x1 - upto_zero;
    for (double g : jumps) {
      if (g <= tol) continue;
      if (!extend(g, a.cdf.at(g), 1.0)) break;
    }
  } else if (a.allocation == AllocationCase::x1_overallocated) {
    a.breakpoints[0] = below_zero - a.p_x1;
    for (auto it = jumps.rbegin(); it != jumps.rend(); ++it) {
      if (*it >= -tol) continue;
      if (!extend(*it, a.cdf.left_limit(*it), -1.0)) break;
    }
  }
  if (a.breakpoints.back() <= tol) a.breakpoints.back() = 0.0;
  a.i_max = static_cast<Index>(a.breakpoints.size()) - 1;
  for (double& p : a.breakpoints) p *= a.metric_scale;
  return a;
}

PiecewiseLinearDP closed_form_curve(const BinaryAnalysis& a) {
  if (a.allocation == AllocationCase::balanced) {
    return PiecewiseLinearDP::constant(a.d_star);
  }
  const double c = a.metric_scale;
  std::vector<double> breaks;
  std::vector<Segment> segs;
  const std::size_t last = a.breakpoints.size() - 1;
  auto through = [](double p, double value, double slope) {
    return Segment{value - slope * p, slope};
  };
  if (a.interval_u.size() > last) {
    const double slope = -2.0 * std::abs(a.interval_u.back()) / c;
    segs.push_back(through(a.breakpoints[last], a.breakpoint_values[last], slope));
  }
  for (std::size_t i = last; i >= 1; --i) {
    if (a.breakpoints[i] > 0.0) breaks.push_back(a.breakpoints[i]);
    const double slope = -2.0 * std::abs(a.interval_u[i - 1]) / c;
    segs.push_back(
        through(a.breakpoints[i - 1], a.breakpoint_values[i - 1], slope));
  }
  if (a.breakpoints[0] > 0.0) breaks.push_back(a.breakpoints[0]);
  segs.push_back({a.d_star, 0.0});
  return PiecewiseLinearDP(std::move(breaks), std::move(segs), a.d_star);
}

PiecewiseLinearDP closed_form_curve(const Problem& problem) {
  return closed_form_curve(analyze(problem));
}

std::vector<BreakpointEstimator> breakpoint_estimators(
    const Problem& problem, const BinaryAnalysis& a) {
  require_binary(problem, "breakpoint_estimators");
  std::vector<BreakpointEstimator> out;
  if (a.allocation == AllocationCase::balanced) return out;
  const bool under = a.allocation == AllocationCase::x1_underallocated;
  for (std::size_t i = 0; i < a.breakpoints.size(); ++i) {
    if (a.breakpoints[i] <= 0.0) continue;
    const double ui = a.breakpoint_u[i];
    MatrixXd q = MatrixXd::Zero(2, problem.ny());
    for (Index y = 0; y < problem.ny(); ++y) {
      const bool to_x1 = under ? a.u(y) <= ui + a.tie_tol
                               : a.u(y) < ui - a.tie_tol;
      q(to_x1 ? 0 : 1, y) = 1.0;
    }
    out.push_back({a.breakpoints[i], std::move(q)});
  }
  return out;
}

MatrixXd zero_level_estimator(const Problem& problem, const BinaryAnalysis& a) {
  require_binary(problem, "zero_level_estimator");
  if (a.metric_scale <= 0.0) return d_star(problem).estimator;
  const VectorXd& p_y = problem.p_y();
  const double threshold = a.breakpoint_u.back();
  VectorXd to_x1 = VectorXd::Zero(problem.ny());
  for (Index y = 0; y < problem.ny(); ++y) {
    bool in = false;
    switch (a.allocation) {
      case AllocationCase::x1_underallocated:
        in = a.u(y) <= threshold + a.tie_tol;
        break;
      case AllocationCase::x1_overallocated:
        in = a.u(y) < threshold - a.tie_tol;
        break;
      case AllocationCase::balanced:
        in = a.u(y) < -a.tie_tol;
        break;
    }
    to_x1(y) = in ? 1.0 : 0.0;
  }
  // Move mass on the cheapest symbols until the output marginal is P_X.
  double excess = to_x1.dot(p_y) - a.p_x1;
  if (excess < 0.0) {
    for (Index y : a.order) {
      if (excess >= 0.0) break;
      if (to_x1(y) >= 1.0) continue;
      const double take = std::min(p_y(y), -excess);
      to_x1(y) = take / p_y(y);
      excess += take;
    }
  } else if (excess > 0.0) {
    for (auto it = a.order.rbegin(); it != a.order.rend(); ++it) {
      if (excess <= 0.0) break;
      const Index y = *it;
      if (to_x1(y) <= 0.0) continue;
      const double take = std::min(p_y(y), excess);
      to_x1(y) = 1.0 - take / p_y(y);
      excess -= take;
    }
  }
  MatrixXd q(2, problem.ny());
  q.row(0) = to_x1.transpose();
  q.row(1) = (1.0 - to_x1.array()).matrix().transpose();
  return q;
}

namespace {

std::vector<BreakpointEstimator> ascending_estimators(const Problem& problem,
                                                      const BinaryAnalysis& a) {
  std::vector<BreakpointEstimator> pts{{0.0, zero_level_estimator(problem, a)}};
  auto bps = breakpoint_estimators(problem, a);
  for (auto it = bps.rbegin(); it != bps.rend(); ++it) {
    pts.push_back(std::move(*it));
  }
  return pts;
}

}  // namespace

MatrixXd estimator_at(const Problem& problem, const BinaryAnalysis& a,
                      double p_level) {
  if (!std::isfinite(p_level) || p_level < 0.0) {
    throw InputError("estimator_at: perception level must be >= 0");
  }
  const auto pts = ascending_estimators(problem, a);
  if (p_level >= pts.back().p_level) return pts.back().q;
  std::size_t k = 0;
  while (k + 1 < pts.size() && pts[k + 1].p_level <= p_level) ++k;
  const double lo = pts[k].p_level;
  const double hi = pts[k + 1].p_level;
  const double alpha = (p_level - lo) / (hi - lo);
  return alpha * pts[k + 1].q + (1.0 - alpha) * pts[k].q;
}

CurveReport closed_form_report(const Problem& problem) {
  const BinaryAnalysis a = analyze(problem);
  CurveReport rep;
  rep.method = CurveMethod::closed_form;
  rep.curve = closed_form_curve(a);
  rep.estimators = ascending_estimators(problem, a);
  return rep;
}

double jp_objective(const Problem& problem, double p_level, double u) {
  require_binary(problem, "jp_objective");
  const double tol = problem.tolerances().validation;
  const VectorXd gap = half_cost_gap(problem);
  const MatrixXd r = rho(problem);
  const double c = problem.metric()(0, 1);
  double value = 0.0;
  double below = 0.0;
  for (Index y = 0; y < problem.ny(); ++y) {
    if (gap(y) <= u + tol) {
      value += r(0, y);
      below += problem.p_y()(y);
    } else {
      value += r(1, y);
    }
  }
  value += 2.0 * (problem.p_x()(0) - below) * u;
  if (u != 0.0) {
    value -= c > 0.0 ? 2.0 * (p_level / c) * std::abs(u)
                     : std::numeric_limits<double>::infinity();
  }
  return value;
}

double jp_oracle_value(const Problem& problem, double p_level) {
  require_binary(problem, "jp_oracle_value");
  double best = jp_objective(problem, p_level, 0.0);
  const VectorXd gap = half_cost_gap(problem);
  for (Index y = 0; y < gap.size(); ++y) {
    best = std::max(best, jp_objective(problem, p_level, gap(y)));
  }
  return best;
}

}  // namespace dp
