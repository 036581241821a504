#include "dp/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace dp {

const char* to_string(CurveMethod method) {
  switch (method) {
    case CurveMethod::vertex:
      return "vertex";
    case CurveMethod::sweep:
      return "sweep";
    case CurveMethod::closed_form:
      return "closed-form";
  }
  return "unknown";
}

PiecewiseLinearDP::PiecewiseLinearDP(std::vector<double> breakpoints,
                                     std::vector<Segment> segments,
                                     double d_star)
    : breakpoints_(std::move(breakpoints)),
      segments_(std::move(segments)),
      d_star_(d_star) {
  if (segments_.size() != breakpoints_.size() + 1) {
    throw InputError("piecewise curve: need one more segment than breakpoints");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!std::isfinite(breakpoints_[i]) || breakpoints_[i] < 0.0 ||
        (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))) {
      throw InputError("piecewise curve: breakpoints must be strictly "
                       "increasing and nonnegative");
    }
  }
  segments_.back() = Segment{d_star_, 0.0};
}

PiecewiseLinearDP PiecewiseLinearDP::constant(double d_star) {
  return PiecewiseLinearDP({}, {Segment{d_star, 0.0}}, d_star);
}

std::size_t PiecewiseLinearDP::segment_index(double p_level) const {
  return static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), p_level) -
      breakpoints_.begin());
}

double PiecewiseLinearDP::operator()(double p_level) const {
  const std::size_t i = segment_index(p_level);
  if (i + 1 == segments_.size()) return d_star_;
  return segments_[i].at(p_level);
}

double PiecewiseLinearDP::slope_at(double p_level) const {
  return segments_[segment_index(p_level)].slope;
}

double PiecewiseLinearDP::continuity_gap() const {
  double gap = 0.0;
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const double b = breakpoints_[i];
    gap = std::max(gap, std::abs(segments_[i].at(b) - segments_[i + 1].at(b)));
  }
  return gap;
}

bool PiecewiseLinearDP::slopes_nondecreasing(double tol) const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].slope > tol) return false;
    if (i > 0 && segments_[i].slope < segments_[i - 1].slope - tol) {
      return false;
    }
  }
  return true;
}

ProjectedPoint project_vertex(const VectorXd& vertex, const Problem& problem) {
  const DualSolution dual = unpack_dual_point(problem, vertex);
  return {dual.w.dot(problem.p_y()) + dual.r.dot(problem.p_x()), -dual.l};
}

PiecewiseLinearDP upper_envelope(std::span<const ProjectedPoint> lines,
                                 double d_star, std::vector<Index>* active,
                                 double min_segment_length) {
  if (lines.empty()) throw InputError("upper_envelope: no lines");
  constexpr double kTie = 1e-12;
  const Index n = static_cast<Index>(lines.size());

  Index cur = 0;
  for (Index j = 1; j < n; ++j) {
    const double diff = lines[j].p0 - lines[cur].p0;
    if (diff > kTie || (diff >= -kTie && lines[j].p1 > lines[cur].p1)) cur = j;
  }

  struct Piece {
    double start;
    Index line;
  };
  std::vector<Piece> pieces{{0.0, cur}};
  double at = 0.0;
  while (lines[cur].p1 < -kTie) {
    Index best = -1;
    double best_x = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < n; ++j) {
      const double dslope = lines[j].p1 - lines[cur].p1;
      if (dslope <= kTie) continue;
      const double x = (lines[cur].p0 - lines[j].p0) / dslope;
      if (x < best_x - kTie ||
          (x <= best_x + kTie && best >= 0 && lines[j].p1 > lines[best].p1)) {
        best = j;
        best_x = std::min(best_x, x);
      }
    }
    if (best < 0 || best_x > 1.0 + 1e-9) break;
    best_x = std::clamp(best_x, at, 1.0);
    if (best_x - pieces.back().start <= min_segment_length) {
      pieces.back().line = best;
    } else {
      pieces.push_back({best_x, best});
    }
    at = best_x;
    cur = best;
  }

  const ProjectedPoint& last = lines[pieces.back().line];
  if (std::abs(last.p1) > 1e-9 || std::abs(last.p0 - d_star) > 1e-8) {
    throw SolverError("upper_envelope: lines do not reach the plateau D* = " +
                      std::to_string(d_star) + " within [0, 1]");
  }

  std::vector<double> breakpoints;
  std::vector<Segment> segments;
  if (active) active->clear();
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (k > 0) breakpoints.push_back(pieces[k].start);
    const ProjectedPoint& line = lines[pieces[k].line];
    segments.push_back({line.p0, line.p1});
    if (active) active->push_back(pieces[k].line);
  }
  return PiecewiseLinearDP(std::move(breakpoints), std::move(segments), d_star);
}

std::vector<BreakpointEstimator> breakpoint_estimators(
    const Problem& problem, const PiecewiseLinearDP& curve,
    const SolveOptions& options, Form form) {
  std::vector<double> levels{0.0};
  for (double b : curve.breakpoints()) {
    if (b > 0.0) levels.push_back(b);
  }
  std::vector<BreakpointEstimator> out;
  out.reserve(levels.size());
  for (double p : levels) {
    out.push_back({p, solve_dp_at(problem, p, form, options).estimator});
  }
  return out;
}

CurveReport curve_by_vertices(const Problem& problem,
                              const CurveOptions& options) {
  CurveReport rep;
  rep.method = CurveMethod::vertex;
  rep.vertices = enumerate_vertices(dual_polyhedron(problem), options.vertex);
  if (rep.vertices.empty()) {
    throw SolverError("curve_by_vertices: dual feasible set has no vertex");
  }
  rep.s2.reserve(rep.vertices.size());
  for (const VectorXd& v : rep.vertices) {
    rep.s2.push_back(project_vertex(v, problem));
  }
  rep.hull = hull_extremes(rep.s2);
  rep.curve = upper_envelope(rep.s2, d_star(problem).value, &rep.active,
                             options.min_segment_length);
  rep.estimators =
      breakpoint_estimators(problem, rep.curve, options.solve, Form::ot);
  rep.solves = static_cast<Index>(rep.estimators.size());
  return rep;
}

CurveReport curve_by_sweep(const Problem& problem,
                           const CurveOptions& options) {
  if (options.grid.size() < 2) {
    throw InputError("curve_by_sweep: grid needs at least two points");
  }
  std::vector<double> grid{0.0, 1.0};
  for (double p : options.grid) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw InputError("curve_by_sweep: grid values must lie in [0, 1]");
    }
    grid.push_back(p);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  CurveReport rep;
  rep.method = CurveMethod::sweep;

  struct Sample {
    double p;
    double value;
    ProjectedPoint line;
  };
  auto sample = [&](double p) {
    if (rep.solves >= options.max_solves) {
      throw BudgetExceeded("curve_by_sweep: more than " +
                           std::to_string(options.max_solves) +
                           " LP solves required");
    }
    ++rep.solves;
    const SolveReport s = solve_dp_at(problem, p, options.form, options.solve);
    const ProjectedPoint line{s.dual.objective + s.dual.l * p, -s.dual.l};
    rep.s2.push_back(line);
    return Sample{p, s.value, line};
  };

  std::vector<Sample> samples;
  for (double p : grid) samples.push_back(sample(p));

  // Between two samples the curve is max(La, Lb) iff D at their crossing
  // lies on both lines; otherwise the crossing yields a new line.
  std::vector<std::pair<Sample, Sample>> work;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    work.emplace_back(samples[i], samples[i + 1]);
  }
  while (!work.empty()) {
    const auto [a, b] = work.back();
    work.pop_back();
    const double dslope = b.line.p1 - a.line.p1;
    if (std::abs(dslope) <= options.slope_cluster_tol) continue;
    const double x = (a.line.p0 - b.line.p0) / dslope;
    if (!(x > a.p && x < b.p)) continue;
    const Sample mid = sample(x);
    if (mid.value <= a.line.at(x) + 1e-10 * (1.0 + std::abs(mid.value))) {
      continue;
    }
    work.emplace_back(a, mid);
    work.emplace_back(mid, b);
  }

  rep.hull = hull_extremes(rep.s2);
  rep.curve = upper_envelope(rep.s2, d_star(problem).value, &rep.active,
                             options.min_segment_length);
  rep.estimators =
      breakpoint_estimators(problem, rep.curve, options.solve, options.form);
  rep.solves += static_cast<Index>(rep.estimators.size());
  return rep;
}

std::vector<double> breakpoint_candidates(std::span<const ProjectedPoint> s2) {
  constexpr double kTol = 1e-12;
  std::vector<ProjectedPoint> pts(s2.begin(), s2.end());
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.p1 < b.p1 || (a.p1 == b.p1 && a.p0 < b.p0);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) {
                          return std::abs(a.p0 - b.p0) <= kTol &&
                                 std::abs(a.p1 - b.p1) <= kTol;
                        }),
            pts.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dslope = pts[j].p1 - pts[i].p1;
      if (std::abs(dslope) <= kTol) continue;
      const double x = (pts[i].p0 - pts[j].p0) / dslope;
      if (x >= -kTol && x <= 1.0 + kTol) out.push_back(std::clamp(x, 0.0, 1.0));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return b - a <= kTol; }),
            out.end());
  return out;
}

std::vector<Index> hull_extremes(std::span<const ProjectedPoint> s2) {
  if (s2.empty()) return {};
  std::vector<Index> idx(s2.size());
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    return s2[a].p0 < s2[b].p0 || (s2[a].p0 == s2[b].p0 && s2[a].p1 < s2[b].p1);
  });
  idx.erase(std::unique(idx.begin(), idx.end(),
                        [&](Index a, Index b) {
                          return s2[a].p0 == s2[b].p0 && s2[a].p1 == s2[b].p1;
                        }),
            idx.end());
  if (idx.size() < 3) return idx;

  auto cross = [&](Index o, Index a, Index b) {
    return (s2[a].p0 - s2[o].p0) * (s2[b].p1 - s2[o].p1) -
           (s2[a].p1 - s2[o].p1) * (s2[b].p0 - s2[o].p0);
  };
  std::vector<Index> hull(2 * idx.size());
  std::size_t k = 0;
  for (Index i : idx) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], i) <= 0.0) --k;
    hull[k++] = i;
  }
  for (std::size_t t = idx.size() - 1, lower = k + 1; t-- > 0;) {
    const Index i = idx[t];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], i) <= 0.0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  return hull;
}

MatrixXd estimator_on_curve(const Problem& problem, const CurveReport& report,
                            double p_level) {
  if (!std::isfinite(p_level) || p_level < 0.0) {
    throw InputError("estimator_on_curve: perception level must be >= 0");
  }
  if (p_level >= 1.0) return d_star(problem).estimator;
  const auto& est = report.estimators;
  if (est.empty()) throw InputError("estimator_on_curve: no stored estimators");
  if (p_level >= est.back().p_level) return est.back().q;
  std::size_t k = 0;
  while (k + 1 < est.size() && est[k + 1].p_level <= p_level) ++k;
  const double a = est[k].p_level;
  const double b = est[k + 1].p_level;
  const double alpha = (p_level - a) / (b - a);
  return (1.0 - alpha) * est[k].q + alpha * est[k + 1].q;
}

}  // namespace dp
