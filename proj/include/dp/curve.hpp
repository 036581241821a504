#pragma once

// The full piecewise-linear curve D(P) on [0, 1], either from the vertices
// of the dual feasible set (upper envelope of the lines p0 + p1 P) or from
// a sequence of single-level LP solves refined at line intersections.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "dp/core_model.hpp"
#include "dp/lp.hpp"
#include "dp/programs.hpp"

namespace dp {

// Line p0 + p1 P contributed by one dual vertex.
struct ProjectedPoint {
  double p0 = 0.0;
  double p1 = 0.0;

  double at(double p_level) const { return p0 + p1 * p_level; }
};

struct Segment {
  double intercept = 0.0;
  double slope = 0.0;

  double at(double p_level) const { return intercept + slope * p_level; }
};

// segments[i] is active on [breakpoints[i-1], breakpoints[i]] (with 0 and
// +infinity closing the ends); the last segment is the plateau d_star.
class PiecewiseLinearDP {
 public:
  PiecewiseLinearDP() = default;
  PiecewiseLinearDP(std::vector<double> breakpoints,
                    std::vector<Segment> segments, double d_star);

  // Constant curve D(P) = d_star.
  static PiecewiseLinearDP constant(double d_star);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Segment>& segments() const { return segments_; }
  double p_star() const { return breakpoints_.empty() ? 0.0 : breakpoints_.back(); }
  double d_star() const { return d_star_; }

  // Index of the segment active at P; at a breakpoint the right one.
  std::size_t segment_index(double p_level) const;
  double operator()(double p_level) const;
  double slope_at(double p_level) const;

  // Largest |left - right| mismatch at the breakpoints.
  double continuity_gap() const;
  bool slopes_nondecreasing(double tol = 0.0) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<Segment> segments_;
  double d_star_ = 0.0;
};

enum class CurveMethod { vertex, sweep, closed_form };

const char* to_string(CurveMethod method);

struct BreakpointEstimator {
  double p_level = 0.0;
  MatrixXd q;
};

struct CurveReport {
  PiecewiseLinearDP curve;
  CurveMethod method = CurveMethod::sweep;
  std::vector<VectorXd> vertices;       // vertex method only
  std::vector<ProjectedPoint> s2;       // projected lines
  std::vector<Index> hull;              // extreme points of conv(s2)
  std::vector<Index> active;            // s2 index per segment
  std::vector<BreakpointEstimator> estimators;  // P = 0 and each breakpoint
  Index solves = 0;
};

struct CurveOptions {
  VertexOptions vertex;
  SolveOptions solve;
  Form form = Form::ot;
  std::vector<double> grid{0.0, 1.0};
  Index max_solves = 4096;
  double slope_cluster_tol = 1e-7;
  double min_segment_length = 1e-10;
};

ProjectedPoint project_vertex(const VectorXd& vertex, const Problem& problem);

// Upper envelope of the lines over [0, 1]. The plateau segment is pinned to
// d_star exactly. active (optional) receives the line index per segment.
PiecewiseLinearDP upper_envelope(std::span<const ProjectedPoint> lines,
                                 double d_star,
                                 std::vector<Index>* active = nullptr,
                                 double min_segment_length = 1e-10);

CurveReport curve_by_vertices(const Problem& problem,
                              const CurveOptions& options = {});

CurveReport curve_by_sweep(const Problem& problem,
                           const CurveOptions& options = {});

// Pairwise crossings of non-parallel lines inside [0, 1], sorted, unique.
std::vector<double> breakpoint_candidates(std::span<const ProjectedPoint> s2);

// Extreme points of conv(s2) counter-clockwise; collinear points dropped.
std::vector<Index> hull_extremes(std::span<const ProjectedPoint> s2);

// Estimators at P = 0 and at every breakpoint, one LP each.
std::vector<BreakpointEstimator> breakpoint_estimators(
    const Problem& problem, const PiecewiseLinearDP& curve,
    const SolveOptions& options = {}, Form form = Form::ot);

// Convex combination of the stored estimators bracketing P.
MatrixXd estimator_on_curve(const Problem& problem, const CurveReport& report,
                            double p_level);

}  // namespace dp
