#include "dp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "dp/binary.hpp"

namespace dp {

namespace {

// All vectors of n nonnegative integers summing to total.
void compositions(Index n, Index total, std::vector<Index>& cur,
                  std::vector<std::vector<Index>>& out) {
  if (static_cast<Index>(cur.size()) == n - 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (Index k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(n, total - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

GridOracle::GridOracle(const Problem& problem, Index steps, double max_points)
    : steps_(steps) {
  if (steps < 1) throw InputError("grid_oracle: steps must be >= 1");
  const Index nx = problem.nx();
  const Index ny = problem.ny();
  const double dof = static_cast<double>(ny * (nx - 1));
  if (std::pow(static_cast<double>(steps + 1), dof) > max_points) {
    throw BudgetExceeded("grid_oracle: (steps + 1)^" +
                         std::to_string(ny * (nx - 1)) +
                         " grid points exceed the budget");
  }
  const MatrixXd& d = problem.distortion();
  band_ = static_cast<double>(ny) * (d.maxCoeff() - d.minCoeff()) /
          static_cast<double>(steps);

  std::vector<std::vector<Index>> columns;
  std::vector<Index> scratch;
  compositions(nx, steps, scratch, columns);
  const Index per_column = static_cast<Index>(columns.size());

  const MatrixXd r = rho(problem);
  std::vector<Index> odometer(static_cast<std::size_t>(ny), 0);
  MatrixXd q(nx, ny);
  const double inv = 1.0 / static_cast<double>(steps);
  while (true) {
    for (Index y = 0; y < ny; ++y) {
      const auto& col = columns[static_cast<std::size_t>(odometer[y])];
      for (Index x = 0; x < nx; ++x) q(x, y) = static_cast<double>(col[x]) * inv;
    }
    const VectorXd out = output_distribution(q, problem.p_y());
    table_.push_back({wasserstein1(problem.p_x(), out, problem.metric()).value,
                      r.cwiseProduct(q).sum()});
    Index y = 0;
    while (y < ny && ++odometer[y] == per_column) odometer[y++] = 0;
    if (y == ny) break;
  }
  std::sort(table_.begin(), table_.end(),
            [](const Entry& a, const Entry& b) { return a.w1 < b.w1; });
  prefix_min_.resize(table_.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < table_.size(); ++i) {
    best = std::min(best, table_[i].distortion);
    prefix_min_[i] = best;
  }
}

double GridOracle::value(double p_level) const {
  const auto it = std::upper_bound(
      table_.begin(), table_.end(), p_level + 1e-12,
      [](double p, const Entry& e) { return p < e.w1; });
  if (it == table_.begin()) return std::numeric_limits<double>::infinity();
  return prefix_min_[static_cast<std::size_t>(it - table_.begin()) - 1];
}

double grid_oracle(const Problem& problem, double p_level, Index steps) {
  return GridOracle(problem, steps).value(p_level);
}

std::vector<double> uniform_levels(Index points) {
  if (points < 2) throw InputError("need at least two perception levels");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (Index i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] =
        static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

PiecewiseLinearDP corrupt(const PiecewiseLinearDP& curve, double fault) {
  std::vector<double> breaks = curve.breakpoints();
  std::vector<Segment> segs = curve.segments();
  if (breaks.empty()) {
    breaks.push_back(1.0);
    segs.insert(segs.begin(), Segment{curve.d_star(), 0.0});
  }
  segs.front().slope += fault;
  return PiecewiseLinearDP(std::move(breaks), std::move(segs), curve.d_star());
}

void check_shape(const char* name, const PiecewiseLinearDP& curve, double tol,
                 std::vector<std::string>& failures) {
  if (!curve.slopes_nondecreasing(1e-12)) {
    failures.push_back(std::string(name) +
                       ": slopes not nonpositive and nondecreasing");
  }
  const auto& b = curve.breakpoints();
  const auto& s = curve.segments();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double jump = std::abs(s[i].at(b[i]) - s[i + 1].at(b[i]));
    if (jump > 1e-9) {
      failures.push_back(std::string(name) + ": discontinuous at P=" +
                         fmt(b[i]) + " (jump " + fmt(jump) + ")");
    }
  }
  if (curve.p_star() > 1.0 + tol) {
    failures.push_back(std::string(name) + ": p_star exceeds 1");
  }
}

}  // namespace

VerifyReport cross_verify(const Problem& problem, std::span<const double> p_grid,
                          const VerifyOptions& options) {
  VerifyReport rep;
  rep.tolerance = options.tolerance;
  rep.description = (options.name.empty() ? std::string("instance")
                                          : options.name) +
                    " (" + std::to_string(problem.nx()) + "x" +
                    std::to_string(problem.ny()) + ")";

  std::optional<PiecewiseLinearDP> closed, vertex, sweep;
  std::optional<GridOracle> grid;
  if (problem.nx() == 2) {
    closed = closed_form_curve(problem);
    rep.methods.push_back("closed-form");
  }
  if (vertex_budget_admits(dual_polyhedron(problem), options.curve.vertex)) {
    try {
      vertex = curve_by_vertices(problem, options.curve).curve;
      rep.methods.push_back("vertex");
    } catch (const std::exception& e) {
      rep.failures.push_back(std::string("vertex: ") + e.what());
    }
  }
  try {
    sweep = curve_by_sweep(problem, options.curve).curve;
    if (options.slope_fault != 0.0) sweep = corrupt(*sweep, options.slope_fault);
    rep.methods.push_back("sweep");
  } catch (const std::exception& e) {
    rep.failures.push_back(std::string("sweep: ") + e.what());
  }
  rep.methods.push_back("lp");
  if (problem.nx() * problem.ny() <= 4 && options.grid_steps > 0) {
    grid.emplace(problem, options.grid_steps);
    rep.grid_band = grid->lipschitz_band();
    rep.methods.push_back("grid");
  }

  if (closed) check_shape("closed-form", *closed, rep.tolerance, rep.failures);
  if (vertex) check_shape("vertex", *vertex, rep.tolerance, rep.failures);
  if (sweep) check_shape("sweep", *sweep, rep.tolerance, rep.failures);

  for (double p : p_grid) {
    VerifyRow row;
    row.p_level = p;
    if (closed) row.closed_form = (*closed)(p);
    if (vertex) row.vertex = (*vertex)(p);
    if (sweep) row.sweep = (*sweep)(p);
    try {
      row.lp = solve_dp_at(problem, p, Form::ot, options.curve.solve).value;
    } catch (const std::exception& e) {
      rep.failures.push_back("lp at P=" + fmt(p) + ": " + e.what());
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : {row.closed_form, row.vertex, row.sweep, row.lp}) {
      if (!v) continue;
      lo = std::min(lo, *v);
      hi = std::max(hi, *v);
    }
    row.discrepancy = hi >= lo ? hi - lo : 0.0;
    rep.max_discrepancy = std::max(rep.max_discrepancy, row.discrepancy);
    if (row.discrepancy > rep.tolerance) {
      rep.failures.push_back("P=" + fmt(p) + ": exact methods disagree by " +
                             fmt(row.discrepancy));
    }
    if (grid) {
      row.grid = grid->value(p);
      if (std::isfinite(*row.grid) && row.lp) {
        if (*row.grid < *row.lp - 1e-9) {
          rep.failures.push_back("P=" + fmt(p) + ": grid value " +
                                 fmt(*row.grid) + " below exact " +
                                 fmt(*row.lp));
        } else if (p * static_cast<double>(grid->steps()) >= 2.0 &&
                   *row.grid > *row.lp + rep.grid_band + 1e-12) {
          rep.failures.push_back("P=" + fmt(p) + ": grid value " +
                                 fmt(*row.grid) + " outside Lipschitz band");
        }
      }
    }
    rep.rows.push_back(row);
  }
  rep.pass = rep.failures.empty();
  return rep;
}

std::string render(const VerifyReport& report) {
  std::ostringstream os;
  os << "verify " << report.description << "\n";
  os << "methods:";
  for (const auto& m : report.methods) os << ' ' << m;
  os << "\ntolerance " << fmt(report.tolerance);
  if (report.grid_band > 0.0) os << ", grid band " << fmt(report.grid_band);
  os << "\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? fmt(*v) : std::string("-");
  };
  os << "P,closed_form,vertex,sweep,lp,grid,discrepancy\n";
  for (const auto& r : report.rows) {
    os << fmt(r.p_level) << ',' << cell(r.closed_form) << ',' << cell(r.vertex)
       << ',' << cell(r.sweep) << ',' << cell(r.lp) << ',' << cell(r.grid)
       << ',' << fmt(r.discrepancy) << "\n";
  }
  os << "max discrepancy " << fmt(report.max_discrepancy) << "\n";
  for (const auto& f : report.failures) os << "FAIL " << f << "\n";
  os << (report.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace dp
