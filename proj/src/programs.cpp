#include "dp/programs.hpp"

#include <cmath>
#include <string>

namespace dp {

const char* to_string(Form form) {
  return form == Form::ot ? "ot" : "tv";
}

namespace {

void check_level(double p_level) {
  if (!std::isfinite(p_level) || p_level < 0.0) {
    throw InputError("perception level must be finite and nonnegative, got " +
                     std::to_string(p_level));
  }
}

// Fixes the free direction (w - t, r + t, nu + t) so that nu(n_x - 1) = 0.
void normalize_chart(DualSolution& dual) {
  const double t = dual.nu(dual.nu.size() - 1);
  dual.nu.array() -= t;
  dual.w.array() += t;
  dual.r.array() -= t;
  dual.nu(dual.nu.size() - 1) = 0.0;
}

MatrixXd clean_estimator(MatrixXd q) {
  q = q.cwiseMax(0.0);
  for (Index y = 0; y < q.cols(); ++y) {
    const double s = q.col(y).sum();
    if (s > 0.0) q.col(y) /= s;
  }
  return q;
}

}  // namespace

OtProgram build_ot_form(const Problem& problem, double p_level) {
  check_level(p_level);
  OtProgram prog;
  OtFormLayout& lay = prog.layout;
  lay.nx = problem.nx();
  lay.ny = problem.ny();
  const VectorXd& p_y = problem.p_y();
  const MatrixXd r = rho(problem);
  const MatrixXd& h = problem.metric();

  StandardLP& lp = prog.lp;
  lp.a = MatrixXd::Zero(lay.num_constraints(), lay.num_variables());
  lp.b = VectorXd::Zero(lay.num_constraints());
  lp.c = VectorXd::Zero(lay.num_variables());

  for (Index xh = 0; xh < lay.nx; ++xh) {
    for (Index y = 0; y < lay.ny; ++y) {
      const Index v = lay.q_index(xh, y);
      lp.a(lay.stochastic_row(y), v) = p_y(y);
      lp.a(lay.output_row(xh), v) = p_y(y);
      lp.c(v) = r(xh, y);
    }
  }
  for (Index x = 0; x < lay.nx; ++x) {
    for (Index xh = 0; xh < lay.nx; ++xh) {
      const Index v = lay.pi_index(x, xh);
      lp.a(lay.source_row(x), v) = 1.0;
      lp.a(lay.output_row(xh), v) = -1.0;
      lp.a(lay.perception_row(), v) = h(x, xh);
    }
  }
  lp.a(lay.perception_row(), lay.slack_index()) = 1.0;

  lp.b.head(lay.ny) = p_y;
  lp.b.segment(lay.ny, lay.nx) = problem.p_x();
  lp.b(lay.perception_row()) = p_level;
  return prog;
}

TvProgram build_tv_form(const Problem& problem, double p_level) {
  check_level(p_level);
  if (!problem.metric_is_hamming()) {
    throw InputError("tv form requires the Hamming metric");
  }
  if (problem.nx() > TvFormLayout::kMaxSourceSize) {
    throw InputError("tv form supports at most " +
                     std::to_string(TvFormLayout::kMaxSourceSize) +
                     " source symbols");
  }
  TvProgram prog;
  TvFormLayout& lay = prog.layout;
  lay.nx = problem.nx();
  lay.ny = problem.ny();
  const Index full = Index{1} << lay.nx;
  lay.signs.resize(std::max<Index>(full - 2, 0), lay.nx);
  for (Index mask = 1, s = 0; mask + 1 < full; ++mask, ++s) {
    for (Index x = 0; x < lay.nx; ++x) {
      lay.signs(s, x) = (mask >> x) & 1 ? 1 : -1;
    }
  }

  const VectorXd& p_y = problem.p_y();
  const VectorXd& p_x = problem.p_x();
  const MatrixXd r = rho(problem);

  StandardLP& lp = prog.lp;
  lp.a = MatrixXd::Zero(lay.num_constraints(), lay.num_variables());
  lp.b = VectorXd::Zero(lay.num_constraints());
  lp.c = VectorXd::Zero(lay.num_variables());
  for (Index xh = 0; xh < lay.nx; ++xh) {
    for (Index y = 0; y < lay.ny; ++y) {
      lp.a(lay.stochastic_row(y), lay.q_index(xh, y)) = p_y(y);
      lp.c(lay.q_index(xh, y)) = r(xh, y);
    }
  }
  lp.b.head(lay.ny) = p_y;
  // sum_x S(x) (P_X(x) - sum_y P_Y(y) q(x|y)) <= 2P, carried with a slack.
  for (Index s = 0; s < lay.num_signs(); ++s) {
    const Index row = lay.sign_row(s);
    double s_dot_px = 0.0;
    for (Index x = 0; x < lay.nx; ++x) {
      const double sign = lay.signs(s, x);
      s_dot_px += sign * p_x(x);
      for (Index y = 0; y < lay.ny; ++y) {
        lp.a(row, lay.q_index(x, y)) = -sign * p_y(y);
      }
    }
    lp.a(row, lay.slack_index(s)) = 1.0;
    lp.b(row) = 2.0 * p_level - s_dot_px;
  }
  return prog;
}

double dual_objective(const Problem& problem, const DualSolution& dual,
                      double p_level) {
  return dual.w.dot(problem.p_y()) + dual.r.dot(problem.p_x()) -
         dual.l * p_level;
}

double dual_violation(const Problem& problem, const DualSolution& dual) {
  const MatrixXd rp = rho_prime(problem);
  const MatrixXd& h = problem.metric();
  double worst = std::max(0.0, -dual.l);
  for (Index xh = 0; xh < problem.nx(); ++xh) {
    for (Index y = 0; y < problem.ny(); ++y) {
      worst = std::max(worst, dual.w(y) + dual.nu(xh) - rp(xh, y));
    }
    for (Index x = 0; x < problem.nx(); ++x) {
      worst = std::max(worst, dual.r(x) - h(x, xh) * dual.l - dual.nu(xh));
    }
  }
  return worst;
}

SolveReport solve_dp_at(const Problem& problem, double p_level, Form form,
                        const SolveOptions& options) {
  check_level(p_level);
  const Index nx = problem.nx();
  const Index ny = problem.ny();
  SolveReport rep;
  rep.p_level = p_level;
  rep.form = form;
  rep.dual.w = VectorXd::Zero(ny);
  rep.dual.r = VectorXd::Zero(nx);
  rep.dual.nu = VectorXd::Zero(nx);

  if (options.plateau_shortcut && p_level >= 1.0) {
    if (form == Form::tv) build_tv_form(problem, p_level);  // form checks
    DistortionFloor floor = d_star(problem);
    rep.value = floor.value;
    rep.estimator = std::move(floor.estimator);
    rep.dual.w = rho_prime(problem).colwise().minCoeff().transpose();
  } else if (form == Form::ot) {
    const OtProgram prog = build_ot_form(problem, p_level);
    const LPSolution sol = solve(prog.lp, options.simplex);
    if (sol.status != LpStatus::optimal) {
      throw SolverError(std::string("ot form LP is ") + to_string(sol.status));
    }
    const OtFormLayout& lay = prog.layout;
    rep.value = sol.value;
    rep.estimator.resize(nx, ny);
    for (Index xh = 0; xh < nx; ++xh) {
      for (Index y = 0; y < ny; ++y) {
        rep.estimator(xh, y) = sol.x(lay.q_index(xh, y));
      }
    }
    rep.coupling.resize(nx, nx);
    for (Index x = 0; x < nx; ++x) {
      for (Index xh = 0; xh < nx; ++xh) {
        rep.coupling(x, xh) = std::max(0.0, sol.x(lay.pi_index(x, xh)));
      }
    }
    rep.dual.w = sol.dual.head(ny);
    rep.dual.r = sol.dual.segment(lay.source_row(0), nx);
    rep.dual.nu = sol.dual.segment(lay.output_row(0), nx);
    rep.dual.l = -sol.dual(lay.perception_row());
  } else {
    const TvProgram prog = build_tv_form(problem, p_level);
    const LPSolution sol = solve(prog.lp, options.simplex);
    if (sol.status != LpStatus::optimal) {
      throw SolverError(std::string("tv form LP is ") + to_string(sol.status));
    }
    const TvFormLayout& lay = prog.layout;
    rep.value = sol.value;
    rep.estimator.resize(nx, ny);
    for (Index xh = 0; xh < nx; ++xh) {
      for (Index y = 0; y < ny; ++y) {
        rep.estimator(xh, y) = sol.x(lay.q_index(xh, y));
      }
    }
    // Sign multipliers m_s <= 0 map to nu(x) = -sum_s m_s S_s(x), r = nu,
    // l = -2 sum_s m_s.
    rep.dual.w = sol.dual.head(ny);
    for (Index s = 0; s < lay.num_signs(); ++s) {
      const double m = sol.dual(lay.sign_row(s));
      rep.dual.l -= 2.0 * m;
      for (Index x = 0; x < nx; ++x) rep.dual.nu(x) -= m * lay.signs(s, x);
    }
    rep.dual.r = rep.dual.nu;
  }

  rep.estimator = clean_estimator(std::move(rep.estimator));
  if (rep.coupling.size() == 0) {
    rep.coupling = wasserstein1(problem.p_x(),
                                output_distribution(rep.estimator, problem.p_y()),
                                problem.metric())
                       .coupling;
  }
  normalize_chart(rep.dual);
  rep.dual.objective = dual_objective(problem, rep.dual, p_level);
  rep.gap = std::abs(rep.value - rep.dual.objective);
  return rep;
}

HPolyhedron dual_polyhedron(const Problem& problem) {
  const Index nx = problem.nx();
  const Index ny = problem.ny();
  const Index dim = ny + 2 * nx;
  const Index w0 = 0, r0 = ny, nu0 = ny + nx, l_col = dim - 1;
  const MatrixXd rp = rho_prime(problem);
  const MatrixXd& h = problem.metric();

  HPolyhedron poly;
  poly.g = MatrixXd::Zero(nx * ny + nx * nx + 1, dim);
  poly.h = VectorXd::Zero(poly.g.rows());
  Index row = 0;
  for (Index xh = 0; xh < nx; ++xh) {
    for (Index y = 0; y < ny; ++y, ++row) {
      poly.g(row, w0 + y) = 1.0;
      if (xh < nx - 1) poly.g(row, nu0 + xh) = 1.0;
      poly.h(row) = rp(xh, y);
    }
  }
  for (Index x = 0; x < nx; ++x) {
    for (Index xh = 0; xh < nx; ++xh, ++row) {
      poly.g(row, r0 + x) = 1.0;
      if (xh < nx - 1) poly.g(row, nu0 + xh) -= 1.0;
      poly.g(row, l_col) = -h(x, xh);
    }
  }
  poly.g(row, l_col) = -1.0;
  return poly;
}

DualSolution unpack_dual_point(const Problem& problem, const VectorXd& point) {
  const Index nx = problem.nx();
  const Index ny = problem.ny();
  if (point.size() != ny + 2 * nx) {
    throw InputError("unpack_dual_point: expected dimension " +
                     std::to_string(ny + 2 * nx));
  }
  DualSolution dual;
  dual.w = point.head(ny);
  dual.r = point.segment(ny, nx);
  dual.nu = VectorXd::Zero(nx);
  dual.nu.head(nx - 1) = point.segment(ny + nx, nx - 1);
  dual.l = point(point.size() - 1);
  return dual;
}

}  // namespace dp
