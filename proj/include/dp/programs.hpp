#pragma once

// Linear programs for D(P) at a single perception level P: the transport
// (OT) form valid for any ground metric, the sign-vector (TV) form valid for
// the Hamming metric, and the H-representation of the dual feasible set.

#include <Eigen/Dense>

#include "dp/core_model.hpp"
#include "dp/lp.hpp"

namespace dp {

enum class Form { ot, tv };

const char* to_string(Form form);

// Variables: q(x_hat, y) rowstacked, coupling(x, x_hat) rowstacked, slack.
// Constraints: column stochasticity (n_y), coupling row marginals (n_x),
// coupling column marginals minus Q P_Y (n_x), perception equality (1).
struct OtFormLayout {
  Index nx = 0;
  Index ny = 0;

  Index q_index(Index x_hat, Index y) const { return x_hat * ny + y; }
  Index pi_index(Index x, Index x_hat) const {
    return nx * ny + x * nx + x_hat;
  }
  Index slack_index() const { return nx * (ny + nx); }
  Index num_variables() const { return nx * (ny + nx) + 1; }

  Index stochastic_row(Index y) const { return y; }
  Index source_row(Index x) const { return ny + x; }
  Index output_row(Index x_hat) const { return ny + nx + x_hat; }
  Index perception_row() const { return ny + 2 * nx; }
  Index num_constraints() const { return ny + 2 * nx + 1; }
};

struct OtProgram {
  StandardLP lp;
  OtFormLayout layout;
};

OtProgram build_ot_form(const Problem& problem, double p_level);

// Sign vectors exclude all-plus and all-minus; one slack per sign vector.
struct TvFormLayout {
  static constexpr Index kMaxSourceSize = 12;

  Index nx = 0;
  Index ny = 0;
  Eigen::MatrixXi signs;  // (2^nx - 2) x nx, entries +-1

  Index num_signs() const { return signs.rows(); }
  Index q_index(Index x_hat, Index y) const { return x_hat * ny + y; }
  Index slack_index(Index s) const { return nx * ny + s; }
  Index num_structural() const { return nx * ny; }
  Index num_variables() const { return nx * ny + num_signs(); }

  Index stochastic_row(Index y) const { return y; }
  Index sign_row(Index s) const { return ny + s; }
  Index num_constraints() const { return ny + num_signs(); }
};

struct TvProgram {
  StandardLP lp;
  TvFormLayout layout;
};

// Throws InputError for a non-Hamming metric or n_x above the guard.
TvProgram build_tv_form(const Problem& problem, double p_level);

// Dual of the OT form in the chart nu(n_x - 1) = 0:
//   max  w.P_Y + r.P_X - l P
//   s.t. w_y <= rho'(x_hat, y) - nu_x_hat,  r_x <= H(x, x_hat) l + nu_x_hat,
//        l >= 0.
struct DualSolution {
  VectorXd w;
  VectorXd r;
  VectorXd nu;
  double l = 0.0;
  double objective = 0.0;
};

double dual_objective(const Problem& problem, const DualSolution& dual,
                      double p_level);

// Largest violation of the dual constraints (0 when feasible).
double dual_violation(const Problem& problem, const DualSolution& dual);

struct SolveReport {
  double p_level = 0.0;
  double value = 0.0;
  MatrixXd estimator;
  MatrixXd coupling;
  DualSolution dual;
  double gap = 0.0;
  Form form = Form::ot;
};

struct SolveOptions {
  SimplexOptions simplex;
  // For P >= 1 return D* and its greedy estimator without an LP.
  bool plateau_shortcut = true;
};

SolveReport solve_dp_at(const Problem& problem, double p_level,
                        Form form = Form::ot, const SolveOptions& options = {});

// Coordinates (w, r, nu_0..nu_{n_x-2}, l); dimension n_y + 2 n_x.
HPolyhedron dual_polyhedron(const Problem& problem);

// Splits a point of dual_polyhedron into its named blocks.
DualSolution unpack_dual_point(const Problem& problem, const VectorXd& point);

}  // namespace dp
