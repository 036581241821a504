#pragma once

// Dense two-phase primal simplex for  min c^T x  s.t.  A x = b, x >= 0,
// and vertex enumeration for small H-polyhedra {p : G p <= h}.

#include <Eigen/Dense>

#include <vector>

#include "dp/errors.hpp"

namespace dp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct StandardLP {
  MatrixXd a;
  VectorXd b;
  VectorXd c;

  Index rows() const { return a.rows(); }
  Index cols() const { return a.cols(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus status);

struct LPSolution {
  LpStatus status = LpStatus::infeasible;
  VectorXd x;                       // primal point (optimal only)
  double value = 0.0;               // c^T x
  std::vector<Index> basis;         // basic column per kept row
  VectorXd dual;                    // y with y^T A <= c^T, length m
  VectorXd ray;                     // unbounded: improving direction;
                                    // infeasible: Farkas vector y with
                                    // y^T A <= 0, y^T b > 0
  std::vector<Index> dropped_rows;  // linearly dependent equality rows
  Index iterations = 0;
};

enum class PivotRule { bland, dantzig };

struct SimplexOptions {
  PivotRule rule = PivotRule::bland;
  Index max_iterations = 0;  // 0 selects 100 * (m + n)
  double pivot_tol = 1e-11;
  double cost_tol = 1e-11;
  double feasibility_tol = 1e-9;
};

class LpError : public SolverError {
 public:
  enum class Kind { non_finite, dimension, iteration_limit, cycling };
  LpError(Kind kind, const std::string& what)
      : SolverError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

LPSolution solve(const StandardLP& lp, const SimplexOptions& options = {});

struct DualCheck {
  double gap = 0.0;            // |c^T x - y^T b|
  double max_violation = 0.0;  // max_j (y^T A - c^T)_j, clipped at 0
  bool feasible = true;        // max_violation <= tol
};

// Throws SolverError when the solution is not optimal.
DualCheck dual_check(const StandardLP& lp, const LPSolution& solution,
                     double tol = 1e-9);

struct HPolyhedron {
  MatrixXd g;
  VectorXd h;

  Index dimension() const { return g.cols(); }
  Index rows() const { return g.rows(); }
};

struct VertexOptions {
  double budget = 1e7;  // max number of d-subsets C(k, d)
  Index max_dimension = 16;
  double feasibility_tol = 1e-9;
  double dedup_tol = 1e-7;
  double pivot_tol = 1e-11;
};

double binomial(Index n, Index k);

bool vertex_budget_admits(const HPolyhedron& poly,
                          const VertexOptions& options = {});

// All extreme points of a pointed polyhedron, sorted lexicographically.
// Throws BudgetExceeded when C(k, d) exceeds the budget.
std::vector<VectorXd> enumerate_vertices(const HPolyhedron& poly,
                                         const VertexOptions& options = {});

}  // namespace dp
