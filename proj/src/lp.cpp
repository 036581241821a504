#include "dp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace dp {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

// Dense tableau. Rows 0..m-1 are constraints, row m holds reduced costs
// and -z in the right-hand-side column. Columns 0..n-1 are structural,
// n..n+m-1 artificial, n+m the right-hand side.
class Tableau {
 public:
  Tableau(const StandardLP& lp, const VectorXd& sign, const SimplexOptions& opt,
          Index max_iterations)
      : m_(lp.rows()),
        n_(lp.cols()),
        rhs_(lp.cols() + lp.rows()),
        opt_(opt),
        max_iterations_(max_iterations),
        t_(MatrixXd::Zero(lp.rows() + 1, lp.cols() + lp.rows() + 1)),
        basis_(lp.rows()),
        active_(lp.rows(), true) {
    t_.topLeftCorner(m_, n_) = sign.asDiagonal() * lp.a;
    t_.block(0, n_, m_, m_).setIdentity();
    t_.col(rhs_).head(m_) = sign.cwiseProduct(lp.b);
    for (Index i = 0; i < m_; ++i) basis_[i] = n_ + i;
  }

  enum class Outcome { optimal, unbounded };

  void set_phase1_costs() {
    t_.row(m_).setZero();
    t_.row(m_).head(n_) = -t_.topLeftCorner(m_, n_).colwise().sum();
    t_(m_, rhs_) = -t_.col(rhs_).head(m_).sum();
  }

  void set_phase2_costs(const VectorXd& c) {
    t_.row(m_).setZero();
    t_.row(m_).head(n_) = c.transpose();
    for (Index i = 0; i < m_; ++i) {
      if (active_[i] && basis_[i] < n_) {
        t_.row(m_) -= c(basis_[i]) * t_.row(i);
      }
    }
  }

  double objective() const { return -t_(m_, rhs_); }

  // Runs primal simplex over structural columns. On unbounded, entering_
  // holds the column with no blocking row.
  Outcome run() {
    std::set<std::vector<Index>> seen;
    while (true) {
      const Index j = choose_entering();
      if (j < 0) return Outcome::optimal;
      const Index r = choose_leaving(j);
      if (r < 0) {
        entering_ = j;
        return Outcome::unbounded;
      }
      if (iterations_ >= max_iterations_) {
        throw LpError(LpError::Kind::iteration_limit,
                      "simplex: iteration budget of " +
                          std::to_string(max_iterations_) + " exceeded");
      }
      const bool degenerate = t_(r, rhs_) <= opt_.feasibility_tol * 1e-3;
      pivot(r, j);
      ++iterations_;
      if (opt_.rule == PivotRule::dantzig) {
        if (!degenerate) {
          seen.clear();
        } else {
          std::vector<Index> key = basis_;
          std::sort(key.begin(), key.end());
          if (!seen.insert(std::move(key)).second) {
            throw LpError(LpError::Kind::cycling,
                          "simplex: basis revisited under Dantzig pivoting");
          }
        }
      }
    }
  }

  // Pivots remaining artificials out of the basis; rows where that is
  // impossible are linearly dependent and get deactivated.
  std::vector<Index> drive_out_artificials() {
    std::vector<Index> dropped;
    for (Index i = 0; i < m_; ++i) {
      if (!active_[i] || basis_[i] < n_) continue;
      Index best = -1;
      double best_abs = opt_.pivot_tol;
      for (Index j = 0; j < n_; ++j) {
        const double a = std::abs(t_(i, j));
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best >= 0) {
        pivot(i, best);
      } else {
        active_[i] = false;
        dropped.push_back(i);
      }
    }
    return dropped;
  }

  VectorXd primal() const {
    VectorXd x = VectorXd::Zero(n_);
    for (Index i = 0; i < m_; ++i) {
      if (active_[i] && basis_[i] < n_) x(basis_[i]) = t_(i, rhs_);
    }
    return x;
  }

  // Multipliers read from the artificial columns, for the row-signed system.
  VectorXd multipliers(double artificial_cost) const {
    VectorXd y(m_);
    for (Index i = 0; i < m_; ++i) y(i) = artificial_cost - t_(m_, n_ + i);
    return y;
  }

  VectorXd ray() const {
    VectorXd d = VectorXd::Zero(n_);
    d(entering_) = 1.0;
    for (Index i = 0; i < m_; ++i) {
      if (active_[i] && basis_[i] < n_) d(basis_[i]) -= t_(i, entering_);
    }
    return d;
  }

  const std::vector<Index>& basis() const { return basis_; }
  const std::vector<bool>& active() const { return active_; }
  Index iterations() const { return iterations_; }

 private:
  Index choose_entering() const {
    Index best = -1;
    double best_cost = -opt_.cost_tol;
    for (Index j = 0; j < n_; ++j) {
      const double rc = t_(m_, j);
      if (opt_.rule == PivotRule::bland) {
        if (rc < -opt_.cost_tol) return j;
      } else if (rc < best_cost) {
        best_cost = rc;
        best = j;
      }
    }
    return best;
  }

  Index choose_leaving(Index j) const {
    Index best = -1;
    double best_ratio = 0.0;
    for (Index i = 0; i < m_; ++i) {
      if (!active_[i]) continue;
      const double a = t_(i, j);
      if (a <= opt_.pivot_tol) continue;
      const double ratio = t_(i, rhs_) / a;
      if (best < 0 || ratio < best_ratio - 1e-12 * (1.0 + std::abs(ratio))) {
        best = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + 1e-12 * (1.0 + std::abs(ratio)) &&
                 basis_[i] < basis_[best]) {
        best = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    return best;
  }

  void pivot(Index r, Index j) {
    const double pivot_value = t_(r, j);
    t_.row(r) /= pivot_value;
    VectorXd factors = t_.col(j);
    factors(r) = 0.0;
    const Eigen::RowVectorXd pivot_row = t_.row(r);
    t_.noalias() -= factors * pivot_row;
    t_.col(j).setZero();
    t_(r, j) = 1.0;
    for (Index i = 0; i < m_; ++i) {
      if (t_(i, rhs_) < 0.0 && t_(i, rhs_) > -opt_.feasibility_tol) {
        t_(i, rhs_) = 0.0;
      }
    }
    basis_[r] = j;
  }

  Index m_;
  Index n_;
  Index rhs_;
  SimplexOptions opt_;
  Index max_iterations_;
  MatrixXd t_;
  std::vector<Index> basis_;
  std::vector<bool> active_;
  Index iterations_ = 0;
  Index entering_ = -1;
};

}  // namespace

LPSolution solve(const StandardLP& lp, const SimplexOptions& options) {
  const Index m = lp.rows();
  const Index n = lp.cols();
  if (lp.b.size() != m || lp.c.size() != n) {
    throw LpError(LpError::Kind::dimension,
                  "simplex: b must have one entry per row of A and c one "
                  "entry per column");
  }
  if (!lp.a.allFinite() || !lp.b.allFinite() || !lp.c.allFinite()) {
    throw LpError(LpError::Kind::non_finite, "simplex: non-finite input");
  }
  const Index max_iterations = options.max_iterations > 0
                                   ? options.max_iterations
                                   : 100 * (m + n);

  LPSolution sol;
  if (m == 0) {
    sol.x = VectorXd::Zero(n);
    sol.dual = VectorXd();
    for (Index j = 0; j < n; ++j) {
      if (lp.c(j) < -options.cost_tol) {
        sol.status = LpStatus::unbounded;
        sol.ray = VectorXd::Unit(n, j);
        return sol;
      }
    }
    sol.status = LpStatus::optimal;
    return sol;
  }

  VectorXd sign(m);
  for (Index i = 0; i < m; ++i) sign(i) = lp.b(i) < 0.0 ? -1.0 : 1.0;

  Tableau tab(lp, sign, options, max_iterations);
  tab.set_phase1_costs();
  tab.run();
  const double infeasibility = tab.objective();
  if (infeasibility >
      options.feasibility_tol * (1.0 + lp.b.lpNorm<1>())) {
    sol.status = LpStatus::infeasible;
    sol.ray = sign.cwiseProduct(tab.multipliers(1.0));
    sol.iterations = tab.iterations();
    return sol;
  }

  sol.dropped_rows = tab.drive_out_artificials();
  tab.set_phase2_costs(lp.c);
  const auto outcome = tab.run();
  sol.iterations = tab.iterations();
  if (outcome == Tableau::Outcome::unbounded) {
    sol.status = LpStatus::unbounded;
    sol.x = tab.primal();
    sol.ray = tab.ray();
    return sol;
  }

  sol.status = LpStatus::optimal;
  sol.x = tab.primal();
  sol.dual = sign.cwiseProduct(tab.multipliers(0.0));

  std::vector<Index> rows;
  for (Index i = 0; i < m; ++i) {
    if (tab.active()[i]) {
      rows.push_back(i);
      sol.basis.push_back(tab.basis()[i]);
    }
  }

  // Recompute x_B and y from the final basis to shed tableau drift.
  if (!rows.empty()) {
    const MatrixXd ab = lp.a(rows, sol.basis);
    Eigen::FullPivLU<MatrixXd> lu(ab);
    if (lu.isInvertible()) {
      const VectorXd xb = lu.solve(VectorXd(lp.b(rows)));
      const VectorXd yr =
          ab.transpose().fullPivLu().solve(VectorXd(lp.c(sol.basis)));
      if (xb.allFinite() && yr.allFinite() &&
          xb.minCoeff() >= -options.feasibility_tol) {
        sol.x.setZero();
        for (std::size_t k = 0; k < sol.basis.size(); ++k) {
          sol.x(sol.basis[k]) = std::max(0.0, xb(static_cast<Index>(k)));
        }
        sol.dual.setZero();
        for (std::size_t k = 0; k < rows.size(); ++k) {
          sol.dual(rows[k]) = yr(static_cast<Index>(k));
        }
      }
    }
  }
  sol.value = lp.c.dot(sol.x);
  return sol;
}

DualCheck dual_check(const StandardLP& lp, const LPSolution& solution,
                     double tol) {
  if (solution.status != LpStatus::optimal) {
    throw SolverError(std::string("dual_check: solution status is ") +
                      to_string(solution.status));
  }
  DualCheck out;
  out.gap = std::abs(lp.c.dot(solution.x) - solution.dual.dot(lp.b));
  const VectorXd slack = lp.a.transpose() * solution.dual - lp.c;
  out.max_violation = std::max(0.0, slack.size() ? slack.maxCoeff() : 0.0);
  out.feasible = out.max_violation <= tol;
  return out;
}

}  // namespace dp
