#pragma once

// Problem data for the finite-alphabet distortion-perception tradeoff:
// a joint pmf of (X, Y), a distortion matrix d(x, x_hat) and a ground metric
// H on the source alphabet that induces the Wasserstein-1 perception index.
//
// Matrix conventions (all Eigen, column-major storage, row/column meaning):
//   p_xy(x, y)         joint probability
//   d(x, x_hat)        distortion of reconstructing x as x_hat
//   h(x, x_hat)        ground metric, values in [0, 1]
//   q(x_hat, y)        estimator q(x_hat | y); columns sum to one
//   rho(x_hat, y)      sum_x d(x, x_hat) p(x, y)

#include <Eigen/Dense>

#include <cmath>

#include "dp/errors.hpp"

namespace dp {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Tolerances {
  double validation = 1e-12;  // pmf sums and metric axioms
  double stochastic = 1e-10;  // estimator columns, coupling marginals
  double equality = 1e-9;     // value comparisons
};

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

template <typename Derived>
bool is_distribution(const Eigen::MatrixBase<Derived>& p, double tol) {
  return p.size() > 0 && p.allFinite() && (p.array() >= 0.0).all() &&
         std::abs(p.sum() - 1.0) <= tol;
}

template <typename Derived>
bool is_column_stochastic(const Eigen::MatrixBase<Derived>& q, double tol) {
  if (!q.allFinite() || (q.array() < -tol).any()) return false;
  for (Index j = 0; j < q.cols(); ++j) {
    if (std::abs(q.col(j).sum() - 1.0) > tol) return false;
  }
  return true;
}

// rho = D^T P_XY; entry (x_hat, y) is P_Y(y) E[d(X, x_hat) | Y = y].
template <typename JointT, typename DistT>
MatrixXd rho(const Eigen::MatrixBase<JointT>& p_xy,
             const Eigen::MatrixBase<DistT>& d) {
  return d.transpose() * p_xy;
}

// Q P_Y, the reconstruction marginal.
template <typename QT, typename PT>
VectorXd output_distribution(const Eigen::MatrixBase<QT>& q,
                             const Eigen::MatrixBase<PT>& p_y) {
  if (q.cols() != p_y.size()) {
    throw InputError("output_distribution: estimator has " +
                     std::to_string(q.cols()) + " columns but P_Y has " +
                     std::to_string(p_y.size()) + " entries");
  }
  return q * p_y;
}

template <typename PT, typename QT>
double tv_distance(const Eigen::MatrixBase<PT>& p,
                   const Eigen::MatrixBase<QT>& q) {
  if (p.size() != q.size()) {
    throw InputError("tv_distance: length mismatch (" +
                     std::to_string(p.size()) + " vs " +
                     std::to_string(q.size()) + ")");
  }
  return 0.5 * (p - q).cwiseAbs().sum();
}

MatrixXd hamming(Index n);

// Checks zero diagonal, symmetry, triangle inequality and range [0, 1].
// Throws InputError naming the first violated axiom.
void check_metric(const MatrixXd& h, double tol);

// Validated problem handle. Immutable after construction.
class Problem {
 public:
  Problem(MatrixXd p_xy, MatrixXd d, MatrixXd h, Tolerances tol = {});

  Index nx() const { return p_xy_.rows(); }
  Index ny() const { return p_xy_.cols(); }
  const MatrixXd& joint() const { return p_xy_; }
  const MatrixXd& distortion() const { return d_; }
  const MatrixXd& metric() const { return h_; }
  const VectorXd& p_x() const { return p_x_; }
  const VectorXd& p_y() const { return p_y_; }
  const Tolerances& tolerances() const { return tol_; }

  bool metric_is_hamming() const;

 private:
  MatrixXd p_xy_;
  MatrixXd d_;
  MatrixXd h_;
  VectorXd p_x_;
  VectorXd p_y_;
  Tolerances tol_;
};

Problem validate_problem(MatrixXd p_xy, MatrixXd d, MatrixXd h,
                         Tolerances tol = {});

MatrixXd rho(const Problem& problem);
// rho'(x_hat, y) = E[d(X, x_hat) | Y = y].
MatrixXd rho_prime(const Problem& problem);

// tr(P_XY^T D Q).
double expected_distortion(const Problem& problem, const MatrixXd& q);

// Q = P_{X|Y}; its output distribution is exactly P_X.
MatrixXd posterior_sampling(const Problem& problem);

struct DistortionFloor {
  double value;        // D* = sum_y min_x_hat rho(x_hat, y)
  MatrixXd estimator;  // deterministic argmin map, lowest index on ties
};

DistortionFloor d_star(const Problem& problem);

struct Transport {
  double value;
  MatrixXd coupling;  // coupling(x, x_hat), marginals p and q
};

// min over couplings of coupling . h, solved as a transportation LP.
Transport wasserstein1(const VectorXd& p, const VectorXd& q,
                       const MatrixXd& h);

}  // namespace dp
