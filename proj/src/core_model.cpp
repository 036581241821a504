#include "dp/core_model.hpp"

#include <string>

#include "dp/lp.hpp"

namespace dp {

namespace {

std::string entry(Index i, Index j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

MatrixXd hamming(Index n) {
  MatrixXd h = MatrixXd::Ones(n, n);
  h.diagonal().setZero();
  return h;
}

void check_metric(const MatrixXd& h, double tol) {
  if (h.rows() != h.cols()) throw InputError("metric: matrix is not square");
  if (!h.allFinite()) throw InputError("metric: non-finite entry");
  const Index n = h.rows();
  for (Index i = 0; i < n; ++i) {
    if (std::abs(h(i, i)) > tol) {
      throw InputError("metric: nonzero diagonal at " + entry(i, i));
    }
    for (Index j = 0; j < n; ++j) {
      if (h(i, j) < -tol || h(i, j) > 1.0 + tol) {
        throw InputError("metric: entry " + entry(i, j) +
                         " outside [0, 1]; rescale the metric and the "
                         "perception level jointly");
      }
      if (std::abs(h(i, j) - h(j, i)) > tol) {
        throw InputError("metric: asymmetric at " + entry(i, j));
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      for (Index k = 0; k < n; ++k) {
        if (h(i, k) > h(i, j) + h(j, k) + tol) {
          throw InputError("metric: triangle inequality fails for " +
                           entry(i, k) + " via " + std::to_string(j));
        }
      }
    }
  }
}

Problem::Problem(MatrixXd p_xy, MatrixXd d, MatrixXd h, Tolerances tol)
    : p_xy_(std::move(p_xy)), d_(std::move(d)), h_(std::move(h)), tol_(tol) {
  const Index n_x = p_xy_.rows();
  const Index n_y = p_xy_.cols();
  if (n_x < 1 || n_y < 1) throw InputError("p_xy: empty matrix");
  if (d_.rows() != n_x || d_.cols() != n_x) {
    throw InputError("distortion: expected " + std::to_string(n_x) + "x" +
                     std::to_string(n_x) + " matrix");
  }
  if (h_.rows() != n_x || h_.cols() != n_x) {
    throw InputError("metric: expected " + std::to_string(n_x) + "x" +
                     std::to_string(n_x) + " matrix");
  }
  if (!p_xy_.allFinite()) throw InputError("p_xy: non-finite entry");
  for (Index i = 0; i < n_x; ++i) {
    for (Index j = 0; j < n_y; ++j) {
      if (p_xy_(i, j) < 0.0) {
        throw InputError("p_xy: negative entry at " + entry(i, j));
      }
    }
  }
  if (std::abs(p_xy_.sum() - 1.0) > tol_.validation) {
    throw InputError("p_xy: entries sum to " + std::to_string(p_xy_.sum()) +
                     ", expected 1");
  }
  p_x_ = p_xy_.rowwise().sum();
  p_y_ = p_xy_.colwise().sum().transpose();
  for (Index j = 0; j < n_y; ++j) {
    if (!(p_y_(j) > 0.0)) {
      throw InputError("p_xy: output symbol " + std::to_string(j) +
                       " has zero probability");
    }
  }
  if (!d_.allFinite()) throw InputError("distortion: non-finite entry");
  for (Index i = 0; i < n_x; ++i) {
    for (Index j = 0; j < n_x; ++j) {
      if (d_(i, j) < 0.0) {
        throw InputError("distortion: negative entry at " + entry(i, j));
      }
    }
  }
  check_metric(h_, tol_.validation);
}

bool Problem::metric_is_hamming() const {
  return (h_ - hamming(nx())).cwiseAbs().maxCoeff() <= tol_.validation;
}

Problem validate_problem(MatrixXd p_xy, MatrixXd d, MatrixXd h,
                         Tolerances tol) {
  return Problem(std::move(p_xy), std::move(d), std::move(h), tol);
}

MatrixXd rho(const Problem& problem) {
  return rho(problem.joint(), problem.distortion());
}

MatrixXd rho_prime(const Problem& problem) {
  MatrixXd r = rho(problem);
  for (Index y = 0; y < r.cols(); ++y) r.col(y) /= problem.p_y()(y);
  return r;
}

double expected_distortion(const Problem& problem, const MatrixXd& q) {
  if (q.rows() != problem.nx() || q.cols() != problem.ny()) {
    throw InputError("expected_distortion: estimator must be " +
                     std::to_string(problem.nx()) + "x" +
                     std::to_string(problem.ny()));
  }
  return rho(problem).cwiseProduct(q).sum();
}

MatrixXd posterior_sampling(const Problem& problem) {
  MatrixXd q = problem.joint();
  for (Index y = 0; y < q.cols(); ++y) q.col(y) /= problem.p_y()(y);
  return q;
}

DistortionFloor d_star(const Problem& problem) {
  const MatrixXd r = rho(problem);
  DistortionFloor out{0.0, MatrixXd::Zero(r.rows(), r.cols())};
  for (Index y = 0; y < r.cols(); ++y) {
    Index best = 0;
    for (Index x = 1; x < r.rows(); ++x) {
      if (r(x, y) < r(best, y)) best = x;
    }
    out.value += r(best, y);
    out.estimator(best, y) = 1.0;
  }
  return out;
}

Transport wasserstein1(const VectorXd& p, const VectorXd& q,
                       const MatrixXd& h) {
  const Index n = p.size();
  if (q.size() != n || h.rows() != n || h.cols() != n) {
    throw InputError("wasserstein1: dimension mismatch");
  }
  if (!p.allFinite() || !q.allFinite() || !h.allFinite()) {
    throw InputError("wasserstein1: non-finite input");
  }
  // Variables coupling(x, x_hat) at x * n + x_hat.
  StandardLP lp;
  lp.a = MatrixXd::Zero(2 * n, n * n);
  lp.b.resize(2 * n);
  lp.c.resize(n * n);
  for (Index x = 0; x < n; ++x) {
    for (Index xh = 0; xh < n; ++xh) {
      const Index v = x * n + xh;
      lp.a(x, v) = 1.0;
      lp.a(n + xh, v) = 1.0;
      lp.c(v) = h(x, xh);
    }
  }
  lp.b << p, q;
  const LPSolution sol = solve(lp);
  if (sol.status != LpStatus::optimal) {
    throw SolverError(std::string("wasserstein1: transport LP ") +
                      to_string(sol.status));
  }
  Transport out{sol.value, MatrixXd(n, n)};
  for (Index x = 0; x < n; ++x) {
    for (Index xh = 0; xh < n; ++xh) {
      out.coupling(x, xh) = std::max(0.0, sol.x(x * n + xh));
    }
  }
  out.value = std::max(0.0, out.value);
  return out;
}

}  // namespace dp
