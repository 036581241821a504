#pragma once

// Seeded generators shared by the test binaries.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <random>

#include "dp/core_model.hpp"

namespace dp::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // (0, 1], never exactly zero
  double uniform() {
    double u = 0.0;
    while (u == 0.0) u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return u;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Index integer(Index lo, Index hi) {
    return lo + static_cast<Index>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin() { return (engine_() >> 63) != 0; }

  VectorXd pmf(Index n) {
    VectorXd p(n);
    for (Index i = 0; i < n; ++i) p(i) = uniform();
    return p / p.sum();
  }

  // Sparse-ish pmf: each entry zero with probability 1/3, at least one kept.
  VectorXd sparse_pmf(Index n) {
    VectorXd p(n);
    for (Index i = 0; i < n; ++i) p(i) = integer(0, 2) == 0 ? 0.0 : uniform();
    if (p.sum() == 0.0) p(integer(0, n - 1)) = 1.0;
    return p / p.sum();
  }

  MatrixXd joint(Index nx, Index ny) {
    MatrixXd p(nx, ny);
    for (Index x = 0; x < nx; ++x)
      for (Index y = 0; y < ny; ++y) p(x, y) = uniform();
    return p / p.sum();
  }

  MatrixXd estimator(Index nx, Index ny) {
    MatrixXd q(nx, ny);
    for (Index y = 0; y < ny; ++y) q.col(y) = pmf(nx);
    return q;
  }

  MatrixXd distortion(Index nx) {
    MatrixXd d(nx, nx);
    for (Index x = 0; x < nx; ++x)
      for (Index xh = 0; xh < nx; ++xh) d(x, xh) = uniform();
    return d;
  }

  // Shortest-path closure of random symmetric weights in (0, 1].
  MatrixXd metric(Index n) {
    MatrixXd h(n, n);
    for (Index i = 0; i < n; ++i) {
      h(i, i) = 0.0;
      for (Index j = i + 1; j < n; ++j) h(i, j) = h(j, i) = uniform(0.05, 1.0);
    }
    for (Index k = 0; k < n; ++k)
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) h(i, j) = std::min(h(i, j), h(i, k) + h(k, j));
    return h;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline Problem random_problem(Rng& rng, Index nx, Index ny, bool random_d,
                              bool random_h = false) {
  MatrixXd d = random_d ? rng.distortion(nx) : hamming(nx);
  MatrixXd h = random_h ? rng.metric(nx) : hamming(nx);
  return Problem(rng.joint(nx, ny), std::move(d), std::move(h));
}

inline MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  MatrixXd m(static_cast<Index>(rows.size()),
             static_cast<Index>(rows.begin()->size()));
  Index r = 0;
  for (const auto& row : rows) {
    Index c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

inline VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Problem bsc() {
  return Problem(mat({{0.54, 0.06}, {0.04, 0.36}}), hamming(2), hamming(2));
}

// Y independent of X with p_X = (0.6, 0.4), P_Y = (0.5, 0.5).
inline Problem independent() {
  return Problem(mat({{0.3, 0.3}, {0.2, 0.2}}), hamming(2), hamming(2));
}

inline Problem noiseless() {
  return Problem(mat({{0.5, 0.0}, {0.0, 0.5}}), hamming(2), hamming(2));
}

}  // namespace dp::testing
