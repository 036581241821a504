#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "dp/lp.hpp"

namespace dp {

double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (Index i = 1; i <= k; ++i) {
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(out);
}

bool vertex_budget_admits(const HPolyhedron& poly,
                          const VertexOptions& options) {
  return poly.dimension() >= 1 &&
         poly.dimension() <= options.max_dimension &&
         binomial(poly.rows(), poly.dimension()) <= options.budget;
}

namespace {

constexpr int kMaxDim = 16;

// Gauss-Jordan reduced system of the rows chosen so far: row r has a unit
// entry in column pivot[r] and zeros in every other pivot column.
struct Reduced {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor,
                kMaxDim, kMaxDim>
      rows;
  Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1> rhs;
  int pivot[kMaxDim];
};

class Enumerator {
 public:
  Enumerator(const HPolyhedron& poly, const VertexOptions& options)
      : g_(poly.g), h_(poly.h), opt_(options), k_(poly.rows()),
        d_(poly.dimension()) {}

  std::vector<VectorXd> run() {
    Reduced root;
    root.rows.resize(d_, d_);
    root.rhs.resize(d_);
    descend(root, 0, 0);
    std::vector<VectorXd> out;
    out.reserve(found_.size());
    for (auto& kv : found_) out.push_back(std::move(kv.second));
    std::sort(out.begin(), out.end(), [](const VectorXd& a, const VectorXd& b) {
      return std::lexicographical_compare(a.data(), a.data() + a.size(),
                                          b.data(), b.data() + b.size());
    });
    return out;
  }

 private:
  void descend(const Reduced& state, Index depth, Index start) {
    Eigen::Matrix<double, 1, Eigen::Dynamic, Eigen::RowMajor, 1, kMaxDim> x;
    for (Index i = start; i <= k_ - (d_ - depth); ++i) {
      x = g_.row(i);
      double t = h_(i);
      for (Index r = 0; r < depth; ++r) {
        const double f = x(state.pivot[r]);
        if (f != 0.0) {
          x -= f * state.rows.row(r);
          t -= f * state.rhs(r);
        }
      }
      Index p = 0;
      const double mag = x.cwiseAbs().maxCoeff(&p);
      if (mag < opt_.pivot_tol) continue;
      const double inv = 1.0 / x(p);
      x *= inv;
      t *= inv;
      x(p) = 1.0;

      Reduced child = state;
      for (Index r = 0; r < depth; ++r) {
        const double f = child.rows(r, p);
        if (f != 0.0) {
          child.rows.row(r) -= f * x;
          child.rhs(r) -= f * t;
          child.rows(r, p) = 0.0;
        }
      }
      child.rows.row(depth) = x;
      child.rhs(depth) = t;
      child.pivot[depth] = static_cast<int>(p);

      if (depth + 1 == d_) {
        leaf(child);
      } else {
        descend(child, depth + 1, i + 1);
      }
    }
  }

  void leaf(const Reduced& state) {
    VectorXd point(d_);
    for (Index r = 0; r < d_; ++r) point(state.pivot[r]) = state.rhs(r);
    if (!point.allFinite()) return;
    if (((g_ * point - h_).array() > opt_.feasibility_tol).any()) return;
    const double key = point(0);
    auto lo = found_.lower_bound(key - opt_.dedup_tol);
    const auto hi = found_.upper_bound(key + opt_.dedup_tol);
    for (; lo != hi; ++lo) {
      if ((lo->second - point).cwiseAbs().maxCoeff() <= opt_.dedup_tol) return;
    }
    found_.emplace(key, std::move(point));
  }

  const MatrixXd& g_;
  const VectorXd& h_;
  VertexOptions opt_;
  Index k_;
  Index d_;
  std::multimap<double, VectorXd> found_;
};

}  // namespace

std::vector<VectorXd> enumerate_vertices(const HPolyhedron& poly,
                                         const VertexOptions& options) {
  if (poly.g.rows() != poly.h.size()) {
    throw InputError("enumerate_vertices: g and h row counts differ");
  }
  if (poly.dimension() < 1) {
    throw InputError("enumerate_vertices: dimension must be at least 1");
  }
  if (!poly.g.allFinite() || !poly.h.allFinite()) {
    throw InputError("enumerate_vertices: non-finite entry");
  }
  if (poly.dimension() > std::min<Index>(options.max_dimension, kMaxDim)) {
    throw BudgetExceeded("enumerate_vertices: dimension " +
                         std::to_string(poly.dimension()) +
                         " exceeds the supported maximum");
  }
  const double subsets = binomial(poly.rows(), poly.dimension());
  if (subsets > options.budget) {
    throw BudgetExceeded("enumerate_vertices: C(" +
                         std::to_string(poly.rows()) + ", " +
                         std::to_string(poly.dimension()) +
                         ") row subsets exceed the budget");
  }
  if (poly.rows() < poly.dimension()) return {};
  return Enumerator(poly, options).run();
}

}  // namespace dp
