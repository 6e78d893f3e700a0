#pragma once

// Test-only reference computations.  Nothing here calls into the solver paths under test:
// Tikhonov minimizers come from a QR least-squares solve of the stacked system
// [A; sqrt(alpha) I] u ~ [f; 0], singular values from Eigen's divide-and-conquer SVD, and
// discrepancy roots from plain bisection on an explicitly supplied residual curve.

#include <cmath>
#include <functional>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "regkit/linear_operator.hpp"
#include "regkit/random.hpp"

namespace oracle {

using regkit::Index;
using regkit::Matrix;
using regkit::Vector;

inline Vector stacked_tikhonov(const Matrix& a, const Vector& f, double alpha) {
  const Index m = a.rows();
  const Index n = a.cols();
  Matrix big(m + n, n);
  big.topRows(m) = a;
  big.bottomRows(n) = std::sqrt(alpha) * Matrix::Identity(n, n);
  Vector rhs = Vector::Zero(m + n);
  rhs.head(m) = f;
  return big.colPivHouseholderQr().solve(rhs);
}

inline Vector singular_values(const Matrix& a) {
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

/// Root of an increasing function on [lo, hi] (log-scale bisection to adjacent doubles).
inline double bisect_log(const std::function<double(double)>& fn, double lo, double hi) {
  double x_lo = std::log(lo);
  double x_hi = std::log(hi);
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (x_lo + x_hi);
    if (mid <= x_lo || mid >= x_hi) break;
    if (fn(std::exp(mid)) < 0.0)
      x_lo = mid;
    else
      x_hi = mid;
  }
  return std::exp(0.5 * (x_lo + x_hi));
}

inline double rel_diff(const Vector& a, const Vector& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline Matrix hilbert(Index n) {
  Matrix h(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) h(i, j) = 1.0 / static_cast<double>(i + j + 1);
  return h;
}

}  // namespace oracle
