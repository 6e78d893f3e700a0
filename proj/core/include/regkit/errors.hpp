#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace regkit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input vector or matrix has the wrong shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter is outside its admissible range (alpha <= 0, delta <= 0, C <= 1, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The operation does not support this operator kind (e.g. SVD of a matrix-free operator).
class UnsupportedKind : public Error {
 public:
  using Error::Error;
};

/// Unknown problem name or a size beyond what dense factorizations accept.
class UnsupportedProblem : public Error {
 public:
  using Error::Error;
};

/// Right-hand side has a significant component outside the range of the operator.
class NotInRange : public Error {
 public:
  NotInRange(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Iterative method ran out of budget.  Carries the last iterate and the achieved residual.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, Eigen::VectorXd last_iterate, double achieved)
      : Error(what), last_(std::move(last_iterate)), achieved_(achieved) {}
  const Eigen::VectorXd& last_iterate() const noexcept { return last_; }
  double achieved() const noexcept { return achieved_; }

 private:
  Eigen::VectorXd last_;
  double achieved_;
};

/// ||f_delta|| <= C*delta: the discrepancy equation has no root since g(inf) = ||f_delta||^2.
class DataTooNoisy : public Error {
 public:
  DataTooNoisy(const std::string& what, double data_norm, double target)
      : Error(what), data_norm_(data_norm), target_(target) {}
  double data_norm() const noexcept { return data_norm_; }
  double target() const noexcept { return target_; }

 private:
  double data_norm_;
  double target_;
};

/// g(alpha) stays above C^2 delta^2 even at the smallest bracket.  The noise level is understated,
/// since g(0+) = ||P_N(Q) f_delta||^2 <= delta^2 whenever ||f_delta - f|| <= delta.
class NoRootBelow : public Error {
 public:
  NoRootBelow(const std::string& what, double alpha_low, double g_low)
      : Error(what), alpha_low_(alpha_low), g_low_(g_low) {}
  double alpha_low() const noexcept { return alpha_low_; }
  double g_low() const noexcept { return g_low_; }

 private:
  double alpha_low_;
  double g_low_;
};

}  // namespace regkit
