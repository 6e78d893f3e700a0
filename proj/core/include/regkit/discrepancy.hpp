#pragma once

#include <functional>

#include "regkit/linear_operator.hpp"
#include "regkit/spectral.hpp"
#include "regkit/tikhonov.hpp"

namespace regkit {

struct DiscrepancyConfig {
  /// Residual target is C * delta with C > 1.
  double C = 1.5;
  double alpha_low = 1e-14;
  double alpha_high = 1e14;
  /// Accept alpha once |residual - C delta| <= root_rel_tolerance * C delta.
  double root_rel_tolerance = 1e-10;
  int max_root_iterations = 200;
  /// Each bracket end may be moved by a factor of 10 at most this many times.
  int max_bracket_expansions = 20;
  /// Linear solves in the operator form.
  IterativeSolverConfig solver{};

  void validate() const;
};

struct AlphaSelection {
  double alpha = 0.0;
  /// g(alpha) = ||A u_alpha - f_delta||^2.
  double g_value = 0.0;
  double achieved_residual = 0.0;
  int bracket_expansions = 0;
  int iterations = 0;
};

/// Discrepancy g(alpha) = ||A u_alpha - f_delta||^2 from the singular system:
///   sum_i (alpha/(sigma_i^2 + alpha))^2 <u_i, f_delta>^2 + ||P_N(Q) f_delta||^2.
/// The filter is evaluated as 1/(1 + sigma^2/alpha), so g is nondecreasing in alpha even in
/// floating point.
double discrepancy_value(const SpectralDecomposition& decomp, const Vector& f_delta, double alpha);

/// Operator form: solves (AA* + alpha I) w = f_delta, so that u = A* w and A u - f_delta = -alpha w.
double discrepancy_value(const LinearOperator& op, const Vector& f_delta, double alpha,
                         const IterativeSolverConfig& cfg = {});

/// Unique alpha with ||A u_alpha - f_delta|| = C delta, found by bracket expansion followed by a
/// safeguarded (Illinois) secant iteration on log(residual) against log(alpha).
///
/// Errors: DataTooNoisy when ||f_delta|| <= C delta; NoRootBelow when the residual stays above
/// C delta at the smallest admissible alpha; NonConvergence when the budget runs out.
AlphaSelection solve_alpha(const SpectralDecomposition& decomp, const Vector& f_delta, double delta,
                           const DiscrepancyConfig& cfg = {});
AlphaSelection solve_alpha(const LinearOperator& op, const Vector& f_delta, double delta,
                           const DiscrepancyConfig& cfg = {});

/// Root search for an arbitrary nondecreasing residual curve alpha -> ||A u_alpha - f_delta||.
AlphaSelection solve_alpha(const std::function<double(double)>& residual, double data_norm, double delta,
                           const DiscrepancyConfig& cfg = {});

struct AutoSolution {
  RegularizedSolution solution;
  AlphaSelection selection;
};

/// u_delta = u_{alpha(delta), delta} with alpha(delta) from the discrepancy principle.
AutoSolution regularized_solve_auto(const SpectralDecomposition& decomp, const LinearOperator& op,
                                    const Vector& f_delta, double delta, const DiscrepancyConfig& cfg = {});
AutoSolution regularized_solve_auto(const LinearOperator& op, const Vector& f_delta, double delta,
                                    const DiscrepancyConfig& cfg = {});

}  // namespace regkit
