#pragma once

#include <string_view>

#include "regkit/linear_operator.hpp"
#include "regkit/spectral.hpp"

namespace regkit {

enum class SolverPath { primal, dual, spectral };

std::string_view to_string(SolverPath path);

struct IterativeSolverConfig {
  double rel_tolerance = 1e-12;
  /// 0 selects 10 * (system dimension).
  int max_iterations = 0;

  void validate() const;
};

/// Minimizer u of F(u) = ||Au - f||^2 + alpha ||u||^2 together with its diagnostics.
/// residual_norm and solution_norm are always recomputed from u.
struct RegularizedSolution {
  Vector u;
  double alpha = 0.0;
  double residual_norm = 0.0;
  double solution_norm = 0.0;
  SolverPath path = SolverPath::primal;
  int iterations = 0;
};

/// Solves (A*A + alpha I) x = rhs: Cholesky of the formed normal matrix in long double for dense
/// operators, elementwise for diagonal ones, conjugate gradients on apply_T_alpha otherwise.
/// `iterations` receives the CG count (0 for direct solves).
Vector solve_normal_system(const LinearOperator& op, double alpha, const Vector& rhs,
                           const IterativeSolverConfig& cfg = {}, int* iterations = nullptr);

/// Solves (AA* + alpha I) w = rhs, with the same dispatch as solve_normal_system.
Vector solve_range_system(const LinearOperator& op, double alpha, const Vector& rhs,
                          const IterativeSolverConfig& cfg = {}, int* iterations = nullptr);

/// u = (A*A + alpha I)^{-1} A* f.
RegularizedSolution solve_primal(const LinearOperator& op, const Vector& f, double alpha,
                                 const IterativeSolverConfig& cfg = {});

/// u = A* (AA* + alpha I)^{-1} f.  Defined for every f in the range space.
RegularizedSolution solve_dual(const LinearOperator& op, const Vector& f, double alpha,
                               const IterativeSolverConfig& cfg = {});

/// u = sum_i sigma_i/(sigma_i^2 + alpha) <u_i, f> v_i.  Needs the operator only to recompute
/// the residual; pass the decomposed operator.
RegularizedSolution solve_spectral(const SpectralDecomposition& decomp, const LinearOperator& op, const Vector& f,
                                   double alpha);

/// Coefficient-space form without the operator: residual_norm is evaluated spectrally as
/// ||(I - U diag(sigma^2/(sigma^2+alpha)) U^T) f||.
RegularizedSolution solve_spectral(const SpectralDecomposition& decomp, const Vector& f, double alpha);

/// ||Au - f||^2 + alpha ||u||^2.
double functional_value(const LinearOperator& op, const Vector& u, const Vector& f, double alpha);

/// A-priori rule alpha(delta) = delta, so that alpha -> 0 and delta/(2 sqrt(alpha)) -> 0.
double apriori_alpha_schedule(double delta);

/// Matrix-free (A*A + alpha I)^{-1} A*, whose adjoint is A (A*A + alpha I)^{-1}.
LinearOperator regularized_inverse(const LinearOperator& op, double alpha, const IterativeSolverConfig& cfg = {});

}  // namespace regkit
