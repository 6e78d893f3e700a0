#pragma once

#include <functional>
#include <memory>
#include <string_view>

#include <Eigen/Core>

namespace regkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class OperatorKind { dense, diagonal, matrix_free };

std::string_view to_string(OperatorKind kind);

/// A bounded linear map A from a domain space R^domain_dim to a range space R^range_dim,
/// together with its adjoint A*.
///
/// Values are immutable and cheap to copy (the representation is shared).  Three kinds exist:
/// a dense matrix, a square diagonal with nonnegative entries, and a matrix-free pair of
/// callbacks.  Matrix-free callbacks must be re-entrant; they may be invoked concurrently.
class LinearOperator {
 public:
  using Action = std::function<Vector(const Vector&)>;

  static LinearOperator dense(Matrix a);
  static LinearOperator diagonal(Vector entries);
  static LinearOperator identity(Index n);
  static LinearOperator matrix_free(Index range_dim, Index domain_dim, Action forward, Action adjoint);

  Index domain_dim() const noexcept { return domain_dim_; }
  Index range_dim() const noexcept { return range_dim_; }
  OperatorKind kind() const noexcept { return kind_; }

  /// Ax.  Throws DimensionError unless x.size() == domain_dim().
  Vector apply(const Vector& x) const;
  /// A*w.  Throws DimensionError unless w.size() == range_dim().
  Vector apply_adjoint(const Vector& w) const;

  /// Dense kind only.
  const Matrix& matrix() const;
  /// Diagonal kind only.
  const Vector& diagonal_entries() const;
  /// Materialized matrix for dense and diagonal kinds; UnsupportedKind for matrix-free.
  Matrix to_dense() const;

 private:
  struct Rep;
  LinearOperator(OperatorKind kind, Index range_dim, Index domain_dim, std::shared_ptr<const Rep> rep);

  OperatorKind kind_;
  Index range_dim_;
  Index domain_dim_;
  std::shared_ptr<const Rep> rep_;
};

inline Vector apply(const LinearOperator& op, const Vector& x) { return op.apply(x); }
inline Vector apply_adjoint(const LinearOperator& op, const Vector& w) { return op.apply_adjoint(w); }

/// (A*A + alpha I) x using only the forward and adjoint actions.
Vector apply_T_alpha(const LinearOperator& op, double alpha, const Vector& x);
/// (AA* + alpha I) w using only the forward and adjoint actions.
Vector apply_Q_alpha(const LinearOperator& op, double alpha, const Vector& w);

/// Matrix-free A*, mapping the range space back to the domain space.
LinearOperator adjoint_of(const LinearOperator& op);
/// Matrix-free outer∘inner (outer applied after inner).
LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner);

/// Power iteration on A*A from a fixed seeded start vector.  Stops when the eigen-residual
/// ||A*Av - theta v|| <= tol * theta and returns sqrt(theta), i.e. the estimate of ||A||_2.
/// Throws NonConvergence carrying the last normalized iterate after max_iters steps.
double operator_norm_estimate(const LinearOperator& op, double tol = 1e-10, int max_iters = 100000);

}  // namespace regkit
