#pragma once

#include "regkit/linear_operator.hpp"

namespace regkit {

/// Singular values are retained iff sigma_i > kDefaultRankTolerance * sigma_1.
inline constexpr double kDefaultRankTolerance = 1e-12;

/// Largest dimension accepted by the dense factorization.
inline constexpr Index kMaxDenseDimension = 2048;

/// Truncated singular system A = sum_i sigma_i u_i v_i^T of a dense operator.
///
/// The resolutions of the identity of T = A*A and Q = AA* are both read off this system: T has
/// eigenvalues sigma_i^2 on span{v_i} and zero on N(A); Q has eigenvalues sigma_i^2 on span{u_i}
/// and zero on N(Q) = N(A*).  Singular values at or below rank_tolerance * sigma_1 are treated as
/// zero and their vectors are dropped into the null spaces.
class SpectralDecomposition {
 public:
  SpectralDecomposition(Vector singular_values, Matrix left, Matrix right, double rank_tolerance);

  Index rank() const noexcept { return sigma_.size(); }
  Index range_dim() const noexcept { return left_.rows(); }
  Index domain_dim() const noexcept { return right_.rows(); }
  double rank_tolerance() const noexcept { return rank_tolerance_; }

  /// sigma_1 >= ... >= sigma_r > 0.
  const Vector& singular_values() const noexcept { return sigma_; }
  /// range_dim x rank, orthonormal columns u_i.
  const Matrix& left_vectors() const noexcept { return left_; }
  /// domain_dim x rank, orthonormal columns v_i.
  const Matrix& right_vectors() const noexcept { return right_; }

  /// Coefficients <u_i, f>.
  Vector range_coefficients(const Vector& f) const;
  /// Orthonormal basis of N(A) (domain_dim x (domain_dim - rank)).
  Matrix domain_null_basis() const;
  /// Orthonormal basis of N(Q) = N(A*) (range_dim x (range_dim - rank)).
  Matrix range_null_basis() const;
  /// sum_i sigma_i u_i v_i^T.
  Matrix reconstruct() const;

 private:
  Vector sigma_;
  Matrix left_;
  Matrix right_;
  double rank_tolerance_;
};

/// One-sided (Hestenes) Jacobi SVD of a dense matrix, truncated at rank_tolerance * sigma_1.
SpectralDecomposition jacobi_svd(const Matrix& a, double rank_tolerance = kDefaultRankTolerance);

/// SVD of a dense operator (one-sided Jacobi) or a diagonal one (exact, by sorting).
/// Matrix-free operators raise UnsupportedKind; dimensions above kMaxDenseDimension raise
/// UnsupportedProblem.
SpectralDecomposition svd_decompose(const LinearOperator& op, double rank_tolerance = kDefaultRankTolerance);

/// Tikhonov filter phi_i = sigma_i / (sigma_i^2 + alpha).  Every phi_i <= 1/(2 sqrt(alpha)).
Vector filter_factors(const Vector& singular_values, double alpha);

/// max_i sigma_i/(sigma_i^2 + alpha), which is ||(A*A + alpha I)^{-1} A*||_2 for the decomposed A.
double regularized_inverse_norm(const SpectralDecomposition& decomp, double alpha);

/// ||P_N(Q) f||, the norm of the component of f orthogonal to the range of A.
double null_space_residual(const SpectralDecomposition& decomp, const Vector& f);

/// Pseudo-inverse solution y = sum_i (<u_i, f>/sigma_i) v_i.  Throws NotInRange when
/// null_space_residual(f) > rank_tolerance * ||f||.
Vector minimal_norm_solution(const SpectralDecomposition& decomp, const Vector& f);

/// Pseudo-inverse applied without the range check.
Vector pseudo_inverse_apply(const SpectralDecomposition& decomp, const Vector& f);

}  // namespace regkit
