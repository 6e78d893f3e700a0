#include "regkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "regkit/errors.hpp"

namespace regkit {

namespace {

constexpr int kMaxJacobiSweeps = 80;

// Orthonormal complement of the columns of `basis` in R^dim.
Matrix orthogonal_complement(const Matrix& basis, Index dim) {
  const Index r = basis.cols();
  if (r == 0) return Matrix::Identity(dim, dim);
  if (r == dim) return Matrix(dim, 0);
  Eigen::HouseholderQR<Matrix> qr(basis);
  const Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  return q.rightCols(dim - r);
}

struct JacobiResult {
  Matrix w;  // columns w_j = sigma_j u_j
  Matrix v;
};

// One-sided Jacobi on a tall (rows >= cols) matrix: rotate column pairs until all are mutually
// orthogonal to working precision, accumulating the rotations in V so that A V = W.
JacobiResult one_sided_jacobi(Matrix w) {
  const Index m = w.rows();
  const Index n = w.cols();
  Matrix v = Matrix::Identity(n, n);
  const double tol = std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(m));

  Vector norms2(n);
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    for (Index j = 0; j < n; ++j) norms2[j] = w.col(j).squaredNorm();
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double a = norms2[p];
        const double b = norms2[q];
        if (a == 0.0 || b == 0.0) continue;
        const double c = w.col(p).dot(w.col(q));
        if (std::abs(c) <= tol * std::sqrt(a) * std::sqrt(b)) continue;
        rotated = true;
        const double zeta = (b - a) / (2.0 * c);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;

        double* wp = w.col(p).data();
        double* wq = w.col(q).data();
        for (Index i = 0; i < m; ++i) {
          const double xp = wp[i];
          const double xq = wq[i];
          wp[i] = cs * xp - sn * xq;
          wq[i] = sn * xp + cs * xq;
        }
        double* vp = v.col(p).data();
        double* vq = v.col(q).data();
        for (Index i = 0; i < n; ++i) {
          const double xp = vp[i];
          const double xq = vq[i];
          vp[i] = cs * xp - sn * xq;
          vq[i] = sn * xp + cs * xq;
        }
        norms2[p] = a - t * c;
        norms2[q] = b + t * c;
      }
    }
    if (!rotated) return {std::move(w), std::move(v)};
  }
  throw NonConvergence("jacobi_svd: no convergence after " + std::to_string(kMaxJacobiSweeps) + " sweeps",
                       Vector(), 0.0);
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(Vector singular_values, Matrix left, Matrix right,
                                             double rank_tolerance)
    : sigma_(std::move(singular_values)),
      left_(std::move(left)),
      right_(std::move(right)),
      rank_tolerance_(rank_tolerance) {
  if (left_.cols() != sigma_.size() || right_.cols() != sigma_.size())
    throw DimensionError("SpectralDecomposition: vector sets must have one column per singular value");
}

Vector SpectralDecomposition::range_coefficients(const Vector& f) const {
  if (f.size() != range_dim())
    throw DimensionError("range_coefficients: expected length " + std::to_string(range_dim()) + ", got " +
                         std::to_string(f.size()));
  return left_.transpose() * f;
}

Matrix SpectralDecomposition::domain_null_basis() const { return orthogonal_complement(right_, domain_dim()); }

Matrix SpectralDecomposition::range_null_basis() const { return orthogonal_complement(left_, range_dim()); }

Matrix SpectralDecomposition::reconstruct() const { return left_ * sigma_.asDiagonal() * right_.transpose(); }

SpectralDecomposition jacobi_svd(const Matrix& a, double rank_tolerance) {
  if (!(rank_tolerance >= 0.0)) throw InvalidParameter("jacobi_svd: rank_tolerance must be nonnegative");
  const bool transposed = a.rows() < a.cols();
  JacobiResult jr = one_sided_jacobi(transposed ? Matrix(a.transpose()) : a);

  const Index k = jr.w.cols();
  Vector sigma(k);
  for (Index j = 0; j < k; ++j) sigma[j] = jr.w.col(j).norm();

  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return sigma[i] > sigma[j]; });

  const double cutoff = k > 0 ? rank_tolerance * sigma[order.front()] : 0.0;
  Index rank = 0;
  while (rank < k && sigma[order[static_cast<std::size_t>(rank)]] > cutoff) ++rank;

  // In the tall frame W = U Sigma (columns of the working matrix) and V holds the right vectors.
  Vector s(rank);
  Matrix u_tall(jr.w.rows(), rank);
  Matrix v_tall(jr.v.rows(), rank);
  for (Index i = 0; i < rank; ++i) {
    const Index j = order[static_cast<std::size_t>(i)];
    s[i] = sigma[j];
    u_tall.col(i) = jr.w.col(j) / sigma[j];
    v_tall.col(i) = jr.v.col(j);
  }
  if (transposed) return SpectralDecomposition(std::move(s), std::move(v_tall), std::move(u_tall), rank_tolerance);
  return SpectralDecomposition(std::move(s), std::move(u_tall), std::move(v_tall), rank_tolerance);
}

SpectralDecomposition svd_decompose(const LinearOperator& op, double rank_tolerance) {
  if (op.kind() == OperatorKind::matrix_free)
    throw UnsupportedKind("svd_decompose: matrix-free operators have no dense factorization");
  if (std::max(op.range_dim(), op.domain_dim()) > kMaxDenseDimension)
    throw UnsupportedProblem("svd_decompose: dimension exceeds dense limit of " + std::to_string(kMaxDenseDimension));
  if (op.kind() == OperatorKind::dense) return jacobi_svd(op.matrix(), rank_tolerance);

  if (!(rank_tolerance >= 0.0)) throw InvalidParameter("svd_decompose: rank_tolerance must be nonnegative");
  const Vector& d = op.diagonal_entries();
  const Index n = d.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return d[i] > d[j]; });
  const double cutoff = rank_tolerance * d[order.front()];
  Index rank = 0;
  while (rank < n && d[order[static_cast<std::size_t>(rank)]] > cutoff) ++rank;

  Vector s(rank);
  Matrix basis = Matrix::Zero(n, rank);
  for (Index i = 0; i < rank; ++i) {
    const Index j = order[static_cast<std::size_t>(i)];
    s[i] = d[j];
    basis(j, i) = 1.0;
  }
  return SpectralDecomposition(std::move(s), basis, basis, rank_tolerance);
}

Vector filter_factors(const Vector& singular_values, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("filter_factors: alpha must be positive");
  Vector phi(singular_values.size());
  for (Index i = 0; i < phi.size(); ++i) {
    const double s = singular_values[i];
    if (!(s >= 0.0)) throw InvalidParameter("filter_factors: singular values must be nonnegative");
    phi[i] = s / (s * s + alpha);
  }
  return phi;
}

double regularized_inverse_norm(const SpectralDecomposition& decomp, double alpha) {
  const Vector phi = filter_factors(decomp.singular_values(), alpha);
  return phi.size() == 0 ? 0.0 : phi.maxCoeff();
}

double null_space_residual(const SpectralDecomposition& decomp, const Vector& f) {
  const Vector c = decomp.range_coefficients(f);
  return (f - decomp.left_vectors() * c).norm();
}

Vector pseudo_inverse_apply(const SpectralDecomposition& decomp, const Vector& f) {
  const Vector c = decomp.range_coefficients(f);
  return decomp.right_vectors() * c.cwiseQuotient(decomp.singular_values());
}

Vector minimal_norm_solution(const SpectralDecomposition& decomp, const Vector& f) {
  const double residual = null_space_residual(decomp, f);
  if (residual > decomp.rank_tolerance() * f.norm())
    throw NotInRange("minimal_norm_solution: data has null-space component of norm " + std::to_string(residual),
                     residual);
  return pseudo_inverse_apply(decomp, f);
}

}  // namespace regkit
