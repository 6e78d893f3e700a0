#include "regkit/linear_operator.hpp"

#include <cmath>
#include <string>
#include <variant>

#include "regkit/errors.hpp"
#include "regkit/random.hpp"

namespace regkit {

namespace {

constexpr std::uint64_t kPowerIterationSeed = 0x9e3779b97f4a7c15ULL;

struct MatrixFreeActions {
  LinearOperator::Action forward;
  LinearOperator::Action adjoint;
};

void check_size(Index got, Index want, const char* what) {
  if (got != want)
    throw DimensionError(std::string(what) + ": expected vector of length " + std::to_string(want) +
                         ", got " + std::to_string(got));
}

}  // namespace

struct LinearOperator::Rep {
  std::variant<Matrix, Vector, MatrixFreeActions> data;
};

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::dense: return "dense";
    case OperatorKind::diagonal: return "diagonal";
    case OperatorKind::matrix_free: return "matrix_free";
  }
  return "unknown";
}

LinearOperator::LinearOperator(OperatorKind kind, Index range_dim, Index domain_dim,
                               std::shared_ptr<const Rep> rep)
    : kind_(kind), range_dim_(range_dim), domain_dim_(domain_dim), rep_(std::move(rep)) {}

LinearOperator LinearOperator::dense(Matrix a) {
  if (a.rows() < 1 || a.cols() < 1) throw DimensionError("dense operator: matrix must be nonempty");
  const Index rows = a.rows();
  const Index cols = a.cols();
  return LinearOperator(OperatorKind::dense, rows, cols, std::make_shared<const Rep>(Rep{std::move(a)}));
}

LinearOperator LinearOperator::diagonal(Vector entries) {
  if (entries.size() < 1) throw DimensionError("diagonal operator: needs at least one entry");
  for (Index i = 0; i < entries.size(); ++i)
    if (!(entries[i] >= 0.0)) throw InvalidParameter("diagonal operator: entries must be nonnegative");
  const Index n = entries.size();
  return LinearOperator(OperatorKind::diagonal, n, n, std::make_shared<const Rep>(Rep{std::move(entries)}));
}

LinearOperator LinearOperator::identity(Index n) { return diagonal(Vector::Ones(n)); }

LinearOperator LinearOperator::matrix_free(Index range_dim, Index domain_dim, Action forward, Action adjoint) {
  if (range_dim < 1 || domain_dim < 1) throw DimensionError("matrix-free operator: dimensions must be positive");
  if (!forward || !adjoint) throw InvalidParameter("matrix-free operator: both actions are required");
  return LinearOperator(OperatorKind::matrix_free, range_dim, domain_dim,
                        std::make_shared<const Rep>(Rep{MatrixFreeActions{std::move(forward), std::move(adjoint)}}));
}

Vector LinearOperator::apply(const Vector& x) const {
  check_size(x.size(), domain_dim_, "apply");
  switch (kind_) {
    case OperatorKind::dense: return std::get<Matrix>(rep_->data) * x;
    case OperatorKind::diagonal: return std::get<Vector>(rep_->data).cwiseProduct(x);
    case OperatorKind::matrix_free: {
      Vector y = std::get<MatrixFreeActions>(rep_->data).forward(x);
      check_size(y.size(), range_dim_, "apply (callback result)");
      return y;
    }
  }
  return {};
}

Vector LinearOperator::apply_adjoint(const Vector& w) const {
  check_size(w.size(), range_dim_, "apply_adjoint");
  switch (kind_) {
    case OperatorKind::dense: return std::get<Matrix>(rep_->data).transpose() * w;
    case OperatorKind::diagonal: return std::get<Vector>(rep_->data).cwiseProduct(w);
    case OperatorKind::matrix_free: {
      Vector x = std::get<MatrixFreeActions>(rep_->data).adjoint(w);
      check_size(x.size(), domain_dim_, "apply_adjoint (callback result)");
      return x;
    }
  }
  return {};
}

const Matrix& LinearOperator::matrix() const {
  if (kind_ != OperatorKind::dense) throw UnsupportedKind("matrix(): operator is " + std::string(to_string(kind_)));
  return std::get<Matrix>(rep_->data);
}

const Vector& LinearOperator::diagonal_entries() const {
  if (kind_ != OperatorKind::diagonal)
    throw UnsupportedKind("diagonal_entries(): operator is " + std::string(to_string(kind_)));
  return std::get<Vector>(rep_->data);
}

Matrix LinearOperator::to_dense() const {
  switch (kind_) {
    case OperatorKind::dense: return std::get<Matrix>(rep_->data);
    case OperatorKind::diagonal: return std::get<Vector>(rep_->data).asDiagonal();
    case OperatorKind::matrix_free: break;
  }
  throw UnsupportedKind("to_dense(): matrix-free operators are never materialized");
}

Vector apply_T_alpha(const LinearOperator& op, double alpha, const Vector& x) {
  if (!(alpha > 0.0)) throw InvalidParameter("apply_T_alpha: alpha must be positive");
  return op.apply_adjoint(op.apply(x)) + alpha * x;
}

Vector apply_Q_alpha(const LinearOperator& op, double alpha, const Vector& w) {
  if (!(alpha > 0.0)) throw InvalidParameter("apply_Q_alpha: alpha must be positive");
  return op.apply(op.apply_adjoint(w)) + alpha * w;
}

LinearOperator adjoint_of(const LinearOperator& op) {
  return LinearOperator::matrix_free(
      op.domain_dim(), op.range_dim(), [op](const Vector& w) { return op.apply_adjoint(w); },
      [op](const Vector& x) { return op.apply(x); });
}

LinearOperator compose(const LinearOperator& outer, const LinearOperator& inner) {
  if (outer.domain_dim() != inner.range_dim())
    throw DimensionError("compose: outer domain " + std::to_string(outer.domain_dim()) + " != inner range " +
                         std::to_string(inner.range_dim()));
  return LinearOperator::matrix_free(
      outer.range_dim(), inner.domain_dim(), [outer, inner](const Vector& x) { return outer.apply(inner.apply(x)); },
      [outer, inner](const Vector& w) { return inner.apply_adjoint(outer.apply_adjoint(w)); });
}

double operator_norm_estimate(const LinearOperator& op, double tol, int max_iters) {
  if (!(tol > 0.0)) throw InvalidParameter("operator_norm_estimate: tol must be positive");
  if (max_iters < 1) throw InvalidParameter("operator_norm_estimate: max_iters must be positive");

  Rng rng(kPowerIterationSeed);
  Vector v = rng.normal_vector(op.domain_dim());
  v.normalize();

  double rel_residual = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Vector av = op.apply(v);
    const Vector z = op.apply_adjoint(av);
    const double theta = av.squaredNorm();
    // A generic start vector only lands in N(A) when A = 0.
    if (theta == 0.0) return 0.0;
    const double z_norm = z.norm();
    rel_residual = (z - theta * v).norm() / theta;
    if (rel_residual <= tol) return std::sqrt(theta);
    v = z / z_norm;
  }
  throw NonConvergence("operator_norm_estimate: power iteration did not converge in " + std::to_string(max_iters) +
                           " iterations",
                       v, rel_residual);
}

}  // namespace regkit
