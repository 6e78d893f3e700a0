#include "regkit/tikhonov.hpp"

#include <cmath>
#include <memory>
#include <string>

#include <Eigen/Cholesky>

#include "regkit/errors.hpp"

namespace regkit {

namespace {

void require_positive_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidParameter(std::string(where) + ": alpha must be positive and finite, got " + std::to_string(alpha));
}

int iteration_budget(const IterativeSolverConfig& cfg, Index dim) {
  return cfg.max_iterations > 0 ? cfg.max_iterations : static_cast<int>(10 * dim);
}

template <class Apply>
Vector conjugate_gradient(const Apply& apply_spd, const Vector& rhs, const IterativeSolverConfig& cfg,
                          int* iterations, const char* where) {
  const double rhs_norm = rhs.norm();
  Vector x = Vector::Zero(rhs.size());
  if (iterations) *iterations = 0;
  if (rhs_norm == 0.0) return x;

  const int budget = iteration_budget(cfg, rhs.size());
  const double threshold = cfg.rel_tolerance * rhs_norm;
  Vector r = rhs;
  Vector p = r;
  double rr = r.squaredNorm();
  for (int it = 1; it <= budget; ++it) {
    const Vector ap = apply_spd(p);
    const double step = rr / p.dot(ap);
    x += step * p;
    r -= step * ap;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= threshold) {
      if (iterations) *iterations = it;
      return x;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  throw NonConvergence(std::string(where) + ": conjugate gradients did not reach relative residual " +
                           std::to_string(cfg.rel_tolerance) + " in " + std::to_string(budget) + " iterations",
                       x, std::sqrt(rr) / rhs_norm);
}

// Cholesky of an SPD matrix, falling back to pivoted LDL^T when rounding in the formed Gram
// matrix defeats plain Cholesky (alpha far below eps * sigma_1^2).
class SpdFactor {
 public:
  explicit SpdFactor(const Matrix& m) : llt_(m) {
    if (llt_.info() != Eigen::Success) ldlt_ = std::make_unique<Eigen::LDLT<Matrix>>(m);
  }
  Vector solve(const Vector& b) const { return ldlt_ ? Vector(ldlt_->solve(b)) : Vector(llt_.solve(b)); }

 private:
  Eigen::LLT<Matrix> llt_;
  std::unique_ptr<Eigen::LDLT<Matrix>> ldlt_;
};

// A*A + alpha I, formed explicitly.
Matrix normal_matrix(const Matrix& a, double alpha) {
  Matrix g = Matrix::Zero(a.cols(), a.cols());
  g.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  g.diagonal().array() += alpha;
  return g.selfadjointView<Eigen::Lower>();
}

// Dense direct solves run in extended precision.  For a wide A the primal data A* f carries
// rounding of size eps ||A|| ||f|| in N(A), which (A*A + alpha I)^{-1} amplifies by 1/alpha; for a
// tall A the dual w has norm ~ ||P_N(Q) f|| / alpha and the product A* w loses the same amount.
using WideMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using WideVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Solves (B B* + alpha I) x = rhs.
WideVector wide_gram_solve(const WideMatrix& b, double alpha, const WideVector& rhs) {
  WideMatrix g = WideMatrix::Zero(b.rows(), b.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(b);
  g.diagonal().array() += static_cast<long double>(alpha);
  Eigen::LLT<WideMatrix> llt(g);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  return Eigen::LDLT<WideMatrix>(g).solve(rhs);
}

RegularizedSolution finish(const LinearOperator& op, const Vector& f, Vector u, double alpha, SolverPath path,
                           int iterations) {
  RegularizedSolution s;
  s.residual_norm = (op.apply(u) - f).norm();
  s.solution_norm = u.norm();
  s.u = std::move(u);
  s.alpha = alpha;
  s.path = path;
  s.iterations = iterations;
  return s;
}

void check_data(const LinearOperator& op, const Vector& f, const char* where) {
  if (f.size() != op.range_dim())
    throw DimensionError(std::string(where) + ": data has length " + std::to_string(f.size()) + ", operator range is " +
                         std::to_string(op.range_dim()));
}

}  // namespace

std::string_view to_string(SolverPath path) {
  switch (path) {
    case SolverPath::primal: return "primal";
    case SolverPath::dual: return "dual";
    case SolverPath::spectral: return "spectral";
  }
  return "unknown";
}

void IterativeSolverConfig::validate() const {
  if (!(rel_tolerance > 0.0 && rel_tolerance < 1.0))
    throw InvalidParameter("IterativeSolverConfig: rel_tolerance must lie in (0, 1)");
  if (max_iterations < 0) throw InvalidParameter("IterativeSolverConfig: max_iterations must be positive");
}

Vector solve_normal_system(const LinearOperator& op, double alpha, const Vector& rhs, const IterativeSolverConfig& cfg,
                           int* iterations) {
  require_positive_alpha(alpha, "solve_normal_system");
  cfg.validate();
  if (rhs.size() != op.domain_dim()) throw DimensionError("solve_normal_system: rhs must have domain dimension");
  if (iterations) *iterations = 0;
  switch (op.kind()) {
    case OperatorKind::dense: {
      const WideMatrix at = op.matrix().transpose().cast<long double>();
      return wide_gram_solve(at, alpha, rhs.cast<long double>()).cast<double>();
    }
    case OperatorKind::diagonal: {
      const Vector& d = op.diagonal_entries();
      return rhs.array() / (d.array().square() + alpha);
    }
    case OperatorKind::matrix_free: break;
  }
  return conjugate_gradient([&](const Vector& x) { return apply_T_alpha(op, alpha, x); }, rhs, cfg, iterations,
                            "solve_normal_system");
}

Vector solve_range_system(const LinearOperator& op, double alpha, const Vector& rhs, const IterativeSolverConfig& cfg,
                          int* iterations) {
  require_positive_alpha(alpha, "solve_range_system");
  cfg.validate();
  if (rhs.size() != op.range_dim()) throw DimensionError("solve_range_system: rhs must have range dimension");
  if (iterations) *iterations = 0;
  switch (op.kind()) {
    case OperatorKind::dense:
      return wide_gram_solve(op.matrix().cast<long double>(), alpha, rhs.cast<long double>()).cast<double>();
    case OperatorKind::diagonal: {
      const Vector& d = op.diagonal_entries();
      return rhs.array() / (d.array().square() + alpha);
    }
    case OperatorKind::matrix_free: break;
  }
  return conjugate_gradient([&](const Vector& w) { return apply_Q_alpha(op, alpha, w); }, rhs, cfg, iterations,
                            "solve_range_system");
}

RegularizedSolution solve_primal(const LinearOperator& op, const Vector& f, double alpha,
                                 const IterativeSolverConfig& cfg) {
  require_positive_alpha(alpha, "solve_primal");
  check_data(op, f, "solve_primal");
  if (f.isZero(0.0)) return finish(op, f, Vector::Zero(op.domain_dim()), alpha, SolverPath::primal, 0);
  if (op.kind() == OperatorKind::dense) {
    const WideMatrix at = op.matrix().transpose().cast<long double>();
    const WideVector u = wide_gram_solve(at, alpha, at * f.cast<long double>());
    return finish(op, f, u.cast<double>(), alpha, SolverPath::primal, 0);
  }
  int iterations = 0;
  Vector u = solve_normal_system(op, alpha, op.apply_adjoint(f), cfg, &iterations);
  return finish(op, f, std::move(u), alpha, SolverPath::primal, iterations);
}

RegularizedSolution solve_dual(const LinearOperator& op, const Vector& f, double alpha,
                               const IterativeSolverConfig& cfg) {
  require_positive_alpha(alpha, "solve_dual");
  check_data(op, f, "solve_dual");
  if (f.isZero(0.0)) return finish(op, f, Vector::Zero(op.domain_dim()), alpha, SolverPath::dual, 0);
  if (op.kind() == OperatorKind::dense) {
    const WideMatrix a = op.matrix().cast<long double>();
    const WideVector w = wide_gram_solve(a, alpha, f.cast<long double>());
    return finish(op, f, Vector((a.transpose() * w).cast<double>()), alpha, SolverPath::dual, 0);
  }
  int iterations = 0;
  const Vector w = solve_range_system(op, alpha, f, cfg, &iterations);
  return finish(op, f, op.apply_adjoint(w), alpha, SolverPath::dual, iterations);
}

RegularizedSolution solve_spectral(const SpectralDecomposition& decomp, const LinearOperator& op, const Vector& f,
                                   double alpha) {
  require_positive_alpha(alpha, "solve_spectral");
  check_data(op, f, "solve_spectral");
  if (op.domain_dim() != decomp.domain_dim() || op.range_dim() != decomp.range_dim())
    throw DimensionError("solve_spectral: decomposition does not match the operator");
  const Vector c = decomp.range_coefficients(f);
  Vector u = decomp.right_vectors() * filter_factors(decomp.singular_values(), alpha).cwiseProduct(c);
  return finish(op, f, std::move(u), alpha, SolverPath::spectral, 0);
}

RegularizedSolution solve_spectral(const SpectralDecomposition& decomp, const Vector& f, double alpha) {
  require_positive_alpha(alpha, "solve_spectral");
  const Vector c = decomp.range_coefficients(f);
  const Vector& sigma = decomp.singular_values();
  RegularizedSolution s;
  s.u = decomp.right_vectors() * filter_factors(sigma, alpha).cwiseProduct(c);
  // Au - f = U (sigma^2/(sigma^2+alpha) - 1) c - P_N f = -U (alpha/(sigma^2+alpha)) c - P_N f.
  Vector range_residual(c.size());
  for (Index i = 0; i < c.size(); ++i) range_residual[i] = c[i] / (1.0 + sigma[i] * sigma[i] / alpha);
  const double null_part = (f - decomp.left_vectors() * c).norm();
  s.residual_norm = std::hypot(range_residual.norm(), null_part);
  s.solution_norm = s.u.norm();
  s.alpha = alpha;
  s.path = SolverPath::spectral;
  return s;
}

double functional_value(const LinearOperator& op, const Vector& u, const Vector& f, double alpha) {
  require_positive_alpha(alpha, "functional_value");
  check_data(op, f, "functional_value");
  return (op.apply(u) - f).squaredNorm() + alpha * u.squaredNorm();
}

double apriori_alpha_schedule(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidParameter("apriori_alpha_schedule: delta must be positive, got " + std::to_string(delta));
  return delta;
}

LinearOperator regularized_inverse(const LinearOperator& op, double alpha, const IterativeSolverConfig& cfg) {
  require_positive_alpha(alpha, "regularized_inverse");
  cfg.validate();
  if (op.kind() == OperatorKind::dense) {
    auto factor = std::make_shared<const SpdFactor>(normal_matrix(op.matrix(), alpha));
    return LinearOperator::matrix_free(
        op.domain_dim(), op.range_dim(), [op, factor](const Vector& f) { return factor->solve(op.apply_adjoint(f)); },
        [op, factor](const Vector& h) { return op.apply(factor->solve(h)); });
  }
  return LinearOperator::matrix_free(
      op.domain_dim(), op.range_dim(),
      [op, alpha, cfg](const Vector& f) { return solve_normal_system(op, alpha, op.apply_adjoint(f), cfg); },
      [op, alpha, cfg](const Vector& h) {
        if (h.size() != op.domain_dim()) throw DimensionError("regularized_inverse adjoint: wrong length");
        return op.apply(solve_normal_system(op, alpha, h, cfg));
      });
}

}  // namespace regkit
