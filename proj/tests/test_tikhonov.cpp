#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "regkit/errors.hpp"
#include "regkit/problems.hpp"
#include "regkit/tikhonov.hpp"

using namespace regkit;

namespace {

Vector v(std::initializer_list<double> xs) {
  Vector out(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

LinearOperator as_matrix_free(const Matrix& a) {
  return LinearOperator::matrix_free(
      a.rows(), a.cols(), [a](const Vector& x) { return Vector(a * x); },
      [a](const Vector& w) { return Vector(a.transpose() * w); });
}

}  // namespace

TEST_CASE("scalar and identity examples") {
  const auto id = LinearOperator::identity(2);
  for (auto solve : {&solve_primal, &solve_dual}) {
    const auto s = solve(id, v({2, 0}), 1.0, {});
    CHECK(oracle::rel_diff(s.u, v({1, 0})) <= 1e-15);
    const auto scalar = solve(LinearOperator::diagonal(v({3})), v({3}), 1.0, {});
    CHECK(scalar.u[0] == doctest::Approx(0.9).epsilon(1e-15));
  }
  const auto d3 = LinearOperator::diagonal(v({3}));
  CHECK(solve_spectral(svd_decompose(d3), d3, v({3}), 1.0).u[0] == doctest::Approx(0.9).epsilon(1e-15));

  const auto null_data = solve_dual(LinearOperator::diagonal(v({1, 0})), v({0, 5}), 0.3);
  CHECK(null_data.u.norm() == 0.0);

  const auto one = LinearOperator::diagonal(v({1}));
  CHECK(solve_spectral(svd_decompose(one), v({1}), 1.0).u[0] == 0.5);
}

TEST_CASE("zero data and zero operator") {
  Rng rng(1);
  const auto op = LinearOperator::dense(rng.normal_matrix(6, 4));
  CHECK(solve_primal(op, Vector::Zero(6), 0.7).u.norm() == 0.0);
  CHECK(solve_dual(op, Vector::Zero(6), 0.7).u.norm() == 0.0);
  const auto zero = LinearOperator::dense(Matrix::Zero(3, 2));
  const auto d = svd_decompose(zero);
  CHECK(d.rank() == 0);
  const auto s = solve_spectral(d, zero, v({1, 2, 3}), 0.5);
  CHECK(s.u.norm() == 0.0);
  CHECK(s.residual_norm == doctest::Approx(std::sqrt(14.0)));
}

TEST_CASE("invalid alpha is rejected on every path") {
  const auto op = LinearOperator::identity(2);
  const auto d = svd_decompose(op);
  for (double alpha : {0.0, -1.0}) {
    CHECK_THROWS_AS(solve_primal(op, v({1, 1}), alpha), InvalidParameter);
    CHECK_THROWS_AS(solve_dual(op, v({1, 1}), alpha), InvalidParameter);
    CHECK_THROWS_AS(solve_spectral(d, v({1, 1}), alpha), InvalidParameter);
    CHECK_THROWS_AS(functional_value(op, v({1, 1}), v({1, 1}), alpha), InvalidParameter);
  }
  CHECK_THROWS_AS(solve_primal(op, v({1, 1, 1}), 1.0), DimensionError);
  CHECK_THROWS_AS(apriori_alpha_schedule(0.0), InvalidParameter);
}

TEST_CASE("functional value") {
  const auto id = LinearOperator::identity(2);
  CHECK(functional_value(id, Vector::Zero(2), v({3, 4}), 2.0) == 25.0);
  CHECK(functional_value(id, v({3, 4}), v({3, 4}), 1.0) == 25.0);
  CHECK(functional_value(LinearOperator::diagonal(v({3})), v({0.9}), v({3}), 1.0) == doctest::Approx(0.90).epsilon(1e-14));
}

TEST_CASE("a-priori schedule") {
  CHECK(apriori_alpha_schedule(1e-2) == 1e-2);
  CHECK(apriori_alpha_schedule(1.0) == 1.0);
  const double a = apriori_alpha_schedule(1e-8);
  CHECK(a == 1e-8);
  CHECK(1e-8 / (2.0 * std::sqrt(a)) == doctest::Approx(5e-5).epsilon(1e-12));
}

TEST_CASE("paths agree with the stacked least-squares oracle") {
  Rng rng(314);
  for (int trial = 0; trial < 8; ++trial) {
    const Index m = 5 + 4 * trial;
    const Index n = 3 + 3 * trial;
    const Matrix a = rng.normal_matrix(m, n);
    const Vector f = rng.normal_vector(m);
    const auto op = LinearOperator::dense(a);
    const auto d = svd_decompose(op);
    for (double alpha : {1e-4, 1e-2, 1.0, 10.0}) {
      const Vector ref = oracle::stacked_tikhonov(a, f, alpha);
      CHECK(oracle::rel_diff(solve_primal(op, f, alpha).u, ref) <= 1e-10);
      CHECK(oracle::rel_diff(solve_dual(op, f, alpha).u, ref) <= 1e-10);
      CHECK(oracle::rel_diff(solve_spectral(d, op, f, alpha).u, ref) <= 1e-10);
      CHECK(oracle::rel_diff(solve_spectral(d, f, alpha).residual_norm, (a * ref - f).norm()) <= 1e-10);
    }
  }
}

TEST_CASE("hilbert 4x4 spectral solve matches the dense direct solve") {
  const Matrix h = oracle::hilbert(4);
  const auto op = LinearOperator::dense(h);
  const Vector y = Vector::Ones(4);
  const Vector f = h * y;
  const Vector direct = (h.transpose() * h + 1e-3 * Matrix::Identity(4, 4)).ldlt().solve(h.transpose() * f);
  const auto s = solve_spectral(svd_decompose(op), op, f, 1e-3);
  CHECK(oracle::rel_diff(s.u, direct) <= 1e-10);
  CHECK((s.u - y).norm() == doctest::Approx((direct - y).norm()).epsilon(1e-8));
}

TEST_CASE("conjugate gradients agree with the direct solve") {
  Rng rng(8);
  const Matrix a = rng.normal_matrix(25, 18);
  const Vector f = rng.normal_vector(25);
  const auto mf = as_matrix_free(a);
  const auto dense = LinearOperator::dense(a);
  for (double alpha : {1e-2, 1.0}) {
    const auto p = solve_primal(mf, f, alpha);
    const auto q = solve_dual(mf, f, alpha);
    CHECK(p.iterations > 0);
    CHECK(q.iterations > 0);
    CHECK(oracle::rel_diff(p.u, solve_primal(dense, f, alpha).u) <= 1e-10);
    CHECK(oracle::rel_diff(q.u, solve_dual(dense, f, alpha).u) <= 1e-10);
  }

  IterativeSolverConfig tiny;
  tiny.max_iterations = 2;
  try {
    (void)solve_primal(as_matrix_free(oracle::hilbert(8)), Vector::Ones(8), 1e-8, tiny);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.last_iterate().size() == 8);
    CHECK(e.achieved() > tiny.rel_tolerance);
  }
}

TEST_CASE("the minimizer is global") {
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix a = rng.normal_matrix(12, 9);
    const Vector f = rng.normal_vector(12);
    const auto op = LinearOperator::dense(a);
    const double alpha = 0.05;
    const auto s = solve_primal(op, f, alpha);
    const double f0 = functional_value(op, s.u, f, alpha);
    for (int k = 0; k < 20; ++k) {
      const Vector h = rng.normal_vector(9) * 0.1;
      const double predicted = (a * h).squaredNorm() + alpha * h.squaredNorm();
      const double gain = functional_value(op, s.u + h, f, alpha) - f0;
      CHECK(std::abs(gain - predicted) <= 1e-9 * f0);
      CHECK(gain >= 0.0);
    }
  }
}

TEST_CASE("exact-data error identity and convergence") {
  const auto problem = make_problem("diagonal", 16);
  double previous = INFINITY;
  for (int k = 0; k <= 12; ++k) {
    const double alpha = std::pow(10.0, -k);
    const auto s = solve_primal(problem.op, problem.f, alpha);
    const Vector bias = alpha * solve_normal_system(problem.op, alpha, problem.y);
    if (alpha >= 1e-4) CHECK(((s.u - problem.y) + bias).norm() <= 1e-10 * problem.y.norm());
    const double err = (s.u - problem.y).norm();
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous <= 1e-6 * problem.y.norm());
}

TEST_CASE("norm bound of the regularized inverse") {
  const auto problem = make_problem("gradient_family", 32);
  for (double alpha : {1e-4, 1e-2, 1.0}) {
    Rng rng(5);
    for (int k = 0; k < 10; ++k) {
      const Vector f = rng.normal_vector(problem.op.range_dim());
      const auto s = solve_primal(problem.op, f, alpha);
      CHECK(s.solution_norm <= f.norm() / (2.0 * std::sqrt(alpha)) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("regularized_inverse exposes the solve and its adjoint") {
  Rng rng(13);
  const Matrix a = rng.normal_matrix(9, 6);
  const auto op = LinearOperator::dense(a);
  const auto r = regularized_inverse(op, 0.2);
  CHECK(r.domain_dim() == 9);
  CHECK(r.range_dim() == 6);
  const Vector f = rng.normal_vector(9);
  const Vector x = rng.normal_vector(6);
  CHECK(oracle::rel_diff(r.apply(f), oracle::stacked_tikhonov(a, f, 0.2)) <= 1e-12);
  CHECK(std::abs(r.apply(f).dot(x) - f.dot(r.apply_adjoint(x))) <= 1e-12 * f.norm() * x.norm());
}
