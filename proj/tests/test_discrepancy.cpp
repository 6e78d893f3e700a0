#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "regkit/discrepancy.hpp"
#include "regkit/errors.hpp"
#include "regkit/problems.hpp"

using namespace regkit;

namespace {

Vector v(std::initializer_list<double> xs) {
  Vector out(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

DiscrepancyConfig with_C(double C, double tol = 1e-10) {
  DiscrepancyConfig cfg;
  cfg.C = C;
  cfg.root_rel_tolerance = tol;
  return cfg;
}

}  // namespace

TEST_CASE("discrepancy value examples") {
  const auto one = LinearOperator::diagonal(v({1}));
  const auto d = svd_decompose(one);
  CHECK(discrepancy_value(d, v({1}), 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(discrepancy_value(one, v({1}), 1.0) == doctest::Approx(0.25).epsilon(1e-15));

  const auto d10 = svd_decompose(LinearOperator::diagonal(v({1, 0})));
  for (double alpha : {1e-8, 1e-2, 1.0, 1e6}) CHECK(discrepancy_value(d10, v({0, 3}), alpha) == 9.0);

  Rng rng(3);
  const Matrix a = rng.normal_matrix(8, 5);
  const Vector f = rng.normal_vector(8);
  const auto da = svd_decompose(LinearOperator::dense(a));
  CHECK(discrepancy_value(da, f, 1e14) == doctest::Approx(f.squaredNorm()).epsilon(1e-12));
  CHECK_THROWS_AS(discrepancy_value(da, f, 0.0), InvalidParameter);
}

TEST_CASE("spectral and operator forms agree with a direct residual") {
  Rng rng(21);
  const Matrix a = rng.normal_matrix(14, 9);
  const Vector f = rng.normal_vector(14);
  const auto op = LinearOperator::dense(a);
  const auto d = svd_decompose(op);
  for (int k = -6; k <= 4; ++k) {
    const double alpha = std::pow(10.0, k);
    const double direct = (a * oracle::stacked_tikhonov(a, f, alpha) - f).squaredNorm();
    CHECK(oracle::rel_diff(discrepancy_value(d, f, alpha), direct) <= 1e-10);
    CHECK(oracle::rel_diff(discrepancy_value(op, f, alpha), direct) <= 1e-10);
  }
}

TEST_CASE("g is nondecreasing and bounded by the data norm") {
  for (const std::string name : {"hilbert", "deriv2", "phillips"}) {
    const auto problem = make_problem(name, 32);
    const auto noisy = add_noise(problem, 1e-3, 9);
    double prev = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double alpha = std::pow(10.0, -14.0 + 28.0 * k / 49.0);
      const double g = discrepancy_value(*problem.decomp, noisy.f_delta, alpha);
      CHECK(g >= prev);
      CHECK(g <= noisy.f_delta.squaredNorm() * (1.0 + 1e-14));
      prev = g;
    }
  }
}

TEST_CASE("scalar roots have closed forms") {
  const auto one = LinearOperator::diagonal(v({1}));
  const auto d = svd_decompose(one);
  // Residual alpha/(1+alpha) = C delta.
  const auto a = solve_alpha(d, v({1}), 0.1, with_C(1.0 + 1e-9, 1e-13));
  CHECK(a.alpha == doctest::Approx(0.1 * (1.0 + 1e-9) / (1.0 - 0.1 * (1.0 + 1e-9))).epsilon(1e-10));

  const auto half = solve_alpha(d, v({1}), 0.25, with_C(2.0, 1e-13));
  CHECK(half.alpha == doctest::Approx(1.0).epsilon(1e-10));

  const auto ninth = solve_alpha(one, v({1}), 0.05, with_C(2.0, 1e-13));
  CHECK(ninth.alpha == doctest::Approx(1.0 / 9.0).epsilon(1e-10));
  CHECK(ninth.achieved_residual == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("precondition errors") {
  const auto d = svd_decompose(LinearOperator::diagonal(v({1})));
  try {
    (void)solve_alpha(d, v({0.1}), 0.1, with_C(1.5));
    FAIL("expected DataTooNoisy");
  } catch (const DataTooNoisy& e) {
    CHECK(std::string(e.what()).find("||f_delta|| > C*delta") != std::string::npos);
    CHECK(e.data_norm() == doctest::Approx(0.1));
    CHECK(e.target() == doctest::Approx(0.15));
  }

  // f entirely in N(Q): g is constant, so no spurious alpha is produced.
  const auto d10 = svd_decompose(LinearOperator::diagonal(v({1, 0})));
  CHECK_THROWS_AS(solve_alpha(d10, v({0, 1}), 0.1, with_C(1.5)), NoRootBelow);
  CHECK_THROWS_AS(solve_alpha(d10, v({0, 0.1}), 0.1, with_C(1.5)), DataTooNoisy);

  // Understated noise: ||P_N f|| = 0.5 > C delta.
  try {
    (void)solve_alpha(d10, v({1, 0.5}), 0.1, with_C(1.5));
    FAIL("expected NoRootBelow");
  } catch (const NoRootBelow& e) {
    CHECK(e.g_low() == doctest::Approx(0.25).epsilon(1e-6));
  }

  DiscrepancyConfig bad;
  bad.C = 1.0;
  CHECK_THROWS_AS(solve_alpha(d, v({1}), 0.1, bad), InvalidParameter);
  CHECK_THROWS_AS(solve_alpha(d, v({1}), 0.0), InvalidParameter);
}

TEST_CASE("root certificate against a bisection oracle") {
  for (const std::string name : {"diagonal", "deriv2", "phillips"}) {
    const auto problem = make_problem(name, 64);
    for (double delta : {1e-2, 1e-3}) {
      const auto noisy = add_noise(problem, delta, 4);
      const double target = 1.5 * delta;
      const auto sel = solve_alpha(*problem.decomp, noisy.f_delta, delta);
      CHECK(std::abs(sel.achieved_residual - target) <= 1e-8 * target);
      const double ref = oracle::bisect_log(
          [&](double alpha) { return std::sqrt(discrepancy_value(*problem.decomp, noisy.f_delta, alpha)) - target; },
          1e-16, 1e16);
      CHECK(oracle::rel_diff(sel.alpha, ref) <= 1e-6);
      CHECK(discrepancy_value(*problem.decomp, noisy.f_delta, sel.alpha / 2) < target * target);
      CHECK(discrepancy_value(*problem.decomp, noisy.f_delta, sel.alpha * 2) > target * target);

      const auto op_sel = solve_alpha(problem.op, noisy.f_delta, delta);
      CHECK(std::abs(op_sel.achieved_residual - target) <= 1e-8 * target);
    }
  }
}

TEST_CASE("bracket expansion reaches roots outside the initial bracket") {
  const auto d = svd_decompose(LinearOperator::diagonal(v({1})));
  DiscrepancyConfig cfg = with_C(1.5);
  cfg.alpha_low = 1.0;
  cfg.alpha_high = 2.0;
  const auto sel = solve_alpha(d, v({1}), 1e-4, cfg);
  CHECK(sel.bracket_expansions > 0);
  CHECK(std::abs(sel.achieved_residual - 1.5e-4) <= 1e-10 * 1.5e-4);

  cfg.max_bracket_expansions = 1;
  CHECK_THROWS_AS(solve_alpha(d, v({1}), 1e-4, cfg), NoRootBelow);
}

TEST_CASE("generic residual callback") {
  const auto sel = solve_alpha([](double alpha) { return alpha / (1.0 + alpha); }, 1.0, 0.05, with_C(2.0, 1e-13));
  CHECK(sel.alpha == doctest::Approx(1.0 / 9.0).epsilon(1e-10));
}

TEST_CASE("regularized_solve_auto") {
  const auto one = LinearOperator::diagonal(v({1}));
  const auto d = svd_decompose(one);
  const Vector f_delta = v({1.05});
  const auto cfg = with_C(1.5, 1e-13);
  // Residual alpha/(1+alpha) * 1.05 = 0.075.
  const double r = 0.075 / 1.05;
  const double closed = r / (1.0 - r);
  for (const auto& sol : {regularized_solve_auto(d, one, f_delta, 0.05, cfg), regularized_solve_auto(one, f_delta, 0.05, cfg)}) {
    CHECK(sol.selection.alpha == doctest::Approx(closed).epsilon(1e-10));
    CHECK(sol.solution.solution_norm <= 1.0);
    CHECK(sol.solution.alpha == sol.selection.alpha);
  }

  SUBCASE("error shrinks with the noise level") {
    const auto problem = make_problem("diagonal", 32);
    double previous = INFINITY;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
      const auto noisy = add_noise(problem, delta, 17);
      const auto sol = regularized_solve_auto(*problem.decomp, problem.op, noisy.f_delta, delta);
      const double err = (sol.solution.u - problem.y).norm();
      CHECK(err < previous);
      CHECK(sol.solution.solution_norm <= problem.y.norm() * (1.0 + 1e-10));
      previous = err;
    }
  }
}
