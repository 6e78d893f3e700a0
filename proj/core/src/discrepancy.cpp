#include "regkit/discrepancy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "regkit/errors.hpp"

namespace regkit {

namespace {

void require_positive_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0)) throw InvalidParameter(std::string(where) + ": alpha must be positive");
}

}  // namespace

void DiscrepancyConfig::validate() const {
  if (!(C > 1.0) || !std::isfinite(C)) throw InvalidParameter("DiscrepancyConfig: C must be > 1, got " + std::to_string(C));
  if (!(alpha_low > 0.0 && alpha_low < alpha_high && std::isfinite(alpha_high)))
    throw InvalidParameter("DiscrepancyConfig: need 0 < alpha_low < alpha_high < inf");
  if (!(root_rel_tolerance > 0.0 && root_rel_tolerance < 1.0))
    throw InvalidParameter("DiscrepancyConfig: root_rel_tolerance must lie in (0, 1)");
  if (max_root_iterations < 1) throw InvalidParameter("DiscrepancyConfig: max_root_iterations must be positive");
  if (max_bracket_expansions < 0) throw InvalidParameter("DiscrepancyConfig: max_bracket_expansions must be >= 0");
  solver.validate();
}

double discrepancy_value(const SpectralDecomposition& decomp, const Vector& f_delta, double alpha) {
  require_positive_alpha(alpha, "discrepancy_value");
  const Vector c = decomp.range_coefficients(f_delta);
  const Vector& sigma = decomp.singular_values();
  double g = (f_delta - decomp.left_vectors() * c).squaredNorm();
  for (Index i = 0; i < c.size(); ++i) {
    const double damped = c[i] / (1.0 + sigma[i] * sigma[i] / alpha);
    g += damped * damped;
  }
  return g;
}

double discrepancy_value(const LinearOperator& op, const Vector& f_delta, double alpha,
                         const IterativeSolverConfig& cfg) {
  require_positive_alpha(alpha, "discrepancy_value");
  const Vector w = solve_range_system(op, alpha, f_delta, cfg);
  return (alpha * w).squaredNorm();
}

AlphaSelection solve_alpha(const std::function<double(double)>& residual, double data_norm, double delta,
                           const DiscrepancyConfig& cfg) {
  cfg.validate();
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidParameter("solve_alpha: delta must be positive (exact data has no discrepancy root)");
  const double target = cfg.C * delta;
  if (!(data_norm > target))
    throw DataTooNoisy("solve_alpha: side condition ||f_delta|| > C*delta violated (||f_delta|| = " +
                           std::to_string(data_norm) + ", C*delta = " + std::to_string(target) + ")",
                       data_norm, target);

  const double tol = cfg.root_rel_tolerance * target;
  AlphaSelection sel;
  auto accept = [&](double alpha, double r) {
    sel.alpha = alpha;
    sel.achieved_residual = r;
    sel.g_value = r * r;
    return sel;
  };

  double a_lo = cfg.alpha_low;
  double r_lo = residual(a_lo);
  for (int k = 0; r_lo >= target; ++k) {
    if (std::abs(r_lo - target) <= tol) return accept(a_lo, r_lo);
    if (k == cfg.max_bracket_expansions)
      throw NoRootBelow("solve_alpha: residual " + std::to_string(r_lo) + " exceeds C*delta = " +
                            std::to_string(target) + " at alpha = " + std::to_string(a_lo) +
                            "; g(0+) = ||P_N(Q) f_delta||^2 should not exceed delta^2, so delta looks understated",
                        a_lo, r_lo * r_lo);
    a_lo /= 10.0;
    r_lo = residual(a_lo);
    ++sel.bracket_expansions;
  }
  double a_hi = cfg.alpha_high;
  double r_hi = residual(a_hi);
  for (int k = 0; r_hi <= target; ++k) {
    if (std::abs(r_hi - target) <= tol) return accept(a_hi, r_hi);
    if (k == cfg.max_bracket_expansions)
      throw DataTooNoisy("solve_alpha: residual stays below C*delta up to alpha = " + std::to_string(a_hi) +
                             "; side condition ||f_delta|| > C*delta is not met numerically",
                         data_norm, target);
    a_hi *= 10.0;
    r_hi = residual(a_hi);
    ++sel.bracket_expansions;
  }
  if (std::abs(r_lo - target) <= tol) return accept(a_lo, r_lo);

  // Illinois regula falsi on phi(x) = log(r(e^x) / target); phi(lo) < 0 < phi(hi).
  double x_lo = std::log(a_lo);
  double x_hi = std::log(a_hi);
  auto phi = [&](double r) { return std::log(r / target); };
  double p_lo = phi(r_lo);
  double p_hi = phi(r_hi);
  int stale_side = 0;  // -1: lo retained last time, +1: hi retained
  double best_alpha = a_lo;
  double best_r = r_lo;
  if (std::abs(r_hi - target) < std::abs(r_lo - target)) {
    best_alpha = a_hi;
    best_r = r_hi;
  }

  for (int it = 1; it <= cfg.max_root_iterations; ++it) {
    sel.iterations = it;
    const double width = x_hi - x_lo;
    double x = 0.5 * (x_lo + x_hi);
    if (std::isfinite(p_lo) && std::isfinite(p_hi)) {
      const double secant = x_lo - p_lo * width / (p_hi - p_lo);
      if (secant > x_lo && secant < x_hi) x = secant;
    }
    if (!(x > x_lo && x < x_hi)) break;  // bracket collapsed to adjacent doubles

    const double a = std::exp(x);
    const double r = residual(a);
    if (std::abs(r - target) < std::abs(best_r - target)) {
      best_alpha = a;
      best_r = r;
    }
    if (std::abs(r - target) <= tol) return accept(a, r);

    if (r < target) {
      x_lo = x;
      p_lo = phi(r);
      if (stale_side == 1) p_hi *= 0.5;
      stale_side = 1;
    } else {
      x_hi = x;
      p_hi = phi(r);
      if (stale_side == -1) p_lo *= 0.5;
      stale_side = -1;
    }
  }
  throw NonConvergence("solve_alpha: discrepancy root not certified to relative tolerance " +
                           std::to_string(cfg.root_rel_tolerance) + " (best alpha " + std::to_string(best_alpha) +
                           ", residual " + std::to_string(best_r) + ", target " + std::to_string(target) + ")",
                       Vector::Constant(1, best_alpha), std::abs(best_r - target) / target);
}

AlphaSelection solve_alpha(const SpectralDecomposition& decomp, const Vector& f_delta, double delta,
                           const DiscrepancyConfig& cfg) {
  return solve_alpha([&](double alpha) { return std::sqrt(discrepancy_value(decomp, f_delta, alpha)); },
                     f_delta.norm(), delta, cfg);
}

AlphaSelection solve_alpha(const LinearOperator& op, const Vector& f_delta, double delta,
                           const DiscrepancyConfig& cfg) {
  if (f_delta.size() != op.range_dim()) throw DimensionError("solve_alpha: data length does not match operator range");
  return solve_alpha([&](double alpha) { return std::sqrt(discrepancy_value(op, f_delta, alpha, cfg.solver)); },
                     f_delta.norm(), delta, cfg);
}

AutoSolution regularized_solve_auto(const SpectralDecomposition& decomp, const LinearOperator& op,
                                    const Vector& f_delta, double delta, const DiscrepancyConfig& cfg) {
  AutoSolution out;
  out.selection = solve_alpha(decomp, f_delta, delta, cfg);
  out.solution = solve_spectral(decomp, op, f_delta, out.selection.alpha);
  return out;
}

AutoSolution regularized_solve_auto(const LinearOperator& op, const Vector& f_delta, double delta,
                                    const DiscrepancyConfig& cfg) {
  AutoSolution out;
  out.selection = solve_alpha(op, f_delta, delta, cfg);
  out.solution = solve_dual(op, f_delta, out.selection.alpha, cfg.solver);
  return out;
}

}  // namespace regkit
