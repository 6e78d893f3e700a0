#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "regkit/linear_operator.hpp"
#include "regkit/spectral.hpp"

namespace regkit {

using ProblemParams = std::map<std::string, double>;

/// Consistent test problem A y = f with y the minimal-norm solution.
struct ProblemInstance {
  std::string name;
  Index n = 0;
  ProblemParams params;
  LinearOperator op;
  Vector y;
  Vector f;
  std::optional<SpectralDecomposition> decomp;
};

/// Noisy data with ||f_delta - f|| = delta up to rounding of the sum.
struct NoisyData {
  Vector f_delta;
  double delta = 0.0;
  std::uint64_t seed = 0;
};

struct ProblemInfo {
  std::string name;
  std::string summary;
  ProblemParams defaults;
};

/// The catalog: diagonal, hilbert, deriv2, phillips, gradient_family.
const std::vector<ProblemInfo>& problem_catalog();

/// Builds a catalog problem of size n (n >= 2; the diagonal problem also accepts n = 1).
///
///   diagonal         A = diag(i^-p) (p = 2), y_i = 1/i; `zeros` trailing singular values set to 0
///   hilbert          A_ij = 1/(i+j-1), y = ones
///   deriv2           midpoint discretization of the Green's function of d^2/dt^2 on [0,1], y = t(1-t)
///   phillips         midpoint discretization of Phillips' convolution equation on [-6,6]
///   gradient_family  (n-1) x n forward differences scaled by n, ||A|| ~ 2n; y = centred cos(pi t)
///
/// y is built first and f := A y.  For dense operators whose numerical rank falls below n, y is
/// projected onto the retained right singular vectors so that it is minimal-norm for the computed
/// decomposition.  Throws UnsupportedProblem for unknown names or sizes beyond kMaxDenseDimension,
/// and InvalidParameter for unknown or out-of-range parameters.
ProblemInstance make_problem(const std::string& name, Index n, const ProblemParams& params = {});

/// f_delta = f + delta * e / ||e|| with e a seeded standard normal vector (random.hpp).
NoisyData add_noise(const ProblemInstance& problem, double delta, std::uint64_t seed);

/// JSON descriptor {"name", "n", "params", "y", "f"}.
std::string problem_descriptor_json(const ProblemInstance& problem);

/// Writes the operator in the dense text format and the JSON descriptor next to it.
void export_problem(const ProblemInstance& problem, const std::string& matrix_path, const std::string& json_path);

}  // namespace regkit
