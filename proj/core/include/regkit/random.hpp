#pragma once

#include <cstdint>
#include <random>

#include "regkit/linear_operator.hpp"

namespace regkit {

/// Seeded generator with a bit-reproducible output stream.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the C++ standard.  Uniforms take the
/// top 53 bits of one engine draw; normals use the Box-Muller transform on two uniforms and return
/// the cosine branch only, so each normal consumes exactly two engine outputs.  The library does
/// not use std::normal_distribution because its algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal.
  double normal();
  /// Vector of n independent standard normals.
  Vector normal_vector(Index n);
  /// Matrix of independent standard normals, filled column by column.
  Matrix normal_matrix(Index rows, Index cols);

 private:
  std::mt19937_64 engine_;
};

}  // namespace regkit
