#pragma once

#include <iosfwd>
#include <string>

#include "regkit/linear_operator.hpp"

namespace regkit {

/// Plain-text dense matrix format:
///
///     rows cols
///     a11 a12 ... a1n
///     ...
///
/// Entries are whitespace separated and written with 17 significant digits, so a write/read
/// cycle reproduces every double bit for bit.
void write_dense_text(std::ostream& out, const Matrix& a);
Matrix read_dense_text(std::istream& in);

void save_dense_text(const std::string& path, const Matrix& a);
Matrix load_dense_text(const std::string& path);

/// Shortest-round-trip-safe decimal form (%.17g).
std::string format_double(double x);

}  // namespace regkit
