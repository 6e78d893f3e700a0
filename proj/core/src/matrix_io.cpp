#include "regkit/matrix_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "regkit/errors.hpp"

namespace regkit {

std::string format_double(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_dense_text(std::ostream& out, const Matrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(a(i, j));
    }
    out << '\n';
  }
}

Matrix read_dense_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DimensionError("read_dense_text: missing header line");
  std::istringstream hs(header);
  long long rows = 0;
  long long cols = 0;
  if (!(hs >> rows >> cols) || rows < 1 || cols < 1)
    throw DimensionError("read_dense_text: header must be 'rows cols' with positive sizes");

  Matrix a(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw DimensionError("read_dense_text: expected " + std::to_string(rows) + " rows");
    std::istringstream ls(line);
    for (long long j = 0; j < cols; ++j) {
      std::string token;
      if (!(ls >> token))
        throw DimensionError("read_dense_text: row " + std::to_string(i + 1) + " has fewer than " +
                             std::to_string(cols) + " entries");
      double value = 0.0;
      const char* end = token.data() + token.size();
      const auto [ptr, ec] = std::from_chars(token.data(), end, value);
      if (ec != std::errc() || ptr != end) throw DimensionError("read_dense_text: bad number '" + token + "'");
      a(i, j) = value;
    }
    std::string extra;
    if (ls >> extra) throw DimensionError("read_dense_text: row " + std::to_string(i + 1) + " has extra entries");
  }
  return a;
}

void save_dense_text(const std::string& path, const Matrix& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_dense_text(out, a);
}

Matrix load_dense_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return read_dense_text(in);
}

}  // namespace regkit
