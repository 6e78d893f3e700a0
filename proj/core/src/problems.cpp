#include "regkit/problems.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include <json.hpp>

#include "regkit/errors.hpp"
#include "regkit/matrix_io.hpp"
#include "regkit/random.hpp"

namespace regkit {

namespace {

ProblemParams merge_params(const ProblemInfo& info, const ProblemParams& given) {
  ProblemParams out = info.defaults;
  for (const auto& [key, value] : given) {
    if (!info.defaults.contains(key))
      throw InvalidParameter("problem '" + info.name + "' has no parameter '" + key + "'");
    out[key] = value;
  }
  return out;
}

ProblemInstance diagonal_problem(Index n, const ProblemParams& params) {
  const double p = params.at("p");
  const double zeros_d = params.at("zeros");
  if (!(p > 0.0)) throw InvalidParameter("diagonal: p must be positive");
  if (!(zeros_d >= 0.0) || zeros_d != std::floor(zeros_d) || zeros_d >= static_cast<double>(n))
    throw InvalidParameter("diagonal: zeros must be an integer in [0, n)");
  const Index zeros = static_cast<Index>(zeros_d);

  Vector sigma(n);
  Vector y(n);
  for (Index i = 0; i < n; ++i) {
    const double k = static_cast<double>(i + 1);
    const bool null = i >= n - zeros;
    sigma[i] = null ? 0.0 : std::pow(k, -p);
    y[i] = null ? 0.0 : 1.0 / k;
  }
  ProblemInstance pi{.name = "diagonal", .n = n, .params = params, .op = LinearOperator::diagonal(sigma),
                     .y = y, .f = sigma.cwiseProduct(y), .decomp = std::nullopt};
  pi.decomp = svd_decompose(pi.op);
  return pi;
}

Matrix hilbert_matrix(Index n) {
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = 1.0 / static_cast<double>(i + j + 1);
  return a;
}

// Green's function of d^2/dt^2 with homogeneous Dirichlet conditions on [0, 1].
double deriv2_kernel(double s, double t) { return s < t ? s * (t - 1.0) : t * (s - 1.0); }

double phillips_bump(double x) { return std::abs(x) < 3.0 ? 1.0 + std::cos(std::numbers::pi * x / 3.0) : 0.0; }

std::pair<Matrix, Vector> deriv2_system(Index n) {
  const double h = 1.0 / static_cast<double>(n);
  Vector t(n);
  for (Index j = 0; j < n; ++j) t[j] = (static_cast<double>(j) + 0.5) * h;
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = h * deriv2_kernel(t[i], t[j]);
  Vector y = t.array() * (1.0 - t.array());
  return {std::move(a), std::move(y)};
}

std::pair<Matrix, Vector> phillips_system(Index n) {
  const double h = 12.0 / static_cast<double>(n);
  Vector t(n);
  for (Index j = 0; j < n; ++j) t[j] = -6.0 + (static_cast<double>(j) + 0.5) * h;
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = h * phillips_bump(t[i] - t[j]);
  Vector y(n);
  for (Index j = 0; j < n; ++j) y[j] = phillips_bump(t[j]);
  return {std::move(a), std::move(y)};
}

std::pair<Matrix, Vector> gradient_system(Index n) {
  const double scale = static_cast<double>(n);
  Matrix a = Matrix::Zero(n - 1, n);
  for (Index i = 0; i + 1 < n; ++i) {
    a(i, i) = -scale;
    a(i, i + 1) = scale;
  }
  // Cell-centred cos(pi t) has zero mean, hence is orthogonal to the constants spanning N(A).
  Vector y(n);
  for (Index j = 0; j < n; ++j) y[j] = std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) / scale);
  y.array() -= y.mean();
  return {std::move(a), std::move(y)};
}

ProblemInstance dense_problem(const std::string& name, Index n, const ProblemParams& params, Matrix a, Vector y) {
  if (std::max(a.rows(), a.cols()) > kMaxDenseDimension)
    throw UnsupportedProblem(name + ": n = " + std::to_string(n) + " exceeds the dense limit " +
                             std::to_string(kMaxDenseDimension));
  LinearOperator op = LinearOperator::dense(std::move(a));
  SpectralDecomposition decomp = svd_decompose(op);
  if (decomp.rank() < op.domain_dim()) {
    const Matrix& v = decomp.right_vectors();
    y = v * (v.transpose() * y);
  }
  Vector f = op.apply(y);
  return ProblemInstance{.name = name, .n = n, .params = params, .op = std::move(op), .y = std::move(y),
                         .f = std::move(f), .decomp = std::move(decomp)};
}

}  // namespace

const std::vector<ProblemInfo>& problem_catalog() {
  static const std::vector<ProblemInfo> catalog = {
      {"diagonal", "A = diag(i^-p), y_i = 1/i; closed-form singular system", {{"p", 2.0}, {"zeros", 0.0}}},
      {"hilbert", "Hilbert matrix A_ij = 1/(i+j-1), y = ones", {}},
      {"deriv2", "first-kind Fredholm equation with the Green's function of d^2/dt^2, y = t(1-t)", {}},
      {"phillips", "Phillips' convolution equation on [-6, 6]", {}},
      {"gradient_family", "(n-1) x n forward differences scaled by n; ||A|| grows like 2n", {}},
  };
  return catalog;
}

ProblemInstance make_problem(const std::string& name, Index n, const ProblemParams& params) {
  const auto& catalog = problem_catalog();
  const auto it = std::find_if(catalog.begin(), catalog.end(), [&](const ProblemInfo& p) { return p.name == name; });
  if (it == catalog.end()) throw UnsupportedProblem("unknown problem '" + name + "'");
  const ProblemParams merged = merge_params(*it, params);

  if (name == "diagonal") {
    if (n < 1) throw InvalidParameter("diagonal: n must be at least 1");
    return diagonal_problem(n, merged);
  }
  if (n < 2) throw InvalidParameter(name + ": n must be at least 2");
  if (n > kMaxDenseDimension)
    throw UnsupportedProblem(name + ": n = " + std::to_string(n) + " exceeds the dense limit " +
                             std::to_string(kMaxDenseDimension));
  if (name == "hilbert") return dense_problem(name, n, merged, hilbert_matrix(n), Vector::Ones(n));
  auto [a, y] = name == "deriv2" ? deriv2_system(n) : name == "phillips" ? phillips_system(n) : gradient_system(n);
  return dense_problem(name, n, merged, std::move(a), std::move(y));
}

NoisyData add_noise(const ProblemInstance& problem, double delta, std::uint64_t seed) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw InvalidParameter("add_noise: delta must be positive, got " + std::to_string(delta));
  Rng rng(seed);
  Vector e = rng.normal_vector(problem.f.size());
  const double norm = e.norm();
  return NoisyData{.f_delta = problem.f + (delta / norm) * e, .delta = delta, .seed = seed};
}

std::string problem_descriptor_json(const ProblemInstance& problem) {
  nlohmann::ordered_json j;
  j["name"] = problem.name;
  j["n"] = problem.n;
  j["params"] = problem.params;
  j["y"] = std::vector<double>(problem.y.data(), problem.y.data() + problem.y.size());
  j["f"] = std::vector<double>(problem.f.data(), problem.f.data() + problem.f.size());
  return j.dump(2);
}

void export_problem(const ProblemInstance& problem, const std::string& matrix_path, const std::string& json_path) {
  save_dense_text(matrix_path, problem.op.to_dense());
  std::ofstream out(json_path);
  if (!out) throw Error("cannot open '" + json_path + "' for writing");
  out << problem_descriptor_json(problem) << '\n';
}

}  // namespace regkit
