#include "regkit/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <charconv>

#include <json.hpp>

#include "regkit/errors.hpp"
#include "regkit/matrix_io.hpp"

namespace regkit {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ExperimentRecord base_record(const ProblemInstance& problem, double delta, AlphaRule rule, double c) {
  ExperimentRecord r;
  r.problem = problem.name;
  r.n = problem.n;
  r.delta = delta;
  r.rule = rule;
  r.C = c;
  r.y_norm = problem.y.norm();
  return r;
}

void fill_solution(ExperimentRecord& r, const ProblemInstance& problem, const RegularizedSolution& s) {
  r.alpha = s.alpha;
  r.residual = s.residual_norm;
  r.error_to_y = (s.u - problem.y).norm();
  r.u_norm = s.solution_norm;
  r.path = std::string(to_string(s.path));
  r.iterations = s.iterations;
  r.u = s.u;
}

void mark_failed(ExperimentRecord& r, const std::string& message) {
  r.alpha = r.residual = r.error_to_y = r.u_norm = kNaN;
  r.error = message;
}

double parse_number(std::string_view token) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw DimensionError("CSV: bad number '" + std::string(token) + "'");
  return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

nlohmann::ordered_json record_json(const ExperimentRecord& r, bool include_timing) {
  nlohmann::ordered_json j;
  j["problem"] = r.problem;
  j["n"] = r.n;
  j["delta"] = r.delta;
  if (r.rule == AlphaRule::discrepancy)
    j["C"] = r.C;
  else
    j["C"] = to_string(r.rule);
  j["alpha"] = r.alpha;
  j["residual"] = r.residual;
  j["error_to_y"] = r.error_to_y;
  j["u_norm"] = r.u_norm;
  j["y_norm"] = r.y_norm;
  j["wall_ms"] = include_timing ? r.wall_ms : 0.0;
  j["rule"] = to_string(r.rule);
  j["path"] = r.path;
  j["seed"] = r.seed;
  j["f_delta_norm"] = r.f_delta_norm;
  j["iterations"] = r.iterations;
  j["bracket_expansions"] = r.bracket_expansions;
  j["u"] = std::vector<double>(r.u.data(), r.u.data() + r.u.size());
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace

std::string_view to_string(AlphaRule rule) {
  switch (rule) {
    case AlphaRule::discrepancy: return "discrepancy";
    case AlphaRule::apriori: return "apriori";
    case AlphaRule::fixed: return "fixed";
  }
  return "unknown";
}

AlphaRule parse_alpha_rule(std::string_view text) {
  if (text == "discrepancy") return AlphaRule::discrepancy;
  if (text == "apriori") return AlphaRule::apriori;
  if (text == "fixed") return AlphaRule::fixed;
  throw InvalidParameter("unknown alpha rule '" + std::string(text) + "'");
}

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records, const CsvOptions& opts) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.problem << ',' << r.n << ',' << format_double(r.delta) << ','
        << (r.rule == AlphaRule::discrepancy ? format_double(r.C) : std::string(to_string(r.rule))) << ','
        << format_double(r.alpha) << ',' << format_double(r.residual) << ',' << format_double(r.error_to_y) << ','
        << format_double(r.u_norm) << ',' << format_double(r.y_norm) << ','
        << format_double(opts.include_timing ? r.wall_ms : 0.0) << '\n';
  }
}

std::vector<ExperimentRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw DimensionError("CSV: missing or unexpected header");
  std::vector<ExperimentRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != 10) throw DimensionError("CSV: expected 10 fields, got " + std::to_string(fields.size()));
    ExperimentRecord r;
    r.problem = std::string(fields[0]);
    r.n = static_cast<Index>(parse_number(fields[1]));
    r.delta = parse_number(fields[2]);
    if (fields[3] == "apriori" || fields[3] == "fixed") {
      r.rule = parse_alpha_rule(fields[3]);
    } else {
      r.rule = AlphaRule::discrepancy;
      r.C = parse_number(fields[3]);
    }
    r.alpha = parse_number(fields[4]);
    r.residual = parse_number(fields[5]);
    r.error_to_y = parse_number(fields[6]);
    r.u_norm = parse_number(fields[7]);
    r.y_norm = parse_number(fields[8]);
    r.wall_ms = parse_number(fields[9]);
    records.push_back(std::move(r));
  }
  return records;
}

std::string record_to_json(const ExperimentRecord& record, bool include_timing) {
  return record_json(record, include_timing).dump(2);
}

std::string records_to_json(const std::vector<ExperimentRecord>& records, bool include_timing) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) arr.push_back(record_json(r, include_timing));
  return arr.dump(2);
}

ProblemInstance build_problem(const ProblemSpec& spec) { return make_problem(spec.name, spec.n, spec.params); }

ExperimentRecord run_solve(const ProblemInstance& problem, const SolveOptions& opts) {
  const auto start = Clock::now();
  ExperimentRecord r = base_record(problem, opts.delta, AlphaRule::fixed, 0.0);
  Vector data = problem.f;
  if (opts.delta > 0.0) {
    data = add_noise(problem, opts.delta, opts.seed).f_delta;
    r.seed = opts.seed;
  } else if (opts.delta < 0.0) {
    throw InvalidParameter("solve: delta must be nonnegative");
  }
  r.f_delta_norm = data.norm();

  RegularizedSolution s;
  switch (opts.path) {
    case SolverPath::primal: s = solve_primal(problem.op, data, opts.alpha, opts.solver); break;
    case SolverPath::dual: s = solve_dual(problem.op, data, opts.alpha, opts.solver); break;
    case SolverPath::spectral:
      if (!problem.decomp) throw UnsupportedKind("solve: spectral path needs a decomposed operator");
      s = solve_spectral(*problem.decomp, problem.op, data, opts.alpha);
      break;
  }
  fill_solution(r, problem, s);
  r.wall_ms = elapsed_ms(start);
  return r;
}

ExperimentRecord run_choose_alpha(const ProblemInstance& problem, double delta, std::uint64_t seed,
                                  const DiscrepancyConfig& cfg) {
  const auto start = Clock::now();
  ExperimentRecord r = base_record(problem, delta, AlphaRule::discrepancy, cfg.C);
  r.seed = seed;
  const NoisyData noisy = add_noise(problem, delta, seed);
  r.f_delta_norm = noisy.f_delta.norm();
  const AutoSolution result = problem.decomp
                                  ? regularized_solve_auto(*problem.decomp, problem.op, noisy.f_delta, delta, cfg)
                                  : regularized_solve_auto(problem.op, noisy.f_delta, delta, cfg);
  fill_solution(r, problem, result.solution);
  r.iterations = result.selection.iterations;
  r.bracket_expansions = result.selection.bracket_expansions;
  r.wall_ms = elapsed_ms(start);
  return r;
}

ExperimentRecord run_apriori(const ProblemInstance& problem, double delta, std::uint64_t seed) {
  const auto start = Clock::now();
  ExperimentRecord r = base_record(problem, delta, AlphaRule::apriori, 0.0);
  r.seed = seed;
  const NoisyData noisy = add_noise(problem, delta, seed);
  r.f_delta_norm = noisy.f_delta.norm();
  const double alpha = apriori_alpha_schedule(delta);
  const RegularizedSolution s = problem.decomp ? solve_spectral(*problem.decomp, problem.op, noisy.f_delta, alpha)
                                               : solve_primal(problem.op, noisy.f_delta, alpha);
  fill_solution(r, problem, s);
  r.wall_ms = elapsed_ms(start);
  return r;
}

std::vector<ExperimentRecord> run_sweep(const ProblemInstance& problem, const SweepOptions& opts) {
  if (opts.deltas.empty()) throw InvalidParameter("sweep: need at least one delta");
  for (std::size_t i = 0; i < opts.deltas.size(); ++i) {
    if (!(opts.deltas[i] > 0.0)) throw InvalidParameter("sweep: every delta must be positive");
    if (i > 0 && !(opts.deltas[i] < opts.deltas[i - 1]))
      throw InvalidParameter("sweep: deltas must be strictly decreasing");
  }
  if (opts.rule == AlphaRule::fixed) throw InvalidParameter("sweep: rule must be discrepancy or apriori");
  if (opts.rule == AlphaRule::discrepancy) opts.discrepancy.validate();

  auto task = [&problem, &opts](double delta) {
    try {
      return opts.rule == AlphaRule::discrepancy ? run_choose_alpha(problem, delta, opts.seed, opts.discrepancy)
                                                 : run_apriori(problem, delta, opts.seed);
    } catch (const Error& e) {
      ExperimentRecord r = base_record(problem, delta, opts.rule, opts.discrepancy.C);
      r.seed = opts.seed;
      mark_failed(r, e.what());
      return r;
    }
  };

  std::vector<ExperimentRecord> records;
  records.reserve(opts.deltas.size());
  if (opts.parallel) {
    std::vector<std::future<ExperimentRecord>> pending;
    for (double delta : opts.deltas) pending.push_back(std::async(std::launch::async, task, delta));
    for (auto& f : pending) records.push_back(f.get());
  } else {
    for (double delta : opts.deltas) records.push_back(task(delta));
  }
  return records;
}

SweepSummary summarize_sweep(const std::vector<ExperimentRecord>& records) {
  SweepSummary s;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++s.failures;
      continue;
    }
    s.max_norm_ratio = std::max(s.max_norm_ratio, r.u_norm / r.y_norm);
  }
  s.error_ratio = records.empty() ? kNaN : records.back().error_to_y / records.front().error_to_y;
  return s;
}

std::vector<BoundRow> run_verify_bounds(const std::string& family, const ProblemParams& params,
                                        const std::vector<Index>& ns, const std::vector<double>& alphas) {
  if (ns.empty() || alphas.empty()) throw InvalidParameter("verify-bounds: need at least one n and one alpha");
  for (double a : alphas)
    if (!(a > 0.0)) throw InvalidParameter("verify-bounds: alpha must be positive");

  std::vector<BoundRow> rows;
  for (Index n : ns) {
    const ProblemInstance problem = make_problem(family, n, params);
    const double norm = problem.decomp ? (problem.decomp->rank() > 0 ? problem.decomp->singular_values()[0] : 0.0)
                                       : operator_norm_estimate(problem.op);
    for (double alpha : alphas) {
      BoundRow row;
      row.n = n;
      row.operator_norm = norm;
      row.alpha = alpha;
      row.bound = 1.0 / (2.0 * std::sqrt(alpha));
      row.measured = problem.decomp ? regularized_inverse_norm(*problem.decomp, alpha)
                                    : operator_norm_estimate(regularized_inverse(problem.op, alpha));
      row.margin = row.bound - row.measured;
      row.ok = row.measured <= row.bound * (1.0 + kBoundSlack);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bounds_table(std::ostream& out, const std::vector<BoundRow>& rows) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%8s %14s %10s %14s %14s %14s %s\n", "n", "norm_A", "alpha", "bound", "measured",
                "margin", "status");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%8lld %14.6e %10.3e %14.8e %14.8e %14.6e %s\n", static_cast<long long>(r.n),
                  r.operator_norm, r.alpha, r.bound, r.measured, r.margin, r.ok ? "ok" : "VIOLATION");
    out << buf;
  }
}

void write_bounds_csv(std::ostream& out, const std::vector<BoundRow>& rows) {
  out << "n,norm_A,alpha,bound,measured,margin,ok\n";
  for (const auto& r : rows)
    out << r.n << ',' << format_double(r.operator_norm) << ',' << format_double(r.alpha) << ','
        << format_double(r.bound) << ',' << format_double(r.measured) << ',' << format_double(r.margin) << ','
        << (r.ok ? 1 : 0) << '\n';
}

}  // namespace regkit
