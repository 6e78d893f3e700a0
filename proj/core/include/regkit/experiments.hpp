#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regkit/discrepancy.hpp"
#include "regkit/problems.hpp"
#include "regkit/tikhonov.hpp"

namespace regkit {

struct ProblemSpec {
  std::string name;
  Index n = 0;
  ProblemParams params;
};

/// How alpha was obtained for a record.  Serialized in the CSV `C` column: the numeric C for the
/// discrepancy rule, otherwise the rule name.
enum class AlphaRule { discrepancy, apriori, fixed };

std::string_view to_string(AlphaRule rule);
AlphaRule parse_alpha_rule(std::string_view text);

struct ExperimentRecord {
  std::string problem;
  Index n = 0;
  double delta = 0.0;
  AlphaRule rule = AlphaRule::fixed;
  double C = 0.0;  // meaningful for AlphaRule::discrepancy only
  double alpha = 0.0;
  double residual = 0.0;
  double error_to_y = 0.0;
  double u_norm = 0.0;
  double y_norm = 0.0;
  double wall_ms = 0.0;

  // Extra diagnostics, reported in JSON only.
  std::string path;
  std::uint64_t seed = 0;
  double f_delta_norm = 0.0;
  int iterations = 0;
  int bracket_expansions = 0;
  Vector u;
  /// Empty on success; otherwise the failure message (numeric fields are NaN).
  std::string error;
};

inline constexpr std::string_view kCsvHeader = "problem,n,delta,C,alpha,residual,error_to_y,u_norm,y_norm,wall_ms";

struct CsvOptions {
  /// wall_ms is written as 0 unless enabled, keeping repeated runs byte-identical.
  bool include_timing = false;
};

void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records, const CsvOptions& opts = {});
std::vector<ExperimentRecord> read_csv(std::istream& in);

std::string record_to_json(const ExperimentRecord& record, bool include_timing = false);
std::string records_to_json(const std::vector<ExperimentRecord>& records, bool include_timing = false);

ProblemInstance build_problem(const ProblemSpec& spec);

struct SolveOptions {
  double alpha = 0.0;
  /// 0 = exact data.
  double delta = 0.0;
  std::uint64_t seed = 0;
  SolverPath path = SolverPath::primal;
  IterativeSolverConfig solver{};
};

/// Tikhonov solve at a fixed alpha.
ExperimentRecord run_solve(const ProblemInstance& problem, const SolveOptions& opts);

/// Discrepancy-principle solve on seeded noisy data.
ExperimentRecord run_choose_alpha(const ProblemInstance& problem, double delta, std::uint64_t seed,
                                  const DiscrepancyConfig& cfg = {});

/// Solve at the a-priori alpha(delta) on seeded noisy data.
ExperimentRecord run_apriori(const ProblemInstance& problem, double delta, std::uint64_t seed);

struct SweepOptions {
  std::vector<double> deltas;  // positive, strictly decreasing
  std::uint64_t seed = 0;
  AlphaRule rule = AlphaRule::discrepancy;
  DiscrepancyConfig discrepancy{};
  /// Independent per-delta tasks run concurrently; output order is always deltas' order.
  bool parallel = true;
};

struct SweepSummary {
  double max_norm_ratio = 0.0;  // max ||u_delta|| / ||y|| over successful rows
  double error_ratio = 0.0;     // error(delta_min) / error(delta_max)
  int failures = 0;
};

/// One record per delta.  Per-delta failures are recorded in the row (error set, numbers NaN)
/// and the sweep continues.
std::vector<ExperimentRecord> run_sweep(const ProblemInstance& problem, const SweepOptions& opts);
SweepSummary summarize_sweep(const std::vector<ExperimentRecord>& records);

struct BoundRow {
  Index n = 0;
  double operator_norm = 0.0;
  double alpha = 0.0;
  double bound = 0.0;     // 1/(2 sqrt(alpha))
  double measured = 0.0;  // ||(A*A + alpha I)^{-1} A*||_2
  double margin = 0.0;    // bound - measured
  bool ok = false;
};

/// Relative slack allowed above 1/(2 sqrt(alpha)).
inline constexpr double kBoundSlack = 1e-12;

/// For each n and alpha: measured ||(A*A + alpha I)^{-1} A*||_2 (from the singular system, or by
/// power iteration when the problem has none) against 1/(2 sqrt(alpha)).
std::vector<BoundRow> run_verify_bounds(const std::string& family, const ProblemParams& params,
                                        const std::vector<Index>& ns, const std::vector<double>& alphas);

void write_bounds_table(std::ostream& out, const std::vector<BoundRow>& rows);
void write_bounds_csv(std::ostream& out, const std::vector<BoundRow>& rows);

}  // namespace regkit
