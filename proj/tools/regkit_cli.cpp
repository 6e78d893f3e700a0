// regkit: Tikhonov regularization with discrepancy-principle parameter choice.
//
// Exit codes: 0 success, 1 bound violation or I/O failure, 2 usage error,
// 3 precondition violation (data too noisy, no root), 4 numerical non-convergence.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "regkit/discrepancy.hpp"
#include "regkit/errors.hpp"
#include "regkit/experiments.hpp"
#include "regkit/matrix_io.hpp"
#include "regkit/problems.hpp"

namespace {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2, kPrecondition = 3, kNonConvergence = 4 };

// Flat JSON object whose keys are the long flag names: {"problem": "deriv2", "deltas": [0.1, 0.01]}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json doc;
    try {
      input >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config: top level must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar_text(v));
      } else {
        item.inputs.push_back(scalar_text(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  static std::string scalar_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return regkit::format_double(v.get<double>());
    return v.dump();
  }
};

struct Options {
  std::string problem = "diagonal";
  long long n = 8;
  std::vector<long long> ns;
  std::optional<double> p;
  std::optional<double> zeros;
  std::optional<double> alpha;
  std::vector<double> alphas;
  std::optional<double> delta;
  std::vector<double> deltas;
  double C = 1.5;
  std::uint64_t seed = 0;
  std::string rule = "discrepancy";
  std::string path = "primal";
  std::string out;
  std::string format;
  bool timing = false;
  bool sequential = false;
};

regkit::ProblemSpec problem_spec(const Options& o) {
  regkit::ProblemSpec spec{.name = o.problem, .n = static_cast<regkit::Index>(o.n), .params = {}};
  if (o.p) spec.params["p"] = *o.p;
  if (o.zeros) spec.params["zeros"] = *o.zeros;
  return spec;
}

regkit::DiscrepancyConfig discrepancy_config(const Options& o) {
  regkit::DiscrepancyConfig cfg;
  cfg.C = o.C;
  return cfg;
}

// Writes to --out when given, otherwise to stdout.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw regkit::Error("cannot open '" + o.out + "' for writing");
  file << text;
}

void print_summary(const regkit::ExperimentRecord& r) {
  std::printf("problem      %s (n = %lld)\n", r.problem.c_str(), static_cast<long long>(r.n));
  if (r.delta > 0.0) std::printf("delta        %.6e (seed %llu)\n", r.delta, static_cast<unsigned long long>(r.seed));
  if (r.rule == regkit::AlphaRule::discrepancy)
    std::printf("rule         discrepancy, C = %g, target C*delta = %.6e\n", r.C, r.C * r.delta);
  else
    std::printf("rule         %s\n", std::string(regkit::to_string(r.rule)).c_str());
  std::printf("alpha        %.17g\n", r.alpha);
  std::printf("path         %s\n", r.path.c_str());
  std::printf("residual     %.17g\n", r.residual);
  std::printf("error_to_y   %.17g\n", r.error_to_y);
  std::printf("u_norm       %.17g\n", r.u_norm);
  std::printf("y_norm       %.17g\n", r.y_norm);
}

// Single records default to JSON; "text" prints a human-readable summary.
void report_record(const Options& o, const regkit::ExperimentRecord& r) {
  if (o.format.empty() || o.format == "json") {
    emit(o, regkit::record_to_json(r, o.timing) + "\n");
    return;
  }
  if (o.format == "csv") {
    std::ostringstream csv;
    regkit::write_csv(csv, {r}, {.include_timing = o.timing});
    emit(o, csv.str());
    return;
  }
  print_summary(r);
  if (!o.out.empty()) emit(o, regkit::record_to_json(r, o.timing) + "\n");
}

int cmd_solve(const Options& o) {
  if (!o.alpha) throw CLI::RequiredError("--alpha");
  regkit::SolveOptions so;
  so.alpha = *o.alpha;
  so.delta = o.delta.value_or(0.0);
  so.seed = o.seed;
  so.path = o.path == "dual" ? regkit::SolverPath::dual
                             : o.path == "spectral" ? regkit::SolverPath::spectral : regkit::SolverPath::primal;
  const auto problem = regkit::build_problem(problem_spec(o));
  report_record(o, regkit::run_solve(problem, so));
  return kOk;
}

int cmd_choose_alpha(const Options& o) {
  if (!o.delta) throw CLI::RequiredError("--delta");
  const auto problem = regkit::build_problem(problem_spec(o));
  report_record(o, regkit::run_choose_alpha(problem, *o.delta, o.seed, discrepancy_config(o)));
  return kOk;
}

int cmd_sweep(const Options& o) {
  if (o.deltas.empty()) throw CLI::RequiredError("--deltas");
  regkit::SweepOptions so;
  so.deltas = o.deltas;
  so.seed = o.seed;
  so.rule = regkit::parse_alpha_rule(o.rule);
  so.discrepancy = discrepancy_config(o);
  so.parallel = !o.sequential;
  const auto problem = regkit::build_problem(problem_spec(o));
  const auto records = regkit::run_sweep(problem, so);

  if (o.format == "json") {
    emit(o, regkit::records_to_json(records, o.timing) + "\n");
  } else {
    std::ostringstream csv;
    regkit::write_csv(csv, records, {.include_timing = o.timing});
    emit(o, csv.str());
  }
  for (const auto& r : records)
    if (!r.error.empty()) std::fprintf(stderr, "delta %.3e failed: %s\n", r.delta, r.error.c_str());

  const auto s = regkit::summarize_sweep(records);
  std::FILE* sink = o.out.empty() ? stderr : stdout;
  std::fprintf(sink, "summary: rows=%zu failures=%d max_u_norm_over_y_norm=%.17g error_ratio=%.17g\n", records.size(),
               s.failures, s.max_norm_ratio, s.error_ratio);
  return kOk;
}

int cmd_verify_bounds(const Options& o) {
  std::vector<regkit::Index> ns;
  for (long long n : o.ns) ns.push_back(static_cast<regkit::Index>(n));
  if (ns.empty()) ns.push_back(static_cast<regkit::Index>(o.n));
  std::vector<double> alphas = o.alphas;
  if (alphas.empty() && o.alpha) alphas.push_back(*o.alpha);
  if (alphas.empty()) throw CLI::RequiredError("--alphas");

  const auto spec = problem_spec(o);
  const auto rows = regkit::run_verify_bounds(spec.name, spec.params, ns, alphas);
  regkit::write_bounds_table(std::cout, rows);
  if (!o.out.empty()) {
    std::ostringstream csv;
    regkit::write_bounds_csv(csv, rows);
    emit(o, csv.str());
  }
  std::size_t violations = 0;
  for (const auto& r : rows) violations += r.ok ? 0 : 1;
  std::printf("%zu cases, %zu violations of ||(A*A + alpha I)^-1 A*|| <= 1/(2 sqrt(alpha))\n", rows.size(), violations);
  return violations == 0 ? kOk : kFailure;
}

int cmd_list_problems() {
  for (const auto& info : regkit::problem_catalog()) {
    std::printf("%-16s %s", info.name.c_str(), info.summary.c_str());
    for (const auto& [key, value] : info.defaults) std::printf(" [%s=%g]", key.c_str(), value);
    std::printf("\n");
  }
  return kOk;
}

int cmd_export(const Options& o) {
  if (o.out.empty()) throw CLI::RequiredError("--out");
  const auto problem = regkit::build_problem(problem_spec(o));
  regkit::export_problem(problem, o.out + ".mat", o.out + ".json");
  std::printf("wrote %s.mat and %s.json\n", o.out.c_str(), o.out.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regkit: Tikhonov regularization of ill-posed linear problems with discrepancy-principle alpha"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file whose keys are the long flag names");
  app.fallthrough();
  app.require_subcommand(1);

  Options o;
  app.add_option("--problem", o.problem, "catalog problem (see list-problems)")->capture_default_str();
  app.add_option("--n", o.n, "problem size")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--ns", o.ns, "comma-separated sizes (verify-bounds)")->delimiter(',')->check(CLI::PositiveNumber);
  app.add_option("--p", o.p, "diagonal problem: singular value decay exponent");
  app.add_option("--zeros", o.zeros, "diagonal problem: number of trailing zero singular values");
  app.add_option("--alpha", o.alpha, "regularization parameter")->check(CLI::PositiveNumber);
  app.add_option("--alphas", o.alphas, "comma-separated alphas (verify-bounds)")->delimiter(',')->check(CLI::PositiveNumber);
  app.add_option("--delta", o.delta, "noise level ||f_delta - f||")->check(CLI::PositiveNumber);
  app.add_option("--deltas", o.deltas, "comma-separated, strictly decreasing noise levels (sweep)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  app.add_option("--C", o.C, "discrepancy constant C > 1")->capture_default_str();
  app.add_option("--seed", o.seed, "noise seed")->envname("REGKIT_SEED")->capture_default_str();
  app.add_option("--rule", o.rule, "alpha rule for sweep")
      ->check(CLI::IsMember({"discrepancy", "apriori"}))
      ->capture_default_str();
  app.add_option("--path", o.path, "solver path for solve")
      ->check(CLI::IsMember({"primal", "dual", "spectral"}))
      ->capture_default_str();
  app.add_option("--out", o.out, "output path (export: file prefix)");
  app.add_option("--format", o.format, "output format (default: json for solve and choose-alpha, csv for sweep)")->check(CLI::IsMember({"csv", "json", "text"}));
  app.add_flag("--timing", o.timing, "write measured wall_ms instead of 0");
  app.add_flag("--sequential", o.sequential, "run sweep tasks one at a time");

  auto* solve = app.add_subcommand("solve", "Tikhonov solve at fixed --alpha (exact data unless --delta)");
  auto* choose = app.add_subcommand("choose-alpha", "choose alpha by the discrepancy principle for --delta, --seed, --C");
  auto* sweep = app.add_subcommand("sweep", "convergence sweep over --deltas with --rule; CSV output");
  auto* verify = app.add_subcommand("verify-bounds", "check ||(A*A+alpha I)^-1 A*|| <= 1/(2 sqrt(alpha)) over --ns, --alphas");
  auto* list = app.add_subcommand("list-problems", "list the problem catalog");
  auto* exp = app.add_subcommand("export", "write --out.mat (dense text) and --out.json (descriptor)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (o.C <= 1.0) throw regkit::InvalidParameter("--C must be > 1");
    if (solve->parsed()) return cmd_solve(o);
    if (choose->parsed()) return cmd_choose_alpha(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (verify->parsed()) return cmd_verify_bounds(o);
    if (list->parsed()) return cmd_list_problems();
    if (exp->parsed()) return cmd_export(o);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const regkit::DataTooNoisy& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kPrecondition;
  } catch (const regkit::NoRootBelow& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kPrecondition;
  } catch (const regkit::NotInRange& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kPrecondition;
  } catch (const regkit::NonConvergence& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const regkit::InvalidParameter& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const regkit::DimensionError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const regkit::UnsupportedProblem& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const regkit::UnsupportedKind& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
