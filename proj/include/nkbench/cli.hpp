#ifndef NKBENCH_CLI_HPP
#define NKBENCH_CLI_HPP

// Command-line front end. Exit codes: 0 success, 2 invalid input,
// 3 resource limit, 4 internal invariant violation.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nkbench/exact.hpp"
#include "nkbench/harness.hpp"
#include "nkbench/io.hpp"
#include "nkbench/nk.hpp"
#include "nkbench/sweep_config.hpp"

namespace nkbench::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kResourceLimit = 3, kInternalError = 4 };

/// Environment variable naming the default sweep output directory.
inline constexpr const char* kOutputDirEnv = "NKBENCH_OUTPUT_DIR";

inline void cmd_generate(std::size_t n, std::size_t k, std::uint64_t seed, const std::filesystem::path& out) {
  io::write_file_atomic(out, to_json(generate_instance(n, k, seed)).dump(1) + "\n");
}

inline NkInstance load_instance(const std::filesystem::path& path) {
  try {
    return instance_from_json(nlohmann::json::parse(io::read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidParameter(path.string() + ": " + e.what());
  }
}

inline nlohmann::json exact_result_json(const ExactResult& r, bool certified) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["optimum_value"] = r.optimum_value;
  j["optimum_bits"] = bits_to_string(r.optimum_bits);
  j["nodes_expanded"] = r.nodes_expanded;
  j["seed_value"] = std::isfinite(r.seed_value) ? nlohmann::json(r.seed_value) : nlohmann::json(nullptr);
  j["certified"] = certified;
  return j;
}

/// Prints the result JSON to `out`; returns the exit code.
inline int cmd_solve_exact(const std::filesystem::path& instance_path, const SolveConfig& sc, std::ostream& out) {
  const auto inst = load_instance(instance_path);
  try {
    out << exact_result_json(solve(inst, sc), true).dump(2) << "\n";
    return kOk;
  } catch (const NodeLimitExceeded& e) {
    out << exact_result_json(e.incumbent(), false).dump(2) << "\n";
    return kResourceLimit;
  }
}

inline SweepConfig load_sweep_config(const std::filesystem::path& path) {
  try {
    return sweep_config_from_json(nlohmann::json::parse(io::read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

inline SweepOutcome cmd_sweep(const std::filesystem::path& config_path, std::optional<std::filesystem::path> out_dir,
                              std::size_t workers, bool resume, std::ostream* log) {
  const auto config = load_sweep_config(config_path);
  SweepOptions opt;
  if (out_dir) {
    opt.output_dir = *out_dir;
  } else if (config.output_dir.empty()) {
    const char* env = std::getenv(kOutputDirEnv);
    opt.output_dir = env && *env ? std::filesystem::path(env) : std::filesystem::path("nkbench-out");
  }
  opt.workers = workers;
  opt.resume = resume;
  opt.log = log;
  return run_sweep(config, opt);
}

inline std::vector<RunRecord> load_results(const std::filesystem::path& path, const std::string& algorithm) {
  auto records = parse_results_csv(io::read_file(path));
  if (!algorithm.empty()) records = filter_algorithm(records, parse_algorithm(algorithm));
  return records;
}

inline RatioCurve cmd_compare(const std::filesystem::path& a, const std::filesystem::path& b,
                              const std::filesystem::path& out, const std::string& alg_a = {},
                              const std::string& alg_b = {}) {
  auto curve = compare(load_results(a, alg_a), load_results(b, alg_b));
  io::write_file_atomic(out, ratios_csv(curve));
  return curve;
}

inline void cmd_export_plotdata(const std::filesystem::path& in, const std::filesystem::path& out) {
  io::write_file_atomic(out, plot_series_csv(parse_aggregates_csv(io::read_file(in))));
}

inline void cmd_aggregate(const std::filesystem::path& in, const std::filesystem::path& out) {
  io::write_file_atomic(out, aggregates_csv(aggregate(parse_results_csv(io::read_file(in)))));
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"NK landscape benchmark toolkit"};
  app.require_subcommand(1);

  std::size_t n = 0, k = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  auto* gen = app.add_subcommand("generate", "Generate a random NK instance");
  gen->add_option("--n", n, "Number of bits")->required();
  gen->add_option("--k", k, "Neighbors per bit")->required();
  gen->add_option("--seed", seed, "Instance seed")->required();
  gen->add_option("--out", out_path, "Output instance file")->required();

  std::string instance_path;
  std::uint64_t node_limit = std::numeric_limits<std::uint64_t>::max();
  std::optional<std::size_t> restarts;
  auto* solve_cmd = app.add_subcommand("solve-exact", "Certify the global optimum by branch and bound");
  solve_cmd->add_option("instance", instance_path, "Instance file")->required();
  solve_cmd->add_option("--node-limit", node_limit, "Give up after this many nodes");
  solve_cmd->add_option("--restarts", restarts, "Hill-climb restarts for the initial incumbent (default 10n)");

  std::string config_path, sweep_out;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  bool resume = false;
  auto* sweep = app.add_subcommand("sweep", "Run a benchmark sweep");
  sweep->add_option("--config", config_path, "Sweep config (JSON)")->required();
  sweep->add_option("--workers", workers, "Worker threads");
  sweep->add_flag("--resume", resume, "Continue from an existing manifest");
  sweep->add_option("--out", sweep_out, "Output directory (overrides config and $NKBENCH_OUTPUT_DIR)");

  std::string a_path, b_path, alg_a, alg_b, cmp_out;
  auto* cmp = app.add_subcommand("compare", "Per-instance evaluation/flip ratios of A over B");
  cmp->add_option("--a", a_path, "Results CSV of algorithm A")->required();
  cmp->add_option("--b", b_path, "Results CSV of algorithm B")->required();
  cmp->add_option("--alg-a", alg_a, "Use only this algorithm's rows from A");
  cmp->add_option("--alg-b", alg_b, "Use only this algorithm's rows from B");
  cmp->add_option("--out", cmp_out, "Output ratio CSV")->required();

  std::string in_path, plot_out;
  auto* plot = app.add_subcommand("export-plotdata", "Write plot-ready series from an aggregates CSV");
  plot->add_option("--in", in_path, "Aggregates CSV")->required();
  plot->add_option("--out", plot_out, "Output series CSV")->required();

  std::string agg_in, agg_out;
  auto* agg = app.add_subcommand("aggregate", "Aggregate a results CSV per (n, k, algorithm)");
  agg->add_option("--in", agg_in, "Results CSV")->required();
  agg->add_option("--out", agg_out, "Output aggregates CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*gen) {
      cmd_generate(n, k, seed, out_path);
    } else if (*solve_cmd) {
      SolveConfig sc;
      sc.node_limit = node_limit;
      sc.restarts = restarts;
      return cmd_solve_exact(instance_path, sc, out);
    } else if (*sweep) {
      std::optional<std::filesystem::path> dir;
      if (!sweep_out.empty()) dir = sweep_out;
      auto outcome = cmd_sweep(config_path, dir, workers, resume, &err);
      out << "records " << outcome.records.size() << ", skipped instances " << outcome.skipped_instances.size()
          << ", failed units " << outcome.failed_units.size() << "\n";
    } else if (*cmp) {
      cmd_compare(a_path, b_path, cmp_out, alg_a, alg_b);
    } else if (*plot) {
      cmd_export_plotdata(in_path, plot_out);
    } else if (*agg) {
      cmd_aggregate(agg_in, agg_out);
    }
    return kOk;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace nkbench::cli

#endif  // NKBENCH_CLI_HPP
