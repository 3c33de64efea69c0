#ifndef NKBENCH_HARNESS_HPP
#define NKBENCH_HARNESS_HPP

// Experimental pipeline: population sizing by bisection, (n,k) sweeps with
// certified optima, aggregation, and pairwise ratio comparisons.
//
// Conventions:
//  - Only successful runs enter aggregates and comparisons.
//  - Standard deviations use the population form (divide by count).
//  - A per-instance ratio divides the mean over that instance's runs of A by
//    the mean over its runs of B; a cell value averages those ratios.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nkbench/evolution.hpp"
#include "nkbench/exact.hpp"
#include "nkbench/io.hpp"
#include "nkbench/sweep_config.hpp"

namespace nkbench {

// ---------------------------------------------------------------------------
// Bisection

struct BisectionConfig {
  std::size_t initial_population = 16;
  std::size_t runs = 10;
  /// Stop once upper/lower <= precision.
  double precision = 1.1;
  std::size_t population_cap = std::size_t{1} << 20;
};

struct BisectionResult {
  std::size_t population_size = 0;
  /// The runs at population_size, all successful.
  std::vector<RunOutcome> runs;
  /// Every size tried, in order, with its pass/fail verdict.
  std::vector<std::pair<std::size_t, bool>> trials;
};

class PopulationCapExceeded : public ResourceLimit {
 public:
  using ResourceLimit::ResourceLimit;
};

/// Seed of run `run_index` at population size N.
inline std::uint64_t bisection_run_seed(std::uint64_t seed, std::size_t population_size, std::size_t run_index) {
  return derive_seed(seed, {population_size, run_index});
}

/// Runs `runs` independent runs at one size; stops at the first failure.
inline std::pair<bool, std::vector<RunOutcome>> try_population_size(const NkInstance& inst, double target,
                                                                     EvoConfig cfg, std::uint64_t seed,
                                                                     std::size_t population_size, std::size_t runs) {
  cfg.population_size = population_size;
  cfg.target_value = target;
  cfg.stop_at_target = true;
  std::vector<RunOutcome> outcomes;
  outcomes.reserve(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    Rng rng(bisection_run_seed(seed, population_size, r));
    auto out = run_evolution(inst, cfg, rng);
    if (!out.success) return {false, {}};
    if (out.best.value() > target + kFitnessTol)
      throw InvariantViolation("run exceeded the certified optimum; certification is wrong");
    outcomes.push_back(std::move(out));
  }
  return {true, std::move(outcomes)};
}

/// Smallest population size (to within `precision`) for which all runs reach
/// `target`. Doubling from initial_population, then bisection between the last
/// failing and first passing sizes. Sizes are kept even.
inline BisectionResult bisect_population_size(const NkInstance& inst, double target, const EvoConfig& base,
                                              std::uint64_t seed, const BisectionConfig& bc = {}) {
  if (bc.initial_population < 2 || bc.initial_population % 2)
    throw InvalidParameter("bisection: initial population must be even and >= 2");
  BisectionResult res;
  std::size_t lower = 0;  // largest failing size seen, 0 if none
  std::size_t upper = bc.initial_population;
  for (;;) {
    auto [ok, runs] = try_population_size(inst, target, base, seed, upper, bc.runs);
    res.trials.emplace_back(upper, ok);
    if (ok) {
      res.runs = std::move(runs);
      break;
    }
    lower = upper;
    if (upper > bc.population_cap / 2)
      throw PopulationCapExceeded("bisection: no reliable population size up to the cap");
    upper *= 2;
  }
  while (lower > 0 && static_cast<double>(upper) / static_cast<double>(lower) > bc.precision) {
    std::size_t mid = (lower + upper) / 2;
    mid += mid % 2;
    if (mid <= lower || mid >= upper) break;
    auto [ok, runs] = try_population_size(inst, target, base, seed, mid, bc.runs);
    res.trials.emplace_back(mid, ok);
    if (ok) {
      upper = mid;
      res.runs = std::move(runs);
    } else {
      lower = mid;
    }
  }
  res.population_size = upper;
  return res;
}

// ---------------------------------------------------------------------------
// Records, aggregation, comparison

/// One row of the results file.
struct RunRecord {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t run_index = 0;
  RunStats stats;
};

inline const std::vector<std::string>& results_header() {
  static const std::vector<std::string> h = {"n",           "k",          "algorithm",       "instance_seed",
                                             "run_index",   "population_size", "generations", "evaluations",
                                             "dhc_flips",   "success"};
  return h;
}

inline std::string results_csv(const std::vector<RunRecord>& records) {
  std::string out = io::join(results_header()) + "\n";
  for (const auto& r : records) {
    const auto& s = r.stats;
    out += io::join({std::to_string(r.n), std::to_string(r.k), std::string(to_string(s.algorithm)),
                     std::to_string(s.instance_seed), std::to_string(r.run_index), std::to_string(s.population_size),
                     std::to_string(s.generations), std::to_string(s.evaluations), std::to_string(s.dhc_flips),
                     s.success ? "1" : "0"});
    out += "\n";
  }
  return out;
}

inline std::vector<RunRecord> parse_results_csv(std::string_view text) {
  const auto table = io::parse_csv(text, results_header());
  std::vector<RunRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    RunRecord r;
    r.n = io::parse_u64(row[0]);
    r.k = io::parse_u64(row[1]);
    r.stats.algorithm = parse_algorithm(row[2]);
    r.stats.instance_seed = io::parse_u64(row[3]);
    r.run_index = io::parse_u64(row[4]);
    r.stats.population_size = io::parse_u64(row[5]);
    r.stats.generations = io::parse_u64(row[6]);
    r.stats.evaluations = io::parse_u64(row[7]);
    r.stats.dhc_flips = io::parse_u64(row[8]);
    if (row[9] != "0" && row[9] != "1") throw InvalidParameter("success column must be 0 or 1");
    r.stats.success = row[9] == "1";
    out.push_back(r);
  }
  return out;
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

struct CellAggregate {
  std::size_t n = 0;
  std::size_t k = 0;
  std::string algorithm;
  std::size_t instances = 0;
  std::size_t runs = 0;
  Moments population_size;
  Moments generations;
  Moments evaluations;
  Moments dhc_flips;
};

inline Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(ss / static_cast<double>(xs.size()));
  return m;
}

/// Per-cell means and standard deviations over successful runs, ordered by
/// (k, n, algorithm). Cells without a successful run are dropped with a warning.
inline std::vector<CellAggregate> aggregate(const std::vector<RunRecord>& records, std::ostream* warn = &std::cerr) {
  struct Acc {
    std::set<std::uint64_t> instances;
    std::vector<double> pop, gen, evals, flips;
  };
  std::map<std::tuple<std::size_t, std::size_t, std::string>, Acc> cells;
  for (const auto& r : records) {
    auto& acc = cells[{r.k, r.n, std::string(to_string(r.stats.algorithm))}];
    if (!r.stats.success) continue;
    acc.instances.insert(r.stats.instance_seed);
    acc.pop.push_back(static_cast<double>(r.stats.population_size));
    acc.gen.push_back(static_cast<double>(r.stats.generations));
    acc.evals.push_back(static_cast<double>(r.stats.evaluations));
    acc.flips.push_back(static_cast<double>(r.stats.dhc_flips));
  }
  std::vector<CellAggregate> out;
  for (const auto& [key, acc] : cells) {
    const auto& [k, n, alg] = key;
    if (acc.pop.empty()) {
      if (warn) *warn << "warning: no successful runs for n=" << n << " k=" << k << " " << alg << "; cell omitted\n";
      continue;
    }
    out.push_back({n, k, alg, acc.instances.size(), acc.pop.size(), moments(acc.pop), moments(acc.gen),
                   moments(acc.evals), moments(acc.flips)});
  }
  return out;
}

inline const std::vector<std::string>& aggregates_header() {
  static const std::vector<std::string> h = {
      "n",           "k",          "algorithm",        "instances",      "runs",
      "mean_population_size",     "sd_population_size", "mean_generations", "sd_generations",
      "mean_evaluations",         "sd_evaluations",     "mean_dhc_flips",   "sd_dhc_flips"};
  return h;
}

inline std::string aggregates_csv(const std::vector<CellAggregate>& cells) {
  std::string out = io::join(aggregates_header()) + "\n";
  for (const auto& c : cells) {
    out += io::join({std::to_string(c.n), std::to_string(c.k), c.algorithm, std::to_string(c.instances),
                     std::to_string(c.runs), io::format_double(c.population_size.mean),
                     io::format_double(c.population_size.stddev), io::format_double(c.generations.mean),
                     io::format_double(c.generations.stddev), io::format_double(c.evaluations.mean),
                     io::format_double(c.evaluations.stddev), io::format_double(c.dhc_flips.mean),
                     io::format_double(c.dhc_flips.stddev)});
    out += "\n";
  }
  return out;
}

inline std::vector<CellAggregate> parse_aggregates_csv(std::string_view text) {
  const auto table = io::parse_csv(text, aggregates_header());
  std::vector<CellAggregate> out;
  for (const auto& row : table.rows) {
    CellAggregate c;
    c.n = io::parse_u64(row[0]);
    c.k = io::parse_u64(row[1]);
    c.algorithm = std::string(to_string(parse_algorithm(row[2])));
    c.instances = io::parse_u64(row[3]);
    c.runs = io::parse_u64(row[4]);
    Moments* ms[] = {&c.population_size, &c.generations, &c.evaluations, &c.dhc_flips};
    for (std::size_t m = 0; m < 4; ++m) {
      ms[m]->mean = io::parse_double(row[5 + 2 * m]);
      ms[m]->stddev = io::parse_double(row[6 + 2 * m]);
    }
    out.push_back(std::move(c));
  }
  return out;
}

struct RatioPoint {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t instances = 0;
  double ratio_evaluations = 0.0;
  double ratio_flips = 0.0;
};

struct RatioCurve {
  std::string algorithm_a;
  std::string algorithm_b;
  std::vector<RatioPoint> points;  // ordered by (k, n)
};

namespace detail {

struct InstanceMeans {
  double evaluations = 0.0;
  double flips = 0.0;
  std::size_t runs = 0;
};

using CellInstances = std::map<std::pair<std::size_t, std::size_t>, std::map<std::uint64_t, InstanceMeans>>;

inline std::pair<std::string, CellInstances> per_instance_means(const std::vector<RunRecord>& records,
                                                                const char* side) {
  std::set<std::string> algs;
  CellInstances cells;
  for (const auto& r : records) {
    algs.insert(std::string(to_string(r.stats.algorithm)));
    if (!r.stats.success) continue;
    auto& m = cells[{r.k, r.n}][r.stats.instance_seed];
    m.evaluations += static_cast<double>(r.stats.evaluations);
    m.flips += static_cast<double>(r.stats.dhc_flips);
    ++m.runs;
  }
  if (algs.size() > 1) throw InvalidParameter(std::string("compare: side ") + side + " mixes several algorithms");
  for (auto& [cell, inst] : cells)
    for (auto& [seed, m] : inst) {
      m.evaluations /= static_cast<double>(m.runs);
      m.flips /= static_cast<double>(m.runs);
    }
  return {algs.empty() ? std::string() : *algs.begin(), std::move(cells)};
}

inline double safe_ratio(double a, double b) {
  if (b == 0.0) return a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return a / b;
}

}  // namespace detail

/// Ratio curve of A over B. Both sides must cover exactly the same instances
/// in exactly the same cells.
inline RatioCurve compare(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b) {
  auto [alg_a, cells_a] = detail::per_instance_means(a, "A");
  auto [alg_b, cells_b] = detail::per_instance_means(b, "B");
  RatioCurve curve{alg_a, alg_b, {}};
  if (cells_a.size() != cells_b.size()) throw InvalidParameter("compare: the two sides cover different cells");
  for (const auto& [cell, inst_a] : cells_a) {
    const auto it = cells_b.find(cell);
    if (it == cells_b.end()) throw InvalidParameter("compare: the two sides cover different cells");
    const auto& inst_b = it->second;
    if (inst_a.size() != inst_b.size()) throw InvalidParameter("compare: instance-set mismatch");
    RatioPoint p{cell.second, cell.first, inst_a.size(), 0.0, 0.0};
    for (const auto& [seed, ma] : inst_a) {
      const auto jt = inst_b.find(seed);
      if (jt == inst_b.end()) throw InvalidParameter("compare: instance-set mismatch");
      p.ratio_evaluations += detail::safe_ratio(ma.evaluations, jt->second.evaluations);
      p.ratio_flips += detail::safe_ratio(ma.flips, jt->second.flips);
    }
    p.ratio_evaluations /= static_cast<double>(p.instances);
    p.ratio_flips /= static_cast<double>(p.instances);
    curve.points.push_back(p);
  }
  return curve;
}

inline std::string ratios_csv(const RatioCurve& curve) {
  std::string out = "n,k,algorithm_a,algorithm_b,instances,ratio_evaluations,ratio_flips\n";
  for (const auto& p : curve.points)
    out += io::join({std::to_string(p.n), std::to_string(p.k), curve.algorithm_a, curve.algorithm_b,
                     std::to_string(p.instances), io::format_double(p.ratio_evaluations),
                     io::format_double(p.ratio_flips)}) +
           "\n";
  return out;
}

/// Plot-ready series: one series per (algorithm, statistic, k), x = n ascending.
inline std::string plot_series_csv(const std::vector<CellAggregate>& cells) {
  struct Row {
    std::string algorithm;
    std::size_t stat;
    std::size_t k, n;
    double mean, sd;
  };
  static const char* names[] = {"population_size", "generations", "evaluations", "dhc_flips"};
  std::vector<Row> rows;
  for (const auto& c : cells) {
    const Moments* ms[] = {&c.population_size, &c.generations, &c.evaluations, &c.dhc_flips};
    for (std::size_t s = 0; s < 4; ++s) rows.push_back({c.algorithm, s, c.k, c.n, ms[s]->mean, ms[s]->stddev});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) {
    return std::tie(x.algorithm, x.stat, x.k, x.n) < std::tie(y.algorithm, y.stat, y.k, y.n);
  });
  std::string out = "algorithm,statistic,k,n,mean,stddev\n";
  for (const auto& r : rows)
    out += io::join({r.algorithm, names[r.stat], std::to_string(r.k), std::to_string(r.n), io::format_double(r.mean),
                     io::format_double(r.sd)}) +
           "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Sweep

/// Calls fn(i) for i in [0, count) on up to `workers` threads. The first
/// exception thrown by any call is rethrown after all threads stop.
inline void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers == 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

struct SweepOptions {
  std::filesystem::path output_dir;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  bool resume = false;
  std::ostream* log = nullptr;
  /// Test hook: stop (throwing ResourceLimit) after this many new units.
  std::optional<std::size_t> stop_after_units;
};

struct SweepOutcome {
  std::vector<RunRecord> records;
  std::vector<CellAggregate> aggregates;
  std::vector<std::string> skipped_instances;
  std::vector<std::string> failed_units;
};

inline std::uint64_t sweep_instance_seed(std::uint64_t master_seed, std::size_t k, std::size_t n, std::size_t index) {
  return derive_seed(master_seed, {hash_tag("instance"), k, n, index});
}

inline EvoConfig evo_config_for(const AlgorithmSpec& spec, const SweepConfig& config) {
  EvoConfig cfg;
  cfg.algorithm = spec.algorithm;
  cfg.crossover_prob = spec.crossover_prob;
  cfg.mutation_prob = spec.mutation_prob;
  cfg.max_generations = config.max_generations;
  cfg.model.max_parents = spec.max_parents;
  return cfg;
}

namespace detail {

struct SweepInstance {
  std::size_t n, k, index;
  std::uint64_t seed;
  std::string id;
};

struct Certificate {
  double optimum = 0.0;
  std::uint64_t nodes = 0;
};

struct Unit {
  std::size_t instance;  // into the instance list
  std::size_t spec;      // into config.algorithms
  std::string id;
};

inline std::string instance_id(std::size_t k, std::size_t n, std::size_t index) {
  return "k" + std::to_string(k) + "-n" + std::to_string(n) + "-i" + std::to_string(index);
}

class Manifest {
 public:
  std::string config_hash;
  bool complete = false;
  std::map<std::string, Certificate> certified;
  std::set<std::string> skipped;
  std::set<std::string> completed;
  std::map<std::string, std::string> failed;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["config_hash"] = config_hash;
    j["complete"] = complete;
    nlohmann::json cert = nlohmann::json::object();
    for (const auto& [id, c] : certified) cert[id] = {{"optimum_value", c.optimum}, {"nodes_expanded", c.nodes}};
    j["certified"] = cert;
    j["skipped_instances"] = skipped;
    j["completed_units"] = completed;
    nlohmann::json f = nlohmann::json::object();
    for (const auto& [id, why] : failed) f[id] = why;
    j["failed_units"] = f;
    return j;
  }

  static Manifest from_json(const nlohmann::json& j) {
    Manifest m;
    m.config_hash = j.at("config_hash").get<std::string>();
    m.complete = j.at("complete").get<bool>();
    for (const auto& [id, c] : j.at("certified").items())
      m.certified[id] = {c.at("optimum_value").get<double>(), c.at("nodes_expanded").get<std::uint64_t>()};
    m.skipped = j.at("skipped_instances").get<std::set<std::string>>();
    m.completed = j.at("completed_units").get<std::set<std::string>>();
    for (const auto& [id, why] : j.at("failed_units").items()) m.failed[id] = why.get<std::string>();
    return m;
  }

  void save(const std::filesystem::path& path) const { io::write_file_atomic(path, to_json().dump(2) + "\n"); }
};

}  // namespace detail

/// Generates and certifies every instance of the grid, sizes every algorithm
/// on every certified instance, and writes results.csv, aggregates.csv and
/// manifest.json under options.output_dir (per-unit files go to units/).
/// Output is identical for identical config regardless of worker count or
/// interruption/resume.
inline SweepOutcome run_sweep(const SweepConfig& config, const SweepOptions& options) {
  namespace fs = std::filesystem;
  validate(config);
  const fs::path out_dir = options.output_dir.empty() ? fs::path(config.output_dir) : options.output_dir;
  if (out_dir.empty()) throw ConfigError("sweep: no output directory");
  const fs::path units_dir = out_dir / "units";
  const fs::path manifest_path = out_dir / "manifest.json";

  detail::Manifest manifest;
  manifest.config_hash = config_hash(config);
  if (options.resume && fs::exists(manifest_path)) {
    manifest = detail::Manifest::from_json(nlohmann::json::parse(io::read_file(manifest_path)));
    if (manifest.config_hash != config_hash(config))
      throw ConfigError("sweep: manifest belongs to a different configuration");
    manifest.complete = false;
  } else {
    fs::remove_all(units_dir);
    fs::remove(manifest_path);
  }
  fs::create_directories(units_dir);

  std::vector<detail::SweepInstance> instances;
  for (const auto& [k, ns] : config.grid)
    for (auto n : ns)
      for (std::size_t i = 0; i < config.instances_per_cell; ++i)
        instances.push_back({n, k, i, sweep_instance_seed(config.master_seed, k, n, i), detail::instance_id(k, n, i)});

  std::mutex mutex;
  const auto log = [&](const std::string& line) {
    if (options.log) *options.log << line << "\n";
  };

  // Certification.
  std::vector<std::size_t> to_certify;
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (!manifest.certified.count(instances[i].id) && !manifest.skipped.count(instances[i].id))
      to_certify.push_back(i);
  parallel_for(to_certify.size(), options.workers, [&](std::size_t t) {
    const auto& si = instances[to_certify[t]];
    const auto inst = generate_instance(si.n, si.k, si.seed);
    SolveConfig sc;
    sc.restarts = config.restarts;
    sc.node_limit = config.node_limit;
    try {
      const auto r = solve(inst, sc);
      std::lock_guard lock(mutex);
      manifest.certified[si.id] = {r.optimum_value, r.nodes_expanded};
    } catch (const NodeLimitExceeded&) {
      std::lock_guard lock(mutex);
      manifest.skipped.insert(si.id);
      log("skipped " + si.id + ": certification hit the node limit");
    }
  });
  manifest.save(manifest_path);

  // Benchmark units.
  std::vector<detail::Unit> units;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (manifest.skipped.count(instances[i].id)) continue;
    for (std::size_t s = 0; s < config.algorithms.size(); ++s)
      units.push_back({i, s,
                       instances[i].id + "-a" + std::to_string(s) + "-" +
                           std::string(to_string(config.algorithms[s].algorithm))});
  }
  std::vector<std::size_t> pending;
  for (std::size_t u = 0; u < units.size(); ++u)
    if (!manifest.completed.count(units[u].id) && !manifest.failed.count(units[u].id)) pending.push_back(u);

  std::size_t finished_now = 0;
  parallel_for(pending.size(), options.workers, [&](std::size_t t) {
    const auto& unit = units[pending[t]];
    const auto& si = instances[unit.instance];
    const auto& spec = config.algorithms[unit.spec];
    {
      std::lock_guard lock(mutex);
      if (options.stop_after_units && finished_now >= *options.stop_after_units)
        throw ResourceLimit("sweep interrupted");
    }
    const auto inst = generate_instance(si.n, si.k, si.seed);
    double target = 0.0;
    {
      std::lock_guard lock(mutex);
      target = manifest.certified.at(si.id).optimum;
    }
    BisectionConfig bc{config.initial_population, config.runs_per_size, config.precision, config.n_cap};
    const std::uint64_t seed = derive_seed(si.seed, {hash_tag(to_string(spec.algorithm)), unit.spec});
    std::vector<RunRecord> records;
    std::string failure;
    try {
      auto res = bisect_population_size(inst, target, evo_config_for(spec, config), seed, bc);
      for (std::size_t r = 0; r < res.runs.size(); ++r) records.push_back({si.n, si.k, r, res.runs[r].stats});
    } catch (const PopulationCapExceeded& e) {
      failure = e.what();
    }
    std::lock_guard lock(mutex);
    io::write_file_atomic(units_dir / (unit.id + ".csv"), results_csv(records));
    if (failure.empty()) {
      manifest.completed.insert(unit.id);
    } else {
      manifest.failed[unit.id] = failure;
      log("failed " + unit.id + ": " + failure);
    }
    manifest.save(manifest_path);
    ++finished_now;
  });

  // Assemble in deterministic order: instance list order (cell, index), then algorithm.
  SweepOutcome outcome;
  for (const auto& unit : units) {
    if (manifest.failed.count(unit.id)) {
      outcome.failed_units.push_back(unit.id);
      continue;
    }
    auto recs = parse_results_csv(io::read_file(units_dir / (unit.id + ".csv")));
    for (auto& r : recs) {
      r.stats.run_seed = 0;
      outcome.records.push_back(r);
    }
  }
  outcome.skipped_instances.assign(manifest.skipped.begin(), manifest.skipped.end());
  outcome.aggregates = aggregate(outcome.records, options.log);
  io::write_file_atomic(out_dir / "results.csv", results_csv(outcome.records));
  io::write_file_atomic(out_dir / "aggregates.csv", aggregates_csv(outcome.aggregates));
  manifest.complete = true;
  manifest.save(manifest_path);
  return outcome;
}

/// Records of one algorithm (by tag) from a sweep.
inline std::vector<RunRecord> filter_algorithm(const std::vector<RunRecord>& records, Algorithm a) {
  std::vector<RunRecord> out;
  for (const auto& r : records)
    if (r.stats.algorithm == a) out.push_back(r);
  return out;
}

}  // namespace nkbench

#endif  // NKBENCH_HARNESS_HPP
