#ifndef NKBENCH_SWEEP_CONFIG_HPP
#define NKBENCH_SWEEP_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nkbench/evolution.hpp"
#include "nkbench/rng.hpp"

namespace nkbench {

inline constexpr int kSweepConfigFormatVersion = 1;

struct AlgorithmSpec {
  Algorithm algorithm = Algorithm::GaUniform;
  double crossover_prob = 0.6;
  std::optional<double> mutation_prob;    // nullopt: 1/n
  std::optional<std::size_t> max_parents;  // hboa only

  friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

struct SweepConfig {
  /// k -> list of n.
  std::map<std::size_t, std::vector<std::size_t>> grid;
  std::size_t instances_per_cell = 100;
  std::vector<AlgorithmSpec> algorithms;
  std::uint64_t master_seed = 1;
  std::string output_dir;
  std::uint64_t node_limit = 1'000'000'000'000ULL;
  std::size_t n_cap = std::size_t{1} << 20;
  std::optional<std::size_t> max_generations;  // nullopt: 10n
  std::optional<std::size_t> restarts;         // nullopt: 10n
  std::size_t initial_population = 16;
  std::size_t runs_per_size = 10;
  double precision = 1.1;

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

/// The instance grid of the original experiments (n from 20 in steps of 2).
inline std::map<std::size_t, std::vector<std::size_t>> reference_grid() {
  const std::pair<std::size_t, std::size_t> max_n[] = {{2, 52}, {3, 48}, {4, 40}, {5, 38}, {6, 32}};
  std::map<std::size_t, std::vector<std::size_t>> grid;
  for (auto [k, hi] : max_n)
    for (std::size_t n = 20; n <= hi; n += 2) grid[k].push_back(n);
  return grid;
}

inline void validate(const SweepConfig& c) {
  if (c.grid.empty()) throw ConfigError("sweep grid is empty");
  for (const auto& [k, ns] : c.grid) {
    if (ns.empty()) throw ConfigError("grid entry for k=" + std::to_string(k) + " has no n values");
    for (auto n : ns)
      if (n <= k) throw ConfigError("grid cell (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ") needs k < n");
  }
  if (c.instances_per_cell == 0) throw ConfigError("instances_per_cell must be positive");
  if (c.algorithms.empty()) throw ConfigError("no algorithms configured");
  for (const auto& a : c.algorithms) {
    if (!(a.crossover_prob >= 0.0 && a.crossover_prob <= 1.0)) throw ConfigError("crossover_prob must lie in [0,1]");
    if (a.mutation_prob && !(*a.mutation_prob >= 0.0 && *a.mutation_prob <= 1.0))
      throw ConfigError("mutation_prob must lie in [0,1]");
  }
  if (c.initial_population < 2 || c.initial_population % 2) throw ConfigError("initial_population must be even >= 2");
  if (c.n_cap < c.initial_population) throw ConfigError("n_cap below initial_population");
  if (c.runs_per_size == 0) throw ConfigError("runs_per_size must be positive");
  if (!(c.precision > 1.0)) throw ConfigError("precision must exceed 1");
}

namespace detail {
template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
template <class T>
std::optional<T> opt_get(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}
}  // namespace detail

inline nlohmann::json to_json(const SweepConfig& c) {
  nlohmann::json j;
  j["format_version"] = kSweepConfigFormatVersion;
  nlohmann::json grid = nlohmann::json::object();
  for (const auto& [k, ns] : c.grid) grid[std::to_string(k)] = ns;
  j["grid"] = grid;
  j["instances_per_cell"] = c.instances_per_cell;
  auto algs = nlohmann::json::array();
  for (const auto& a : c.algorithms)
    algs.push_back({{"name", std::string(to_string(a.algorithm))},
                    {"crossover_prob", a.crossover_prob},
                    {"mutation_prob", detail::opt_json(a.mutation_prob)},
                    {"max_parents", detail::opt_json(a.max_parents)}});
  j["algorithms"] = algs;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  j["node_limit"] = c.node_limit;
  j["n_cap"] = c.n_cap;
  j["max_generations"] = detail::opt_json(c.max_generations);
  j["restarts"] = detail::opt_json(c.restarts);
  j["initial_population"] = c.initial_population;
  j["runs_per_size"] = c.runs_per_size;
  j["precision"] = c.precision;
  return j;
}

/// Parses and validates. Missing optional keys take their defaults.
inline SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig c;
  try {
    const int version = j.value("format_version", kSweepConfigFormatVersion);
    if (version != kSweepConfigFormatVersion) throw ConfigError("unsupported config format_version");
    for (const auto& [key, ns] : j.at("grid").items()) {
      std::size_t k = 0;
      try {
        k = static_cast<std::size_t>(std::stoul(key));
      } catch (const std::exception&) {
        throw ConfigError("grid key '" + key + "' is not an integer k");
      }
      c.grid[k] = ns.get<std::vector<std::size_t>>();
    }
    c.instances_per_cell = j.value("instances_per_cell", c.instances_per_cell);
    for (const auto& a : j.at("algorithms")) {
      AlgorithmSpec spec;
      if (a.is_string()) {
        spec.algorithm = parse_algorithm(a.get<std::string>());
      } else {
        spec.algorithm = parse_algorithm(a.at("name").get<std::string>());
        spec.crossover_prob = a.value("crossover_prob", spec.crossover_prob);
        spec.mutation_prob = detail::opt_get<double>(a, "mutation_prob");
        spec.max_parents = detail::opt_get<std::size_t>(a, "max_parents");
      }
      c.algorithms.push_back(spec);
    }
    c.master_seed = j.value("master_seed", c.master_seed);
    c.output_dir = j.value("output_dir", c.output_dir);
    c.node_limit = j.value("node_limit", c.node_limit);
    c.n_cap = j.value("n_cap", c.n_cap);
    c.max_generations = detail::opt_get<std::size_t>(j, "max_generations");
    c.restarts = detail::opt_get<std::size_t>(j, "restarts");
    c.initial_population = j.value("initial_population", c.initial_population);
    c.runs_per_size = j.value("runs_per_size", c.runs_per_size);
    c.precision = j.value("precision", c.precision);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed sweep config: ") + e.what());
  }
  validate(c);
  return c;
}

/// Hash of the canonical serialization, excluding output_dir.
inline std::string config_hash(const SweepConfig& c) {
  auto j = to_json(c);
  j.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_tag(j.dump())));
  return buf;
}

}  // namespace nkbench

#endif  // NKBENCH_SWEEP_CONFIG_HPP
