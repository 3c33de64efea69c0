#ifndef NKBENCH_EVOLUTION_HPP
#define NKBENCH_EVOLUTION_HPP

// Selection, variation and replacement operators shared by the GA variants,
// UMDA and hBOA, and the generation loop that drives them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nkbench/hboa.hpp"
#include "nkbench/local_search.hpp"
#include "nkbench/nk.hpp"

namespace nkbench {

enum class Algorithm { GaUniform, GaTwoPoint, GaNoCrossover, Umda, Hboa };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::Hboa, Algorithm::Umda, Algorithm::GaUniform,
                                               Algorithm::GaTwoPoint, Algorithm::GaNoCrossover};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::GaUniform: return "ga-uniform";
    case Algorithm::GaTwoPoint: return "ga-twopoint";
    case Algorithm::GaNoCrossover: return "ga-nocrossover";
    case Algorithm::Umda: return "umda";
    case Algorithm::Hboa: return "hboa";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (auto a : kAllAlgorithms)
    if (to_string(a) == s) return a;
  throw InvalidParameter("unknown algorithm '" + std::string(s) + "'");
}

struct EvoConfig {
  Algorithm algorithm = Algorithm::GaUniform;
  std::size_t population_size = 16;
  double crossover_prob = 0.6;
  /// Per-bit mutation probability; nullopt means 1/n.
  std::optional<double> mutation_prob;
  /// RTR window; nullopt means min(n, N/5).
  std::optional<std::size_t> rtr_window;
  /// nullopt means 10n.
  std::optional<std::size_t> max_generations;
  /// Certified optimum; the run succeeds once any member reaches it.
  std::optional<double> target_value;
  bool stop_at_target = true;
  hboa::ModelConfig model;
  /// Re-check single-flip local optimality of every member each generation.
  bool verify_local_optima = false;
};

inline std::size_t default_rtr_window(std::size_t n, std::size_t population_size) {
  return std::max<std::size_t>(1, std::min(n, population_size / 5));
}

struct Population {
  std::vector<Genome> members;
  std::size_t generation = 0;

  std::size_t size() const noexcept { return members.size(); }
  double best_fitness() const {
    double best = members.front().value();
    for (const auto& g : members) best = std::max(best, g.value());
    return best;
  }
};

struct ProbVector {
  std::vector<double> p;
};

/// Counters for one run of run_evolution.
struct RunStats {
  std::size_t population_size = 0;
  std::size_t generations = 0;
  std::size_t evaluations = 0;
  std::size_t dhc_flips = 0;
  /// Candidate DHC moves examined; reported alongside accepted flips.
  std::size_t dhc_proposals = 0;
  bool success = false;
  std::uint64_t instance_seed = 0;
  Algorithm algorithm = Algorithm::GaUniform;
  std::uint64_t run_seed = 0;
};

struct RunOutcome {
  bool success = false;
  RunStats stats;
  Genome best;
};

// ---------------------------------------------------------------------------
// Operators

/// Binary tournament with replacement; ties keep the first sampled member.
inline std::vector<Genome> tournament_select(std::span<const Genome> pop, std::size_t count, Rng& rng) {
  std::vector<Genome> out;
  if (count == 0) return out;
  if (pop.empty()) throw InvalidParameter("tournament_select: empty population");
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const auto& a = pop[rng.below(pop.size())];
    const auto& b = pop[rng.below(pop.size())];
    out.push_back(b.value() > a.value() ? b : a);
  }
  return out;
}

inline std::pair<Genome, Genome> uniform_crossover(const Genome& a, const Genome& b, Rng& rng) {
  if (a.size() != b.size()) throw InvalidParameter("uniform_crossover: length mismatch");
  std::pair<Genome, Genome> kids{Genome{a.bits, std::nullopt}, Genome{b.bits, std::nullopt}};
  for (std::size_t i = 0; i < a.size(); ++i)
    if (rng.coin()) std::swap(kids.first.bits[i], kids.second.bits[i]);
  if (a.bits == b.bits) kids.first.fitness = kids.second.fitness = a.fitness;
  return kids;
}

/// Exchanges the segment [c1, c2) between the parents.
inline std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b, std::size_t c1,
                                                     std::size_t c2) {
  if (a.size() != b.size()) throw InvalidParameter("two_point_crossover: length mismatch");
  if (c1 > c2 || c2 > a.size()) throw InvalidParameter("two_point_crossover: need 0 <= c1 <= c2 <= n");
  std::pair<Genome, Genome> kids{Genome{a.bits, std::nullopt}, Genome{b.bits, std::nullopt}};
  for (std::size_t i = c1; i < c2; ++i) std::swap(kids.first.bits[i], kids.second.bits[i]);
  if (c1 == c2) {
    kids.first.fitness = a.fitness;
    kids.second.fitness = b.fitness;
  }
  return kids;
}

inline std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b, Rng& rng) {
  const std::uint64_t n = a.size();
  auto c1 = static_cast<std::size_t>(rng.below(n + 1));
  auto c2 = static_cast<std::size_t>(rng.below(n + 1));
  if (c1 > c2) std::swap(c1, c2);
  return two_point_crossover(a, b, c1, c2);
}

inline Genome bit_flip_mutation(const Genome& g, double p_m, Rng& rng) {
  if (!(p_m >= 0.0 && p_m <= 1.0)) throw InvalidParameter("bit_flip_mutation: p_m must lie in [0,1]");
  Genome out = g;
  if (p_m == 0.0) return out;
  bool changed = false;
  for (auto& b : out.bits)
    if (rng.bernoulli(p_m)) {
      b ^= 1u;
      changed = true;
    }
  if (changed) out.fitness.reset();
  return out;
}

/// Restricted tournament replacement. Each offspring meets the closest (Hamming)
/// of w members drawn without replacement and replaces it only if strictly fitter.
inline void rtr_replace(Population& pop, std::span<const Genome> offspring, std::size_t window, Rng& rng) {
  const std::size_t size = pop.size();
  if (window < 1 || window > size) throw InvalidParameter("rtr_replace: need 1 <= w <= N");
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (const auto& child : offspring) {
    // Partial Fisher-Yates; perm stays a permutation between offspring.
    for (std::size_t t = 0; t < window; ++t) std::swap(perm[t], perm[t + rng.below(size - t)]);
    std::size_t closest = size;
    std::size_t closest_dist = 0;
    for (std::size_t t = 0; t < window; ++t) {
      const std::size_t idx = perm[t];
      const std::size_t d = hamming(child.bits, pop.members[idx].bits);
      if (closest == size || d < closest_dist || (d == closest_dist && idx < closest)) {
        closest = idx;
        closest_dist = d;
      }
    }
    if (child.value() > pop.members[closest].value()) pop.members[closest] = child;
  }
}

inline ProbVector umda_learn(std::span<const Genome> selected) {
  if (selected.empty()) throw InvalidParameter("umda_learn: empty selection");
  const std::size_t n = selected.front().size();
  std::vector<std::size_t> ones(n, 0);
  for (const auto& g : selected) {
    if (g.size() != n) throw InvalidParameter("umda_learn: genomes differ in length");
    for (std::size_t i = 0; i < n; ++i) ones[i] += g.bits[i] & 1u;
  }
  ProbVector pv;
  pv.p.resize(n);
  for (std::size_t i = 0; i < n; ++i) pv.p[i] = static_cast<double>(ones[i]) / static_cast<double>(selected.size());
  return pv;
}

inline std::vector<Genome> umda_sample(const ProbVector& pv, std::size_t count, Rng& rng) {
  std::vector<Genome> out(count);
  for (auto& g : out) {
    g.bits.resize(pv.p.size());
    for (std::size_t i = 0; i < pv.p.size(); ++i) g.bits[i] = rng.bernoulli(pv.p[i]) ? 1 : 0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generation loop

namespace detail {

inline std::vector<Genome> make_offspring(const EvoConfig& cfg, std::size_t n, std::span<const Genome> parents,
                                          Rng& rng) {
  const double p_m = cfg.mutation_prob.value_or(1.0 / static_cast<double>(n));
  switch (cfg.algorithm) {
    case Algorithm::Umda: return umda_sample(umda_learn(parents), parents.size(), rng);
    case Algorithm::Hboa: return hboa::sample_model(hboa::learn_model(parents, cfg.model), parents.size(), rng);
    case Algorithm::GaNoCrossover: {
      std::vector<Genome> out;
      out.reserve(parents.size());
      for (const auto& p : parents) out.push_back(bit_flip_mutation(p, p_m, rng));
      return out;
    }
    case Algorithm::GaUniform:
    case Algorithm::GaTwoPoint: {
      std::vector<Genome> out;
      out.reserve(parents.size());
      for (std::size_t t = 0; t + 1 < parents.size(); t += 2) {
        std::pair<Genome, Genome> kids{parents[t], parents[t + 1]};
        if (rng.bernoulli(cfg.crossover_prob))
          kids = cfg.algorithm == Algorithm::GaUniform ? uniform_crossover(parents[t], parents[t + 1], rng)
                                                       : two_point_crossover(parents[t], parents[t + 1], rng);
        out.push_back(bit_flip_mutation(kids.first, p_m, rng));
        out.push_back(bit_flip_mutation(kids.second, p_m, rng));
      }
      return out;
    }
  }
  return {};
}

inline bool locally_optimal(const NkInstance& inst, const Genome& g) {
  for (std::size_t q = 0; q < inst.n(); ++q)
    if (delta_evaluate(inst, g.bits, g.value(), q) - g.value() > kImproveEps) return false;
  return true;
}

}  // namespace detail

inline void validate(const EvoConfig& cfg, std::size_t n) {
  const std::size_t N = cfg.population_size;
  if (N < 2 || N % 2 != 0) throw ConfigError("population size must be even and >= 2");
  if (!(cfg.crossover_prob >= 0.0 && cfg.crossover_prob <= 1.0)) throw ConfigError("crossover_prob must lie in [0,1]");
  if (cfg.mutation_prob && !(*cfg.mutation_prob >= 0.0 && *cfg.mutation_prob <= 1.0))
    throw ConfigError("mutation_prob must lie in [0,1]");
  if (cfg.rtr_window && (*cfg.rtr_window < 1 || *cfg.rtr_window > N)) throw ConfigError("rtr_window must lie in [1,N]");
  if (cfg.stop_at_target && !cfg.target_value) throw ConfigError("success termination requires target_value");
  if (n == 0) throw ConfigError("empty instance");
}

/// One run: random initial population, DHC on every candidate before it is
/// counted, binary tournament, algorithm-specific variation, RTR. Stops on
/// reaching target_value (within kFitnessTol) or after max_generations.
inline RunOutcome run_evolution(const NkInstance& inst, const EvoConfig& cfg, Rng& rng) {
  const std::size_t n = inst.n();
  validate(cfg, n);
  const std::size_t N = cfg.population_size;
  const std::size_t window = cfg.rtr_window.value_or(default_rtr_window(n, N));
  const std::size_t max_generations = cfg.max_generations.value_or(10 * n);

  RunOutcome out;
  auto& st = out.stats;
  st.population_size = N;
  st.instance_seed = inst.seed();
  st.algorithm = cfg.algorithm;
  st.run_seed = rng.seed();

  const auto polish = [&](Genome& g) {
    auto r = dhc(inst, g);
    st.dhc_flips += r.flips;
    st.dhc_proposals += r.proposals;
    ++st.evaluations;
    g = std::move(r.genome);
  };
  const auto reached = [&](const Population& p) {
    return cfg.target_value && p.best_fitness() >= *cfg.target_value - kFitnessTol;
  };

  Population pop;
  pop.members.resize(N);
  for (auto& g : pop.members) {
    g.bits = random_bits(n, rng);
    polish(g);
  }

  bool success = reached(pop);
  while (!success && pop.generation < max_generations) {
    auto parents = tournament_select(pop.members, N, rng);
    auto offspring = detail::make_offspring(cfg, n, parents, rng);
    for (auto& g : offspring) polish(g);
    rtr_replace(pop, offspring, window, rng);
    ++pop.generation;
    if (cfg.verify_local_optima)
      for (const auto& g : pop.members)
        if (!detail::locally_optimal(inst, g)) throw InvariantViolation("population member not locally optimal");
    success = reached(pop);
  }

  st.generations = pop.generation;
  st.success = success;
  out.success = success;
  out.best = *std::max_element(pop.members.begin(), pop.members.end(),
                               [](const Genome& a, const Genome& b) { return a.value() < b.value(); });
  return out;
}

}  // namespace nkbench

#endif  // NKBENCH_EVOLUTION_HPP
