#ifndef NKBENCH_EXACT_HPP
#define NKBENCH_EXACT_HPP

// Branch and bound for the global optimum of an NK instance.
//
// Bits are fixed in order X_0, X_1, ... The bound at a node is the sum over
// subfunctions of the best table value consistent with the fixed bits
// (independent maximisation per subfunction). It is admissible and equals
// the exact value once every bit is fixed.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nkbench/local_search.hpp"
#include "nkbench/nk.hpp"

namespace nkbench {

inline constexpr double kPruneEps = 1e-12;

/// Bound on any completion of `prefix` (bits 0..d-1 fixed).
inline double upper_bound(const NkInstance& inst, std::span<const std::uint8_t> prefix) {
  const std::size_t d = prefix.size();
  if (d > inst.n()) throw InvalidParameter("upper_bound: prefix longer than n");
  const std::size_t k = inst.k();
  double total = 0.0;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    // Mask/value of the fixed index bits of subfunction i.
    std::size_t mask = 0, value = 0;
    if (i < d) {
      mask |= std::size_t{1} << k;
      value |= std::size_t{prefix[i] & 1u} << k;
    }
    const auto nb = inst.neighbors(i);
    for (std::size_t j = 0; j < k; ++j) {
      if (nb[j] < d) {
        mask |= std::size_t{1} << (k - 1 - j);
        value |= std::size_t{prefix[nb[j]] & 1u} << (k - 1 - j);
      }
    }
    double best = -std::numeric_limits<double>::infinity();
    const auto tab = inst.table(i);
    for (std::size_t idx = 0; idx < tab.size(); ++idx)
      if ((idx & mask) == value) best = std::max(best, tab[idx]);
    total += best;
  }
  return total;
}

/// Best of `restarts` stochastic hill climbs from uniform random starts.
/// Restarts consume `rng` sequentially, so a run with more restarts extends
/// the same stream.
inline Genome seed_incumbent(const NkInstance& inst, std::size_t restarts, Rng& rng) {
  if (restarts == 0) throw InvalidParameter("seed_incumbent: restarts must be >= 1");
  Genome best;
  for (std::size_t r = 0; r < restarts; ++r) {
    Genome start{random_bits(inst.n(), rng), std::nullopt};
    evaluate(inst, start);
    auto climbed = stochastic_hill_climb(inst, start, rng);
    if (!best.fitness || climbed.genome.value() > best.value()) best = std::move(climbed.genome);
  }
  return best;
}

struct SolveConfig {
  /// Hill-climb restarts for the initial incumbent; nullopt means 10n.
  /// Zero disables seeding (incumbent starts at -infinity).
  std::optional<std::size_t> restarts;
  /// Maximum nodes entered before giving up.
  std::uint64_t node_limit = std::numeric_limits<std::uint64_t>::max();
  /// Seed for the restart stream; nullopt derives it from the instance seed.
  std::optional<std::uint64_t> seed;
};

struct ExactResult {
  BitString optimum_bits;
  double optimum_value = 0.0;
  std::uint64_t nodes_expanded = 0;
  double seed_value = -std::numeric_limits<double>::infinity();
};

/// Thrown when the node limit is hit. Carries the best (uncertified) incumbent.
class NodeLimitExceeded : public ResourceLimit {
 public:
  NodeLimitExceeded(ExactResult incumbent)
      : ResourceLimit("branch and bound node limit exceeded"), incumbent_(std::move(incumbent)) {}
  const ExactResult& incumbent() const noexcept { return incumbent_; }

 private:
  ExactResult incumbent_;
};

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const NkInstance& inst, std::uint64_t node_limit) : inst_(inst), node_limit_(node_limit) {
    const std::size_t n = inst.n();
    const std::size_t k = inst.k();
    stage_max_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      // Index-bit shifts of the variables of s, ordered by bit position.
      std::vector<std::pair<std::uint32_t, std::uint32_t>> vars;
      vars.emplace_back(static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(k));
      const auto nb = inst.neighbors(s);
      for (std::size_t j = 0; j < k; ++j) vars.emplace_back(nb[j], static_cast<std::uint32_t>(k - 1 - j));
      std::sort(vars.begin(), vars.end());
      const auto tab = inst.table(s);
      auto& stages = stage_max_[s];
      stages.resize(k + 2);
      for (std::size_t t = 0; t <= k + 1; ++t) {
        stages[t].assign(std::size_t{1} << t, -std::numeric_limits<double>::infinity());
        for (std::size_t idx = 0; idx < tab.size(); ++idx) {
          std::size_t key = 0;
          for (std::size_t u = 0; u < t; ++u) key |= ((idx >> vars[u].second) & 1u) << u;
          stages[t][key] = std::max(stages[t][key], tab[idx]);
        }
      }
    }
    stage_.assign(n, 0);
    key_.assign(n, 0);
    prefix_.assign(n, 0);
  }

  void run(ExactResult& best) {
    best_ = &best;
    double root = 0.0;
    for (const auto& stages : stage_max_) root += stages[0][0];
    if (best.optimum_bits.empty()) best.optimum_value = -std::numeric_limits<double>::infinity();
    visit(0, root);
  }

 private:
  double child_bound(std::size_t depth, double bound, unsigned v) const {
    for (const auto& use : inst_.uses(depth)) {
      const auto s = use.fn;
      const auto& stages = stage_max_[s];
      bound += stages[stage_[s] + 1][key_[s] | (std::size_t{v} << stage_[s])] - stages[stage_[s]][key_[s]];
    }
    return bound;
  }

  void visit(std::size_t depth, double bound) {
    if (++best_->nodes_expanded > node_limit_) throw NodeLimitExceeded(*best_);
    const std::size_t n = inst_.n();
    if (depth == n) {
      const double value = evaluate(inst_, prefix_);
      if (value > best_->optimum_value) {
        best_->optimum_value = value;
        best_->optimum_bits = prefix_;
      }
      return;
    }
    const double b0 = child_bound(depth, bound, 0);
    const double b1 = child_bound(depth, bound, 1);
    const unsigned first = b1 > b0 ? 1u : 0u;
    for (unsigned c = 0; c < 2; ++c) {
      const unsigned v = c == 0 ? first : 1u - first;
      const double b = v ? b1 : b0;
      if (b <= best_->optimum_value + kPruneEps) continue;
      prefix_[depth] = static_cast<std::uint8_t>(v);
      for (const auto& use : inst_.uses(depth)) {
        key_[use.fn] |= std::size_t{v} << stage_[use.fn];
        ++stage_[use.fn];
      }
      visit(depth + 1, b);
      for (const auto& use : inst_.uses(depth)) {
        --stage_[use.fn];
        key_[use.fn] &= ~(std::size_t{1} << stage_[use.fn]);
      }
    }
    prefix_[depth] = 0;
  }

  const NkInstance& inst_;
  std::uint64_t node_limit_;
  // stage_max_[s][t][key]: best entry of table s given its t lowest-positioned
  // variables take the values packed in key.
  std::vector<std::vector<std::vector<double>>> stage_max_;
  std::vector<std::size_t> stage_;
  std::vector<std::size_t> key_;
  BitString prefix_;
  ExactResult* best_ = nullptr;
};

}  // namespace detail

/// Certified global optimum. Throws NodeLimitExceeded if the search is cut short.
inline ExactResult solve(const NkInstance& inst, const SolveConfig& config = {}) {
  ExactResult result;
  const std::size_t restarts = config.restarts.value_or(10 * inst.n());
  if (restarts > 0) {
    Rng rng(config.seed.value_or(derive_seed(inst.seed(), {hash_tag("seed-incumbent")})));
    Genome incumbent = seed_incumbent(inst, restarts, rng);
    result.seed_value = incumbent.value();
    result.optimum_value = incumbent.value();
    result.optimum_bits = std::move(incumbent.bits);
  }
  detail::BranchAndBound(inst, config.node_limit).run(result);
  return result;
}

}  // namespace nkbench

#endif  // NKBENCH_EXACT_HPP
