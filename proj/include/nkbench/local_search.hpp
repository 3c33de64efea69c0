#ifndef NKBENCH_LOCAL_SEARCH_HPP
#define NKBENCH_LOCAL_SEARCH_HPP

#include <cstddef>
#include <vector>

#include "nkbench/nk.hpp"

namespace nkbench {

/// Moves whose gain does not exceed this are treated as non-improving.
inline constexpr double kImproveEps = 1e-12;

struct LocalSearchResult {
  Genome genome;
  /// Accepted single-bit flips. This is the "DHC flips" statistic.
  std::size_t flips = 0;
  /// Candidate flips examined (accepted or not).
  std::size_t proposals = 0;
};

namespace detail {
inline Genome evaluated_copy(const NkInstance& inst, const Genome& start) {
  if (start.bits.size() != inst.n()) throw InvalidParameter("local search: start length does not match n");
  Genome g = start;
  if (!g.fitness) evaluate(inst, g);
  return g;
}
}  // namespace detail

/// Deterministic steepest-ascent hill climber. Each step applies the single
/// flip with the largest gain (lowest index on ties) until no flip gains more
/// than kImproveEps.
inline LocalSearchResult dhc(const NkInstance& inst, const Genome& start) {
  LocalSearchResult r{detail::evaluated_copy(inst, start), 0, 0};
  auto& bits = r.genome.bits;
  const std::size_t n = inst.n();
  double fitness = *r.genome.fitness;

  // gain[q] is kept current; a flip at p only changes gains of bits that
  // share a subfunction with p.
  std::vector<double> gain(n);
  for (std::size_t q = 0; q < n; ++q) gain[q] = delta_evaluate(inst, bits, 0.0, q);
  std::vector<std::size_t> stamp(n, 0);
  std::size_t epoch = 0;

  for (;;) {
    r.proposals += n;
    std::size_t best = n;
    double best_gain = kImproveEps;
    for (std::size_t q = 0; q < n; ++q) {
      if (gain[q] > best_gain) {
        best_gain = gain[q];
        best = q;
      }
    }
    if (best == n) break;
    bits[best] ^= 1u;
    fitness += best_gain;
    ++r.flips;
    ++epoch;
    for (const auto& use : inst.uses(best)) {
      const auto touch = [&](std::size_t q) {
        if (stamp[q] == epoch) return;
        stamp[q] = epoch;
        gain[q] = delta_evaluate(inst, bits, 0.0, q);
      };
      touch(use.fn);
      for (std::uint32_t nb : inst.neighbors(use.fn)) touch(nb);
    }
  }
  if (r.flips > 0) evaluate(inst, r.genome);  // drop accumulated rounding
  return r;
}

/// Stochastic bit-flip hill climber: proposes uniformly random single flips,
/// accepts strict improvements, and stops after 32n consecutive rejections.
inline LocalSearchResult stochastic_hill_climb(const NkInstance& inst, const Genome& start, Rng& rng) {
  LocalSearchResult r{detail::evaluated_copy(inst, start), 0, 0};
  auto& bits = r.genome.bits;
  const std::size_t n = inst.n();
  const std::size_t patience = 32 * n;
  double fitness = *r.genome.fitness;
  std::size_t rejections = 0;
  while (rejections < patience) {
    const auto pos = static_cast<std::size_t>(rng.below(n));
    ++r.proposals;
    const double next = delta_evaluate(inst, bits, fitness, pos);
    if (next - fitness > kImproveEps) {
      bits[pos] ^= 1u;
      fitness = next;
      ++r.flips;
      rejections = 0;
    } else {
      ++rejections;
    }
  }
  if (r.flips > 0) evaluate(inst, r.genome);
  return r;
}

}  // namespace nkbench

#endif  // NKBENCH_LOCAL_SEARCH_HPP
