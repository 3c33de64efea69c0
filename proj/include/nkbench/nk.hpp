#ifndef NKBENCH_NK_HPP
#define NKBENCH_NK_HPP

// NK landscape instances: generation, full and incremental evaluation,
// canonical JSON form.
//
// Table indexing: for subfunction i the index packs
//   (x_i, x_{nb[0]}, ..., x_{nb[k-1]})
// with x_i as the most significant bit and neighbors in stored (draw) order.
// Instance files depend on this convention; do not change it.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nkbench/error.hpp"
#include "nkbench/rng.hpp"

namespace nkbench {

using BitString = std::vector<std::uint8_t>;

/// Absolute tolerance for comparing fitness sums.
inline constexpr double kFitnessTol = 1e-9;

inline constexpr int kInstanceFormatVersion = 1;

class NkInstance {
 public:
  /// Where bit p enters subfunction `fn`: `shift` is the bit position inside
  /// the table index.
  struct Use {
    std::uint32_t fn;
    std::uint32_t shift;
  };

  NkInstance(std::size_t n, std::size_t k, std::uint64_t seed, std::vector<std::vector<std::uint32_t>> neighbors,
             std::vector<std::vector<double>> tables)
      : n_(n), k_(k), seed_(seed), neighbors_(std::move(neighbors)), tables_(std::move(tables)) {
    validate();
    uses_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      uses_[i].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k_)});
      for (std::size_t j = 0; j < k_; ++j)
        uses_[neighbors_[i][j]].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(k_ - 1 - j)});
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t table_size() const noexcept { return std::size_t{1} << (k_ + 1); }

  std::span<const std::uint32_t> neighbors(std::size_t i) const { return neighbors_[i]; }
  std::span<const double> table(std::size_t i) const { return tables_[i]; }
  /// Subfunctions whose variable set contains bit p (including f_p itself).
  std::span<const Use> uses(std::size_t p) const { return uses_[p]; }

  std::size_t index(std::size_t i, std::span<const std::uint8_t> bits) const {
    std::size_t idx = bits[i] & 1u;
    for (std::uint32_t nb : neighbors_[i]) idx = (idx << 1) | (bits[nb] & 1u);
    return idx;
  }

  double subfunction(std::size_t i, std::span<const std::uint8_t> bits) const { return tables_[i][index(i, bits)]; }

  friend bool operator==(const NkInstance& a, const NkInstance& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.seed_ == b.seed_ && a.neighbors_ == b.neighbors_ &&
           a.tables_ == b.tables_;
  }

 private:
  void validate() const {
    detail::require(n_ > 0, "n must be positive");
    detail::require(k_ < n_, "k must satisfy 0 <= k <= n-1");
    detail::require(neighbors_.size() == n_ && tables_.size() == n_, "need one neighbor list and table per bit");
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& nb = neighbors_[i];
      detail::require(nb.size() == k_, "neighbor list " + std::to_string(i) + " must have k entries");
      std::vector<bool> seen(n_, false);
      for (std::uint32_t p : nb) {
        detail::require(p < n_ && p != i && !seen[p], "bad neighbor list for bit " + std::to_string(i));
        seen[p] = true;
      }
      detail::require(tables_[i].size() == table_size(), "table " + std::to_string(i) + " must have 2^(k+1) entries");
      for (double v : tables_[i]) detail::require(v >= 0.0 && v < 1.0, "table entries must lie in [0,1)");
    }
  }

  std::size_t n_;
  std::size_t k_;
  std::uint64_t seed_;
  std::vector<std::vector<std::uint32_t>> neighbors_;
  std::vector<std::vector<double>> tables_;
  std::vector<std::vector<Use>> uses_;
};

/// Candidate solution; `fitness` is a cache of evaluate(bits).
struct Genome {
  BitString bits;
  std::optional<double> fitness;

  std::size_t size() const noexcept { return bits.size(); }
  double value() const {
    if (!fitness) throw InvariantViolation("genome fitness not evaluated");
    return *fitness;
  }
};

/// Draws a random instance. Neighbors of bit i: a uniform k-subset of
/// {0..n-1}\{i} via Floyd's algorithm, kept in draw order. Tables: i.i.d. U[0,1).
inline NkInstance generate_instance(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n == 0 || k >= n) throw InvalidParameter("generate_instance: need n > 0 and 0 <= k <= n-1");
  Rng rng(seed);
  std::vector<std::vector<std::uint32_t>> neighbors(n);
  std::vector<std::vector<double>> tables(n);
  const std::size_t pool = n - 1;  // positions other than i, relabelled 0..n-2
  const std::size_t entries = std::size_t{1} << (k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    auto& nb = neighbors[i];
    nb.reserve(k);
    for (std::size_t j = pool - k; j < pool; ++j) {
      auto t = static_cast<std::uint32_t>(rng.below(j + 1));
      const auto already = [&](std::uint32_t v) {
        for (std::uint32_t x : nb)
          if (x == v) return true;
        return false;
      };
      nb.push_back(already(t) ? static_cast<std::uint32_t>(j) : t);
    }
    for (auto& p : nb)
      if (p >= i) ++p;
    auto& tab = tables[i];
    tab.resize(entries);
    for (auto& v : tab) v = rng.uniform();
  }
  return NkInstance(n, k, seed, std::move(neighbors), std::move(tables));
}

inline double evaluate(const NkInstance& inst, std::span<const std::uint8_t> bits) {
  if (bits.size() != inst.n()) throw InvalidParameter("evaluate: bit string length does not match n");
  double sum = 0.0;
  for (std::size_t i = 0; i < inst.n(); ++i) sum += inst.subfunction(i, bits);
  return sum;
}

/// Fills in the cached fitness and returns it.
inline double evaluate(const NkInstance& inst, Genome& g) {
  g.fitness = evaluate(inst, std::span<const std::uint8_t>(g.bits));
  return *g.fitness;
}

/// Fitness after flipping bit `pos`, given the current fitness. Touches only
/// the subfunctions that read `pos`.
inline double delta_evaluate(const NkInstance& inst, std::span<const std::uint8_t> bits, double fitness,
                             std::size_t pos) {
  if (pos >= inst.n()) throw InvalidParameter("delta_evaluate: flip position out of range");
  if (bits.size() != inst.n()) throw InvalidParameter("delta_evaluate: bit string length does not match n");
  double delta = 0.0;
  for (const auto& use : inst.uses(pos)) {
    const std::size_t idx = inst.index(use.fn, bits);
    const auto tab = inst.table(use.fn);
    delta += tab[idx ^ (std::size_t{1} << use.shift)] - tab[idx];
  }
  return fitness + delta;
}

inline BitString random_bits(std::size_t n, Rng& rng) {
  BitString b(n);
  for (auto& x : b) x = rng.coin() ? 1 : 0;
  return b;
}

// ---------------------------------------------------------------------------
// Canonical JSON: { format_version, n, k, seed, neighbors, tables }.
// nlohmann::json prints doubles in shortest round-trip form.

inline nlohmann::json to_json(const NkInstance& inst) {
  nlohmann::json j;
  j["format_version"] = kInstanceFormatVersion;
  j["n"] = inst.n();
  j["k"] = inst.k();
  j["seed"] = inst.seed();
  auto nbs = nlohmann::json::array();
  auto tabs = nlohmann::json::array();
  for (std::size_t i = 0; i < inst.n(); ++i) {
    auto nb = inst.neighbors(i);
    nbs.push_back(std::vector<std::uint32_t>(nb.begin(), nb.end()));
    auto t = inst.table(i);
    tabs.push_back(std::vector<double>(t.begin(), t.end()));
  }
  j["neighbors"] = std::move(nbs);
  j["tables"] = std::move(tabs);
  return j;
}

inline NkInstance instance_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kInstanceFormatVersion)
      throw InvalidParameter("unsupported instance format_version " + std::to_string(version));
    return NkInstance(j.at("n").get<std::size_t>(), j.at("k").get<std::size_t>(), j.at("seed").get<std::uint64_t>(),
                      j.at("neighbors").get<std::vector<std::vector<std::uint32_t>>>(),
                      j.at("tables").get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("malformed instance JSON: ") + e.what());
  }
}

inline std::string bits_to_string(std::span<const std::uint8_t> bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) s[i] = '1';
  return s;
}

inline BitString bits_from_string(std::string_view s) {
  BitString b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw InvalidParameter("bit string must contain only 0/1");
    b[i] = s[i] == '1';
  }
  return b;
}

inline std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

}  // namespace nkbench

#endif  // NKBENCH_NK_HPP
