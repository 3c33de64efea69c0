#ifndef NKBENCH_HBOA_HPP
#define NKBENCH_HBOA_HPP

// Bayesian networks with decision-tree local structures, as used by hBOA.
//
// Scoring: BDe with an equivalent sample size of 1 per leaf (0.5 per state),
// plus a complexity penalty of 0.5*log2(N) per leaf, N = |selected|. All
// scores are in bits (log base 2) so the two terms share units.
// Construction is greedy: the globally best positive-gain split is applied
// until none remains, keeping the dependency graph acyclic.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "nkbench/nk.hpp"

namespace nkbench::hboa {

inline constexpr double kLn2 = 0.69314718055994530942;

/// Log2 marginal likelihood of one leaf with counts (m0, m1).
inline double leaf_score(std::size_t m0, std::size_t m1) {
  const auto a = static_cast<double>(m0);
  const auto b = static_cast<double>(m1);
  const double ln = std::lgamma(1.0) - std::lgamma(1.0 + a + b) + std::lgamma(0.5 + a) - std::lgamma(0.5) +
                    std::lgamma(0.5 + b) - std::lgamma(0.5);
  return ln / kLn2;
}

inline double complexity_penalty(std::size_t selected_size) {
  return 0.5 * std::log2(static_cast<double>(selected_size));
}

struct TreeNode {
  int test_var = -1;  // -1 for a leaf
  int low = -1;       // child taken when test_var == 0
  int high = -1;      // child taken when test_var == 1
  std::size_t m0 = 0;
  std::size_t m1 = 0;

  bool is_leaf() const noexcept { return test_var < 0; }
};

/// Conditional model of one variable. nodes[0] is the root.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  std::size_t leaf_for(std::span<const std::uint8_t> bits) const {
    std::size_t at = 0;
    while (!nodes[at].is_leaf())
      at = static_cast<std::size_t>(bits[static_cast<std::size_t>(nodes[at].test_var)] ? nodes[at].high
                                                                                          : nodes[at].low);
    return at;
  }
  std::size_t leaf_count() const {
    std::size_t c = 0;
    for (const auto& nd : nodes) c += nd.is_leaf();
    return c;
  }
  /// Distinct variables tested anywhere in the tree.
  std::vector<std::size_t> parents() const {
    std::vector<std::size_t> out;
    for (const auto& nd : nodes) {
      if (nd.is_leaf()) continue;
      const auto v = static_cast<std::size_t>(nd.test_var);
      bool dup = false;
      for (auto p : out) dup |= (p == v);
      if (!dup) out.push_back(v);
    }
    return out;
  }
};

struct BayesNetModel {
  std::vector<DecisionTree> trees;
  /// Topological order: every tested variable precedes the variable it conditions.
  std::vector<std::size_t> order;
  /// Sum of leaf scores minus penalty per leaf, tracked incrementally during learning.
  double score = 0.0;
  double penalty_per_leaf = 0.0;
};

struct ModelConfig {
  /// Maximum distinct variables tested by one tree; nullopt = unlimited.
  std::optional<std::size_t> max_parents;
};

/// Net gain of replacing a leaf of tree `target` (holding `rows` of `selected`)
/// by a test on `candidate`.
inline double split_gain(std::span<const Genome> selected, std::span<const std::uint32_t> rows, std::size_t target,
                         std::size_t candidate) {
  std::size_t c[2][2] = {{0, 0}, {0, 0}};  // [candidate value][target value]
  for (auto r : rows) {
    const auto& b = selected[r].bits;
    ++c[b[candidate] & 1u][b[target] & 1u];
  }
  const double parent = leaf_score(c[0][0] + c[1][0], c[0][1] + c[1][1]);
  return leaf_score(c[0][0], c[0][1]) + leaf_score(c[1][0], c[1][1]) - parent -
         complexity_penalty(selected.size());
}

/// Recomputes the model score from the leaves.
inline double model_score(const BayesNetModel& model) {
  double s = 0.0;
  std::size_t leaves = 0;
  for (const auto& t : model.trees)
    for (const auto& nd : t.nodes)
      if (nd.is_leaf()) {
        s += leaf_score(nd.m0, nd.m1);
        ++leaves;
      }
  return s - model.penalty_per_leaf * static_cast<double>(leaves);
}

/// edges[j] lists every i whose tree tests j (i depends on j).
inline std::vector<std::vector<std::size_t>> dependency_edges(const BayesNetModel& model) {
  std::vector<std::vector<std::size_t>> out(model.trees.size());
  for (std::size_t i = 0; i < model.trees.size(); ++i)
    for (auto j : model.trees[i].parents()) out[j].push_back(i);
  return out;
}

namespace detail {

struct Leaf {
  std::size_t tree;
  std::size_t node;
  std::vector<std::uint32_t> rows;
  std::vector<bool> on_path;
  std::vector<double> gain;  // per candidate variable; -inf if not splittable
};

inline void score_leaf(std::span<const Genome> selected, Leaf& leaf, double penalty) {
  const std::size_t n = leaf.on_path.size();
  std::vector<std::size_t> c(4 * n, 0);
  std::size_t t1 = 0;
  for (auto r : leaf.rows) {
    const auto& b = selected[r].bits;
    const unsigned xt = b[leaf.tree] & 1u;
    t1 += xt;
    for (std::size_t j = 0; j < n; ++j) ++c[4 * j + 2 * (b[j] & 1u) + xt];
  }
  const double parent = leaf_score(leaf.rows.size() - t1, t1);
  leaf.gain.assign(n, -std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < n; ++j) {
    if (j == leaf.tree || leaf.on_path[j]) continue;
    leaf.gain[j] = leaf_score(c[4 * j], c[4 * j + 1]) + leaf_score(c[4 * j + 2], c[4 * j + 3]) - parent - penalty;
  }
}

}  // namespace detail

/// Greedy model construction. Ties go to the lower target variable, then
/// the earlier leaf, then the lower tested variable.
inline BayesNetModel learn_model(std::span<const Genome> selected, const ModelConfig& config = {}) {
  if (selected.empty()) throw InvalidParameter("learn_model: empty selection");
  const std::size_t n = selected.front().bits.size();
  const std::size_t rows_total = selected.size();
  for (const auto& g : selected)
    if (g.bits.size() != n) throw InvalidParameter("learn_model: genomes differ in length");

  BayesNetModel model;
  model.penalty_per_leaf = complexity_penalty(rows_total);
  model.trees.resize(n);

  std::vector<detail::Leaf> leaves;  // open leaves, in creation order
  for (std::size_t i = 0; i < n; ++i) {
    TreeNode root;
    for (const auto& g : selected) (g.bits[i] ? root.m1 : root.m0)++;
    model.trees[i].nodes.push_back(root);
    detail::Leaf leaf{i, 0, {}, std::vector<bool>(n, false), {}};
    leaf.rows.resize(rows_total);
    for (std::size_t r = 0; r < rows_total; ++r) leaf.rows[r] = static_cast<std::uint32_t>(r);
    detail::score_leaf(selected, leaf, model.penalty_per_leaf);
    leaves.push_back(std::move(leaf));
    model.score += leaf_score(root.m0, root.m1) - model.penalty_per_leaf;
  }

  // reach[a][b]: b depends on a through a chain of edges.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> is_parent(n, std::vector<bool>(n, false));
  std::vector<std::size_t> parent_count(n, 0);

  for (;;) {
    double best_gain = 0.0;
    std::size_t best_leaf = leaves.size();
    std::size_t best_var = n;
    // Order of the scan encodes the tie-break: target, leaf order, variable.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t li = 0; li < leaves.size(); ++li) {
        const auto& leaf = leaves[li];
        if (leaf.tree != i) continue;
        for (std::size_t j = 0; j < n; ++j) {
          const double g = leaf.gain[j];
          if (!(g > best_gain)) continue;
          if (!is_parent[i][j]) {
            if (reach[i][j]) continue;  // j already depends on i
            if (config.max_parents && parent_count[i] >= *config.max_parents) continue;
          }
          best_gain = g;
          best_leaf = li;
          best_var = j;
        }
      }
    }
    if (best_leaf == leaves.size()) break;

    detail::Leaf parent = std::move(leaves[best_leaf]);
    leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(best_leaf));
    const std::size_t i = parent.tree;
    const std::size_t j = best_var;
    auto& tree = model.trees[i];

    detail::Leaf lo{i, tree.nodes.size(), {}, parent.on_path, {}};
    detail::Leaf hi{i, tree.nodes.size() + 1, {}, parent.on_path, {}};
    lo.on_path[j] = hi.on_path[j] = true;
    TreeNode lo_node, hi_node;
    for (auto r : parent.rows) {
      const auto& b = selected[r].bits;
      auto& dest = b[j] ? hi : lo;
      auto& node = b[j] ? hi_node : lo_node;
      dest.rows.push_back(r);
      (b[i] ? node.m1 : node.m0)++;
    }
    tree.nodes[parent.node].test_var = static_cast<int>(j);
    tree.nodes[parent.node].low = static_cast<int>(lo.node);
    tree.nodes[parent.node].high = static_cast<int>(hi.node);
    tree.nodes.push_back(lo_node);
    tree.nodes.push_back(hi_node);
    detail::score_leaf(selected, lo, model.penalty_per_leaf);
    detail::score_leaf(selected, hi, model.penalty_per_leaf);
    leaves.push_back(std::move(lo));
    leaves.push_back(std::move(hi));
    model.score += best_gain;

    if (!is_parent[i][j]) {
      is_parent[i][j] = true;
      ++parent_count[i];
      // New edge j -> i: everything reaching j (and j) now reaches i and i's descendants.
      for (std::size_t x = 0; x < n; ++x) {
        if (x != j && !reach[x][j]) continue;
        for (std::size_t y = 0; y < n; ++y)
          if (y == i || reach[i][y]) reach[x][y] = true;
      }
      if (reach[i][i]) throw InvariantViolation("learn_model: dependency cycle");
    }
  }

  // Kahn's algorithm, smallest ready variable first.
  const auto edges = dependency_edges(model);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (auto i : edges[j]) ++indegree[i];
  std::vector<bool> done(n, false);
  model.order.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!done[v] && indegree[v] == 0) {
        next = v;
        break;
      }
    if (next == n) throw InvariantViolation("learn_model: dependency graph has a cycle");
    done[next] = true;
    model.order.push_back(next);
    for (auto i : edges[next]) --indegree[i];
  }
  return model;
}

/// Probability of emitting 1 at a leaf (posterior mean under the BDe prior).
inline double leaf_one_probability(const TreeNode& leaf) {
  return (static_cast<double>(leaf.m1) + 0.5) / (static_cast<double>(leaf.m0 + leaf.m1) + 1.0);
}

/// Ancestral sampling in topological order. Returned genomes are unevaluated.
inline std::vector<Genome> sample_model(const BayesNetModel& model, std::size_t count, Rng& rng) {
  const std::size_t n = model.trees.size();
  std::vector<Genome> out(count);
  for (auto& g : out) {
    g.bits.assign(n, 0);
    for (auto v : model.order) {
      const auto& tree = model.trees[v];
      g.bits[v] = rng.bernoulli(leaf_one_probability(tree.nodes[tree.leaf_for(g.bits)])) ? 1 : 0;
    }
  }
  return out;
}

/// Debug dump: per variable a nested {test_var, low, high} tree with {m0, m1} leaves.
inline nlohmann::json to_json(const BayesNetModel& model) {
  const auto node_json = [](const DecisionTree& t, std::size_t at, const auto& self) -> nlohmann::json {
    const auto& nd = t.nodes[at];
    if (nd.is_leaf()) return {{"m0", nd.m0}, {"m1", nd.m1}};
    return {{"test_var", nd.test_var},
            {"low", self(t, static_cast<std::size_t>(nd.low), self)},
            {"high", self(t, static_cast<std::size_t>(nd.high), self)}};
  };
  nlohmann::json j;
  j["format_version"] = 1;
  j["order"] = model.order;
  j["score"] = model.score;
  auto trees = nlohmann::json::array();
  for (const auto& t : model.trees) trees.push_back(node_json(t, 0, node_json));
  j["trees"] = std::move(trees);
  return j;
}

}  // namespace nkbench::hboa

#endif  // NKBENCH_HBOA_HPP
