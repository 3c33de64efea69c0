// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "enumerate.hpp"
#include "nkbench/harness.hpp"

using namespace nkbench;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("nkbench_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

AlgorithmSpec spec(Algorithm a) {
  AlgorithmSpec s;
  s.algorithm = a;
  return s;
}

SweepOptions quiet(const fs::path& dir) {
  SweepOptions o;
  o.output_dir = dir;
  return o;
}

// Naive fitness straight from the tables: subfunction i indexed by x_i then
// its neighbours, most significant first.
double naive_fitness(const NkInstance& inst, const BitString& bits) {
  double sum = 0.0;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    std::size_t idx = bits[i];
    for (auto p : inst.neighbors(i)) idx = idx * 2 + bits[p];
    sum += inst.table(i)[idx];
  }
  return sum;
}

Verdict exactness() {
  std::size_t checked = 0, agree = 0;
  std::uint64_t seed = 1;
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t n : {12, 16, 20})
    for (std::size_t k = 2; k <= 6; ++k) cells.emplace_back(n, k);
  for (std::size_t i = 0; i < 200; ++i, ++seed) {
    const auto [n, k] = cells[i % cells.size()];
    const auto inst = generate_instance(n, k, derive_seed(0xACCE, {seed}));
    const auto bb = solve(inst);
    const auto e = oracle::enumerate(inst);
    ++checked;
    agree += bb.optimum_value == e.best && naive_fitness(inst, bb.optimum_bits) == e.best;
  }
  return {agree == checked, std::to_string(agree) + "/" + std::to_string(checked) + " optima equal enumeration"};
}

Verdict delta_equivalence() {
  Rng rng(0xDE17A);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 2 + rng.below(49);
    const std::size_t k = rng.below(std::min<std::size_t>(6, n - 1) + 1);
    const auto inst = generate_instance(n, k, rng.below(std::uint64_t{1} << 62));
    auto bits = random_bits(n, rng);
    const auto pos = static_cast<std::size_t>(rng.below(n));
    const double d = delta_evaluate(inst, bits, evaluate(inst, std::span<const std::uint8_t>(bits)), pos);
    bits[pos] ^= 1u;
    worst = std::max({worst, std::abs(d - evaluate(inst, std::span<const std::uint8_t>(bits))),
                      std::abs(d - naive_fitness(inst, bits))});
  }
  std::ostringstream s;
  s << "max |delta - full| = " << worst << " over 10000 triples";
  return {worst <= kFitnessTol, s.str()};
}

Verdict solve_audit() {
  const std::size_t count = 50;
  std::vector<NkInstance> instances;
  std::vector<double> optima;
  for (std::size_t i = 0; i < count; ++i) {
    instances.push_back(generate_instance(24, 3, sweep_instance_seed(0x5017, 3, 24, i)));
    optima.push_back(solve(instances.back()).optimum_value);
  }
  std::ostringstream s;
  bool ok = true;
  for (auto alg : kAllAlgorithms) {
    std::size_t good = 0;
    std::vector<char> pass(count, 0);
    parallel_for(count, std::max(1u, std::thread::hardware_concurrency()), [&](std::size_t i) {
      EvoConfig cfg;
      cfg.algorithm = alg;
      const auto res = bisect_population_size(instances[i], optima[i], cfg, derive_seed(0xA0D17, {i}));
      bool all = res.runs.size() == 10;
      for (const auto& r : res.runs)
        all = all && r.success &&
              std::abs(evaluate(instances[i], std::span<const std::uint8_t>(r.best.bits)) - optima[i]) <= kFitnessTol;
      pass[i] = all;
    });
    for (char p : pass) good += p;
    ok = ok && good == count;
    s << to_string(alg) << " " << good << "/" << count << " ";
  }
  return {ok, s.str()};
}

struct ScaleRuns {
  std::vector<RunRecord> uniform;      // k = 2..5 at n = 30
  std::vector<RunRecord> nocrossover;  // k = 4 at n = 30
};

const ScaleRuns& scale_runs() {
  static const ScaleRuns runs = [] {
    SweepConfig c;
    c.grid = {{2, {30}}, {3, {30}}, {4, {30}}, {5, {30}}};
    c.instances_per_cell = 100;
    c.algorithms = {spec(Algorithm::GaUniform)};
    c.master_seed = 30;
    ScaleRuns r;
    r.uniform = run_sweep(c, quiet(scratch("k_trend"))).records;
    c.grid = {{4, {30}}};
    c.algorithms = {spec(Algorithm::GaNoCrossover)};
    r.nocrossover = run_sweep(c, quiet(scratch("nocrossover"))).records;
    return r;
  }();
  return runs;
}

Verdict k_trend() {
  const auto cells = aggregate(scale_runs().uniform);
  std::ostringstream s;
  bool ok = cells.size() == 4;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    ok = ok && cells[i].instances == 100;
    if (i > 0) ok = ok && cells[i].evaluations.mean > cells[i - 1].evaluations.mean;
    s << "k=" << cells[i].k << " mean_evals=" << cells[i].evaluations.mean << " ";
  }
  return {ok, s.str()};
}

Verdict crossover_direction() {
  std::vector<RunRecord> uniform_k4;
  for (const auto& r : scale_runs().uniform)
    if (r.k == 4) uniform_k4.push_back(r);
  const auto curve = compare(scale_runs().nocrossover, uniform_k4);
  if (curve.points.size() != 1) return {false, "expected one (30,4) cell"};
  const auto& p = curve.points[0];
  std::ostringstream s;
  s << "instances=" << p.instances << " ratio_flips=" << p.ratio_flips << " ratio_evaluations=" << p.ratio_evaluations;
  return {p.instances == 100 && p.ratio_flips > 1.0 && p.ratio_evaluations > 1.0, s.str()};
}

Verdict self_identity() {
  // Through the file format, as a user would.
  const auto path = scratch("self") / "results.csv";
  fs::create_directories(path.parent_path());
  io::write_file_atomic(path, results_csv(scale_runs().uniform));
  const auto recs = parse_results_csv(io::read_file(path));
  const auto curve = compare(recs, recs);
  bool ok = curve.points.size() == 4;
  for (const auto& p : curve.points) ok = ok && p.ratio_evaluations == 1.0 && p.ratio_flips == 1.0;
  return {ok, std::to_string(curve.points.size()) + " cells, all ratios exactly 1"};
}

SweepConfig desk_config() {
  SweepConfig c;
  c.grid = {{2, {20, 24}}, {3, {20, 24}}, {4, {20}}};
  c.instances_per_cell = 10;
  c.algorithms = {spec(Algorithm::Hboa), spec(Algorithm::Umda), spec(Algorithm::GaUniform),
                  spec(Algorithm::GaTwoPoint), spec(Algorithm::GaNoCrossover)};
  c.master_seed = 7;
  return c;
}

Verdict determinism() {
  const auto a = scratch("det_a"), b = scratch("det_b");
  run_sweep(desk_config(), quiet(a));
  auto opts = quiet(b);
  opts.workers = opts.workers + 2;  // scheduling must not matter
  run_sweep(desk_config(), opts);
  const bool results = io::read_file(a / "results.csv") == io::read_file(b / "results.csv");
  const bool manifest = io::read_file(a / "manifest.json") == io::read_file(b / "manifest.json");
  return {results && manifest, std::string("results.csv ") + (results ? "identical" : "differs") + ", manifest.json " +
                                   (manifest ? "identical" : "differs")};
}

Verdict operators() {
  const std::size_t trials = 200000;
  Rng rng(0x0FE7);
  const std::vector<Genome> pair = {Genome{{1}, 1.0}, Genome{{0}, 0.0}};
  std::size_t best = 0;
  for (const auto& g : tournament_select(pair, trials, rng)) best += g.bits[0];
  const double best_rate = static_cast<double>(best) / trials;

  const std::size_t n = 40;
  const Genome zeros{BitString(n, 0), {}}, ones{BitString(n, 1), {}};
  std::size_t swapped = 0;
  for (std::size_t t = 0; t < trials; ++t) swapped += hamming(uniform_crossover(zeros, ones, rng).first.bits, zeros.bits);
  const double swap_rate = static_cast<double>(swapped) / (trials * n);

  std::size_t flips = 0;
  for (std::size_t t = 0; t < trials; ++t) flips += hamming(bit_flip_mutation(zeros, 1.0 / n, rng).bits, zeros.bits);
  const double mean_flips = static_cast<double>(flips) / trials;

  std::ostringstream s;
  s << "best_pick=" << best_rate << " swap=" << swap_rate << " flips=" << mean_flips;
  return {std::abs(best_rate - 0.75) <= 0.02 && std::abs(swap_rate - 0.5) <= 0.01 && std::abs(mean_flips - 1.0) <= 0.02,
          s.str()};
}

Verdict hboa_sanity() {
  std::size_t exact = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    Rng rng(derive_seed(0xB0A, {t}));
    std::vector<Genome> rows(256);
    for (auto& g : rows) {
      g.bits = random_bits(10, rng);
      g.bits[1] = g.bits[0];
    }
    const auto m = hboa::learn_model(rows);
    std::size_t edges = 0;
    for (const auto& tree : m.trees) edges += tree.parents().size();
    const auto p0 = m.trees[0].parents(), p1 = m.trees[1].parents();
    exact += edges == 1 && ((p1.size() == 1 && p1[0] == 0) || (p0.size() == 1 && p0[0] == 1));
  }
  Rng rng(0xB0B);
  std::vector<Genome> rows(1000);
  for (auto& g : rows) g.bits = random_bits(20, rng);
  std::vector<std::uint32_t> all(rows.size());
  for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  std::size_t negative = 0, total = 0;
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j)
      if (i != j) {
        negative += hboa::split_gain(rows, all, i, j) < 0.0;
        ++total;
      }
  const double neg_rate = static_cast<double>(negative) / total;
  std::ostringstream s;
  s << "single edge " << exact << "/50, negative splits " << neg_rate;
  return {exact >= 45 && neg_rate >= 0.95, s.str()};
}

Verdict rtr_invariants() {
  Rng rng(0x717);
  const auto inst = generate_instance(24, 4, 3);
  const auto random_members = [&](std::size_t count) {
    std::vector<Genome> v(count);
    for (auto& g : v) {
      g.bits = random_bits(24, rng);
      evaluate(inst, g);
    }
    return v;
  };
  std::size_t violations = 0;
  Population pop;
  pop.members = random_members(40);
  for (int t = 0; t < 10000; ++t) {
    // Occasionally start over with a different size.
    if (t % 500 == 0) pop.members = random_members(2 + 2 * rng.below(30));
    const std::size_t N = pop.size();
    const double before = pop.best_fitness();
    rtr_replace(pop, random_members(1 + rng.below(N)), 1 + rng.below(N), rng);
    violations += pop.size() != N || pop.best_fitness() < before;
  }
  return {violations == 0, std::to_string(violations) + " violations in 10000 calls"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 exactness", exactness},
      {"2 delta-evaluation", delta_equivalence},
      {"3 solve-audit", solve_audit},
      {"4 k-trend", k_trend},
      {"5 crossover-vs-mutation", crossover_direction},
      {"6 self-comparison", self_identity},
      {"7 determinism", determinism},
      {"8 operators", operators},
      {"9 hboa-model", hboa_sanity},
      {"10 rtr-invariants", rtr_invariants},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::printf("%s %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
