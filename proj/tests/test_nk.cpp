#include <gtest/gtest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "nkbench/nk.hpp"

using namespace nkbench;

namespace {

// Independent re-summation of the objective: build each table index bit by
// bit from the definition, without NkInstance::index.
double naive_objective(const NkInstance& inst, const BitString& bits) {
  double total = 0.0;
  const std::size_t k = inst.k();
  for (std::size_t i = 0; i < inst.n(); ++i) {
    std::size_t idx = 0;
    idx += static_cast<std::size_t>(bits[i]) * (std::size_t{1} << k);
    for (std::size_t j = 0; j < k; ++j)
      idx += static_cast<std::size_t>(bits[inst.neighbors(i)[j]]) * (std::size_t{1} << (k - 1 - j));
    total += inst.table(i)[idx];
  }
  return total;
}

}  // namespace

TEST(GenerateInstance, ShapeForN20K2) {
  const auto inst = generate_instance(20, 2, 99);
  EXPECT_EQ(inst.n(), 20u);
  EXPECT_EQ(inst.k(), 2u);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(inst.neighbors(i).size(), 2u);
    ASSERT_EQ(inst.table(i).size(), 8u);
    for (double v : inst.table(i)) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(GenerateInstance, KZeroHasNoNeighbors) {
  const auto inst = generate_instance(5, 0, 3);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_TRUE(inst.neighbors(i).empty());
    EXPECT_EQ(inst.table(i).size(), 2u);
  }
}

TEST(GenerateInstance, DeterministicBySeed) {
  EXPECT_EQ(generate_instance(12, 3, 7), generate_instance(12, 3, 7));
  EXPECT_FALSE(generate_instance(12, 3, 7) == generate_instance(12, 3, 8));
}

TEST(GenerateInstance, RejectsBadParameters) {
  EXPECT_THROW(generate_instance(0, 0, 1), InvalidParameter);
  EXPECT_THROW(generate_instance(4, 4, 1), InvalidParameter);
  EXPECT_THROW(generate_instance(4, 9, 1), InvalidParameter);
  EXPECT_NO_THROW(generate_instance(4, 3, 1));
}

TEST(GenerateInstance, NeighborListsAreValidSubsets) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 3 + seed % 20;
    const std::size_t k = seed % n;
    const auto inst = generate_instance(n, k, seed);
    for (std::size_t i = 0; i < n; ++i) {
      std::set<std::uint32_t> s(inst.neighbors(i).begin(), inst.neighbors(i).end());
      EXPECT_EQ(s.size(), k);
      EXPECT_FALSE(s.count(static_cast<std::uint32_t>(i)));
      for (auto p : s) EXPECT_LT(p, n);
    }
  }
}

// Each other position should be chosen as a neighbor with probability k/(n-1).
TEST(GenerateInstance, NeighborSelectionIsUniform) {
  const std::size_t n = 8, k = 3, trials = 4000;
  std::vector<std::size_t> hits(n, 0);
  for (std::uint64_t s = 0; s < trials; ++s) {
    const auto inst = generate_instance(n, k, 1000 + s);
    for (auto p : inst.neighbors(0)) ++hits[p];
  }
  EXPECT_EQ(hits[0], 0u);
  const double expect = static_cast<double>(trials) * k / (n - 1);
  for (std::size_t p = 1; p < n; ++p) EXPECT_NEAR(hits[p] / expect, 1.0, 0.06) << "position " << p;
}

TEST(GenerateInstance, TableMeanIsOneHalf) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::uint64_t s = 0; count < 100000; ++s) {
    const auto inst = generate_instance(20, 4, s);
    for (std::size_t i = 0; i < inst.n(); ++i)
      for (double v : inst.table(i)) {
        sum += v;
        ++count;
      }
  }
  EXPECT_NEAR(sum / static_cast<double>(count), 0.5, 0.01);
}

TEST(Evaluate, KZeroAllZerosSumsFirstEntries) {
  const auto inst = generate_instance(6, 0, 11);
  double expect = 0.0;
  for (std::size_t i = 0; i < 6; ++i) expect += inst.table(i)[0];
  EXPECT_DOUBLE_EQ(evaluate(inst, BitString(6, 0)), expect);
}

TEST(Evaluate, MatchesNaiveResummation) {
  Rng rng(5);
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto inst = generate_instance(8, 2, s);
    const auto bits = random_bits(8, rng);
    const double v = evaluate(inst, std::span<const std::uint8_t>(bits));
    EXPECT_NEAR(v, naive_objective(inst, bits), kFitnessTol);
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 8.0);
  }
}

TEST(Evaluate, IndexConventionSelfBitIsMostSignificant) {
  // One bit with one neighbor: index = 2*x_self + x_neighbor.
  const NkInstance inst(2, 1, 0, {{1}, {0}}, {{0.0, 0.1, 0.2, 0.3}, {0.0, 0.01, 0.02, 0.03}});
  EXPECT_DOUBLE_EQ(evaluate(inst, BitString{1, 0}), 0.2 + 0.01);
  EXPECT_DOUBLE_EQ(evaluate(inst, BitString{0, 1}), 0.1 + 0.02);
}

TEST(Evaluate, RejectsLengthMismatch) {
  const auto inst = generate_instance(6, 1, 1);
  EXPECT_THROW(evaluate(inst, BitString(5, 0)), InvalidParameter);
}

TEST(DeltaEvaluate, MatchesFullEvaluation) {
  Rng rng(123);
  for (int t = 0; t < 1000; ++t) {
    const auto inst = generate_instance(30, 5, 500 + t / 10);
    auto bits = random_bits(30, rng);
    const double f = evaluate(inst, std::span<const std::uint8_t>(bits));
    const auto pos = static_cast<std::size_t>(rng.below(30));
    const double d = delta_evaluate(inst, bits, f, pos);
    bits[pos] ^= 1u;
    EXPECT_NEAR(d, evaluate(inst, std::span<const std::uint8_t>(bits)), kFitnessTol);
  }
}

TEST(DeltaEvaluate, FlipTwiceIsIdentity) {
  Rng rng(9);
  const auto inst = generate_instance(25, 4, 17);
  for (int t = 0; t < 200; ++t) {
    auto bits = random_bits(25, rng);
    const double f = evaluate(inst, std::span<const std::uint8_t>(bits));
    const auto pos = static_cast<std::size_t>(rng.below(25));
    const double once = delta_evaluate(inst, bits, f, pos);
    bits[pos] ^= 1u;
    EXPECT_NEAR(delta_evaluate(inst, bits, once, pos), f, kFitnessTol);
  }
}

TEST(DeltaEvaluate, SeparableCaseIsLocal) {
  const auto inst = generate_instance(10, 0, 4);
  Rng rng(1);
  const auto bits = random_bits(10, rng);
  const double f = evaluate(inst, std::span<const std::uint8_t>(bits));
  for (std::size_t p = 0; p < 10; ++p) {
    const auto t = inst.table(p);
    EXPECT_NEAR(delta_evaluate(inst, bits, f, p) - f, t[bits[p] ^ 1u] - t[bits[p]], 1e-12);
  }
}

TEST(DeltaEvaluate, RejectsOutOfRange) {
  const auto inst = generate_instance(6, 2, 1);
  EXPECT_THROW(delta_evaluate(inst, BitString(6, 0), 0.0, 6), InvalidParameter);
}

TEST(InstanceJson, RoundTripsBitExactly) {
  const auto inst = generate_instance(20, 4, 77);
  const auto text = to_json(inst).dump();
  const auto back = instance_from_json(nlohmann::json::parse(text));
  EXPECT_EQ(back, inst);
  EXPECT_EQ(to_json(back).dump(), text);
}

TEST(InstanceJson, RejectsInvalidContent) {
  auto j = to_json(generate_instance(5, 2, 1));
  auto bad = j;
  bad["format_version"] = 99;
  EXPECT_THROW(instance_from_json(bad), InvalidParameter);
  bad = j;
  bad["tables"][0][0] = 1.0;
  EXPECT_THROW(instance_from_json(bad), InvalidParameter);
  bad = j;
  bad["neighbors"][0][0] = 0;
  EXPECT_THROW(instance_from_json(bad), InvalidParameter);
  bad = j;
  bad.erase("k");
  EXPECT_THROW(instance_from_json(bad), InvalidParameter);
}

TEST(Rng, DerivedStreamsAreReproducible) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(r.below(13), 13u);
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
