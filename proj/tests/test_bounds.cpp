#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hecke/bounds.hpp"
#include "oracle.hpp"

namespace hecke {
namespace {

oracle::PrimeValues values_of(const PrimeAssignment& model) {
  return [model](std::uint64_t p) { return model.value_at(p); };
}

void expect_close(const BoundReport& r, const oracle::Sides& naive) {
  EXPECT_LE(relative_difference(r.lhs, naive.lhs), 1e-9) << r.label << " lhs " << r.lhs << " vs " << naive.lhs;
  EXPECT_LE(relative_difference(r.rhs, naive.rhs), 1e-9) << r.label << " rhs " << r.rhs << " vs " << naive.rhs;
}

// ---------------------------------------------------------------------------
// Dyadic classes and partition depth

TEST(DyadicClass, ThresholdsAreInclusiveAbove) {
  EXPECT_EQ(dyadic_class(0.0), 0u);
  EXPECT_EQ(dyadic_class(0.5), 0u);
  EXPECT_EQ(dyadic_class(0.6), 1u);
  EXPECT_EQ(dyadic_class(1.0), 1u);
  EXPECT_EQ(dyadic_class(1.5), 2u);
  EXPECT_EQ(dyadic_class(2.0), 2u);
  EXPECT_EQ(dyadic_class(std::nextafter(2.0, 3.0)), 3u);
  EXPECT_THROW(dyadic_class(-1.0), std::invalid_argument);
  for (double a = 0.01; a < 40.0; a *= 1.013) EXPECT_EQ(dyadic_class(a), oracle::naive_class(a)) << a;
}

TEST(PartitionDepth, Examples) {
  EXPECT_EQ(partition_depth(1.0), 3u);
  EXPECT_EQ(partition_depth(std::ldexp(1.0, -8)), 5u);
  EXPECT_EQ(partition_depth(std::ldexp(1.0, -4)), 4u);
  EXPECT_EQ(partition_depth(0.07), 3u);
  EXPECT_THROW(partition_depth(0.0), std::domain_error);
}

TEST(PartitionPrimes, ExtremalPutsEveryPrimeInClassZero) {
  const auto seq = build_sequence(extremal_model(), 1000000);
  const auto part = partition_primes(seq, 40000.0);
  EXPECT_EQ(part.primes, oracle::primes_between(100, 200));
  EXPECT_EQ(part.set(0).size(), part.primes.size());
  for (unsigned j = 1; j <= part.J; ++j) EXPECT_TRUE(part.set(j).empty());
  EXPECT_FALSE(part.warning.empty());
}

TEST(PartitionPrimes, TauLikeLandsInClassTwo) {
  // |f(p)| = 2 satisfies 2^0 < 2 <= 2^1
  const auto seq = build_sequence(tau_like_model(), 100000);
  const auto part = partition_primes(seq, 40000.0);
  EXPECT_GE(part.J, 2u);
  EXPECT_EQ(part.set(2).size(), part.primes.size());
  EXPECT_EQ(part.class_of(101), std::optional<unsigned>{2});
  EXPECT_EQ(part.class_of(102), std::nullopt);
}

TEST(PartitionPrimes, MatchesNaivePartition) {
  for (std::uint64_t seed : {1u, 5u, 9u}) {
    const auto model = sato_tate_model(seed);
    const auto seq = build_sequence(model, 60000);
    const auto naive = oracle::naive_sequence(values_of(model), 60000);
    for (double y : {16.0, 300.0, 4000.0, 59999.0}) {
      const auto part = partition_primes(seq, y);
      const auto expected = oracle::naive_partition(naive, y);
      ASSERT_EQ(part.J, expected.J) << y;
      for (unsigned j = 0; j <= part.J; ++j) EXPECT_EQ(part.set(j), expected.sets[j]) << "y=" << y << " j=" << j;
    }
  }
}

TEST(PartitionPrimes, Preconditions) {
  const auto seq = build_sequence(extremal_model(), 1000);
  EXPECT_THROW(partition_primes(seq, 3.0), std::invalid_argument);
  EXPECT_THROW(partition_primes(seq, 5000.0), std::domain_error);
}

TEST(SmoothnessCount, AgreesWithSievedCounts) {
  const auto seq = build_sequence(sato_tate_model(2), 100000);
  const auto part = partition_primes(seq, 10000.0);
  for (unsigned j = 0; j <= part.J; ++j) {
    const auto counts = class_counts(part, j, 100000);
    for (std::uint64_t n = 1; n <= 100000; ++n) {
      ASSERT_EQ(smoothness_count(part, n).count(j), counts[n]) << "j=" << j << " n=" << n;
    }
  }
  // 53^2 * 59: 53 counts in its class (squared, so also in P_0); 59 only outside P_0
  const auto c = smoothness_count(part, 53ULL * 53 * 59);
  const unsigned j53 = part.class_of(53).value();
  const unsigned j59 = part.class_of(59).value();
  for (unsigned j = 0; j <= part.J; ++j) {
    EXPECT_EQ(c.count(j), (j53 == j ? 1u : 0u) + (j59 == j && j != 0 ? 1u : 0u)) << j;
  }
  EXPECT_TRUE(in_class_set(c, j53, c.count(j53)));
  EXPECT_FALSE(in_class_set(c, j53, c.count(j53) - 1));
}

// ---------------------------------------------------------------------------
// Pointwise prime bounds

TEST(PointwisePrimeBound, ExtremalIsTrivial) {
  const auto seq = build_sequence(extremal_model(), 10000);
  for (std::uint64_t p : {2u, 3u, 97u, 9973u}) {
    const auto r = check_lemma31_first(seq, p);
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_TRUE(r.pass);
  }
  for (const auto& r : check_lemma31_second(seq, 7)) EXPECT_TRUE(r.pass) << r.label;
}

TEST(PointwisePrimeBound, TauLikeAtTwo) {
  const auto seq = build_sequence(tau_like_model(), 10000);
  const auto naive = oracle::naive_sequence(values_of(tau_like_model()), 10000);
  const auto r = check_lemma31_first(seq, 2);
  EXPECT_EQ(r.lhs, 2.0);
  EXPECT_TRUE(r.pass);
  expect_close(r, oracle::lemma31_first(naive, 2));
  EXPECT_TRUE(check_lemma31_second(build_sequence(tau_like_model(), 1000000), 2).front().pass);
}

TEST(PointwisePrimeBound, SatoTateSeedOneAtThree) {
  const auto model = sato_tate_model(1);
  const auto seq = build_sequence(model, 100000);
  const auto r = check_lemma31_first(seq, 3);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.margin, 0.0);
  expect_close(r, oracle::lemma31_first(oracle::naive_sequence(values_of(model), 100000), 3));
}

TEST(PointwisePrimeBound, AllPrimesAndNaiveOracle) {
  const auto model = sato_tate_model(4);
  const auto seq = build_sequence(model, 30000);
  const auto naive = oracle::naive_sequence(values_of(model), 30000);
  for (const auto p : primes_in_range(2, 30000).primes) {
    const auto r = check_lemma31_first(seq, p);
    ASSERT_TRUE(r.pass) << p;
    expect_close(r, oracle::lemma31_first(naive, p));
    if (p * p > 30000) continue;
    const auto second = check_lemma31_second(seq, p);
    ASSERT_EQ(second.size(), 3u);
    for (const auto& s : second) ASSERT_TRUE(s.pass) << s.label << " p=" << p;
    expect_close(second.front(), oracle::lemma31_second(naive, p));
  }
}

TEST(PointwisePrimeBound, Preconditions) {
  const auto seq = build_sequence(tau_like_model(), 1000);
  EXPECT_THROW(check_lemma31_first(seq, 4), std::invalid_argument);
  EXPECT_THROW(check_lemma31_first(seq, 1009), std::out_of_range);
  EXPECT_THROW(check_lemma31_second(seq, 37), std::out_of_range);
}

// ---------------------------------------------------------------------------
// Divisibility bounds

TEST(DivisibilityBound, DOneIsEquality) {
  const auto seq = build_sequence(sato_tate_model(6), 50000);
  for (double y : {1.0, 3.5, 100.0}) {
    const auto a = check_prop32_squarefree(seq, y, 1);
    const auto b = check_prop32_square(seq, y, 1);
    const double expected = mass_ratio(seq, y).numerator;
    EXPECT_NEAR(a.lhs, expected, 1e-9 * expected);
    EXPECT_EQ(a.rhs, expected);
    EXPECT_NEAR(b.lhs, expected, 1e-9 * expected);
    EXPECT_TRUE(a.pass && b.pass);
  }
}

TEST(DivisibilityBound, ExtremalCountsSquares) {
  const auto seq = build_sequence(extremal_model(), 1000000);
  // squares <= 250000 divisible by 2, hence by 4: (2k)^2 <= 250000, 250 of them
  const auto a = check_prop32_squarefree(seq, 4.0, 2);
  EXPECT_EQ(a.lhs, 250.0);
  // tau(2) (1 + 0) S(125000) = 2 * 353
  EXPECT_EQ(a.rhs, 706.0);
  EXPECT_TRUE(a.pass);
  // squares <= 500000 divisible by 4: 353
  const auto b = check_prop32_square(seq, 2.0, 2);
  EXPECT_EQ(b.lhs, 353.0);
  // tau_3(2) (2 + |f(4)|^2) S(125000) = 3 * 3 * 353
  EXPECT_EQ(b.rhs, 9.0 * 353.0);
  EXPECT_TRUE(b.pass);
}

TEST(DivisibilityBound, NaiveOracleExamples) {
  const auto tau_seq = build_sequence(tau_like_model(), 100000);
  const auto tau_naive = oracle::naive_sequence(values_of(tau_like_model()), 100000);
  const auto a = check_prop32_squarefree(tau_seq, 10.0, 6);
  EXPECT_TRUE(a.pass);
  expect_close(a, oracle::prop32_squarefree(tau_naive, 10.0, 6));

  const auto model = sato_tate_model(7);
  const auto st_seq = build_sequence(model, 100000);
  const auto b = check_prop32_square(st_seq, 5.0, 3);
  EXPECT_TRUE(b.pass);
  expect_close(b, oracle::prop32_square(oracle::naive_sequence(values_of(model), 100000), 5.0, 3));
}

TEST(DivisibilityBound, RandomBatteryAgainstOracle) {
  const auto model = sato_tate_model(13);
  const auto seq = build_sequence(model, 40000);
  const auto naive = oracle::naive_sequence(values_of(model), 40000);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> log_y(0.0, std::log(2000.0));
  const std::vector<std::uint64_t> ds{1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 21, 30, 42, 105};
  for (int i = 0; i < 60; ++i) {
    const double y = std::exp(log_y(rng));
    const std::uint64_t d = ds[rng() % ds.size()];
    const auto a = check_prop32_squarefree(seq, y, d);
    ASSERT_TRUE(a.pass) << y << " " << d;
    if (!a.vacuous) expect_close(a, oracle::prop32_squarefree(naive, y, d));
    const auto b = check_prop32_square(seq, y, d);
    ASSERT_TRUE(b.pass) << y << " " << d;
    if (!b.vacuous) expect_close(b, oracle::prop32_square(naive, y, d));
  }
}

TEST(DivisibilityBound, PreconditionsAndVacuousCases) {
  const auto seq = build_sequence(tau_like_model(), 1000);
  EXPECT_THROW(check_prop32_squarefree(seq, 2.0, 4), std::invalid_argument);
  EXPECT_THROW(check_prop32_square(seq, 2.0, 12), std::invalid_argument);
  EXPECT_THROW(check_prop32_squarefree(seq, 0.5, 2), std::invalid_argument);
  EXPECT_THROW(check_prop32_square(seq, 2.0, 0), std::invalid_argument);
  const auto a = check_prop32_squarefree(seq, 100.0, 11);
  EXPECT_TRUE(a.vacuous);
  EXPECT_TRUE(a.pass);
  EXPECT_TRUE(check_prop32_square(seq, 10.0, 11).vacuous);
}

// ---------------------------------------------------------------------------
// Counting bounds

TEST(CountingBound, ExtremalZeroClass) {
  const auto seq = build_sequence(extremal_model(), 1000000);
  const auto part = partition_primes(seq, 40000.0);
  const std::uint64_t top = part.set(0).size() / 4;
  ASSERT_GE(top, 2u);
  const auto naive = oracle::naive_sequence(values_of(extremal_model()), 1000000);
  const auto naive_part = oracle::naive_partition(naive, 40000.0);
  for (std::uint64_t k = 2; k <= top; ++k) {
    const auto r = check_prop33_zero(seq, part, k);
    EXPECT_TRUE(r.pass) << k;
    expect_close(r, oracle::prop33(naive, naive_part, 40000.0, 0, k));
  }
  EXPECT_THROW(check_prop33_zero(seq, part, 1), std::invalid_argument);
  EXPECT_THROW(check_prop33_zero(seq, part, top + 1), std::invalid_argument);
}

TEST(CountingBound, TauLikeClassTwo) {
  const auto seq = build_sequence(tau_like_model(), 100000);
  const auto naive = oracle::naive_sequence(values_of(tau_like_model()), 100000);
  const auto part = partition_primes(seq, 40000.0);
  const auto naive_part = oracle::naive_partition(naive, 40000.0);
  const std::size_t size = part.set(2).size();
  for (std::uint64_t k = 1; 4 * (k + 1) <= size; ++k) {
    const auto r = check_prop33_j(seq, part, 2, k);
    EXPECT_TRUE(r.pass) << k;
    expect_close(r, oracle::prop33(naive, naive_part, 40000.0, 2, k));
  }
  const auto empty = check_prop33_j(seq, part, 1, 1);
  EXPECT_TRUE(empty.vacuous);
  EXPECT_TRUE(empty.pass);
  EXPECT_THROW(check_prop33_j(seq, part, 2, 0), std::invalid_argument);
  EXPECT_THROW(check_prop33_j(seq, part, 0, 1), std::invalid_argument);
  EXPECT_THROW(check_prop33_j(seq, part, part.J + 1, 1), std::invalid_argument);
}

TEST(CountingBound, SatoTateEveryNonemptyClass) {
  const auto model = sato_tate_model(5);
  const auto seq = build_sequence(model, 100000);
  const auto naive = oracle::naive_sequence(values_of(model), 100000);
  const double y = 90000.0;
  const auto part = partition_primes(seq, y);
  const auto naive_part = oracle::naive_partition(naive, y);
  int checked = 0;
  for (std::uint64_t k = 2; 4 * k <= part.set(0).size(); ++k) {
    const auto r = check_prop33_zero(seq, part, k);
    EXPECT_TRUE(r.pass);
    expect_close(r, oracle::prop33(naive, naive_part, y, 0, k));
    ++checked;
  }
  for (unsigned j = 1; j <= part.J; ++j) {
    for (std::uint64_t k = 1; 4 * (k + 1) <= part.set(j).size(); ++k) {
      const auto r = check_prop33_j(seq, part, j, k);
      EXPECT_TRUE(r.pass) << j << " " << k;
      expect_close(r, oracle::prop33(naive, naive_part, y, j, k));
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

// ---------------------------------------------------------------------------
// Global bound and trace

TEST(MassRatioBound, YOneAndOutOfRange) {
  const auto seq = build_sequence(sato_tate_model(1), 10000);
  const auto c = check_theorem3(seq, 1.0);
  EXPECT_EQ(c.mass_ratio, 1.0);
  EXPECT_EQ(c.report.rhs, kTheorem3Constant * c.report.lhs);
  EXPECT_TRUE(c.report.pass);
  EXPECT_THROW(check_theorem3(seq, 0.5), std::invalid_argument);
  EXPECT_THROW(check_theorem3(seq, 10001.0), std::invalid_argument);
}

TEST(MassRatioBound, ExtremalAtOneHundredMillion) {
  const std::uint64_t x = 100000000;
  const auto streamed = stream_mass(extremal_model(), x, {floor_quotient(x, 1e4)});
  const auto c = check_theorem3(streamed, 1e4);
  EXPECT_EQ(c.mass_ratio, 0.01);
  EXPECT_NEAR(c.observed_constant, 0.01 * 100.0 / (1.0 + std::log(1e4)), 1e-15);
  EXPECT_NEAR(c.observed_constant, 0.098, 0.001);
  EXPECT_TRUE(c.report.pass);
}

TEST(ProofTrace, ExtremalSelectsCaseOne) {
  const auto seq = build_sequence(extremal_model(), 1000000);
  const auto t = proof_trace(seq, 40000.0);
  EXPECT_EQ(t.selected, ProofCase::zero_class);
  EXPECT_EQ(std::string(to_string(t.selected)), "case1");
  EXPECT_EQ(t.K, static_cast<std::uint64_t>(std::floor(static_cast<double>(t.class_sizes[0]) * t.F_y / 8.0)));
  EXPECT_FALSE(t.warning.empty());
  EXPECT_FALSE(t.chebyshev_asserted);
  EXPECT_NEAR(t.mass_inside + t.mass_outside, mass_ratio(seq, 40000.0).numerator, 1e-9);
}

TEST(ProofTrace, TauLikeSelectsCaseTwoAtClassTwo) {
  const auto seq = build_sequence(tau_like_model(), 100000);
  const auto t = proof_trace(seq, 10000.0);
  EXPECT_EQ(t.selected, ProofCase::dyadic_class);
  EXPECT_EQ(t.j, std::optional<unsigned>{2});
  EXPECT_EQ(t.class_sizes[0], 0u);
  EXPECT_GE(static_cast<double>(t.class_sizes[2]), t.case2_threshold);
  EXPECT_FALSE(t.warning.empty());
}

}  // namespace
}  // namespace hecke
