#include <gtest/gtest.h>

#include "subfree/df_est.hpp"
#include "subfree/exact.hpp"
#include "support.hpp"

namespace subfree {
namespace {

using testing::text_of;
using testing::word_of;

SampleSet sample_of(std::initializer_list<std::size_t> indices, const Text& t) {
  std::vector<SamplePair> pairs;
  for (std::size_t j : indices) pairs.push_back({j, t.at(j)});
  return SampleSet::from_pairs(pairs);
}

IntervalPartition partition(std::vector<std::size_t> bounds, std::vector<char> heavy) {
  IntervalPartition b;
  b.bounds = std::move(bounds);
  b.heavy = std::move(heavy);
  return b;
}

TEST(SampleSizes, FrozenValues) {
  const ZParams a = sample_sizes_df(2, 0.5, 100, 1000);
  EXPECT_DOUBLE_EQ(a.z, 400.0);
  EXPECT_EQ(a.s1, 550661u);
  EXPECT_EQ(a.s2, 1437952u);
  EXPECT_DOUBLE_EQ(a.eta, 1.0 / (16.0 * 1000.0 * 400.0));
  const ZParams b = sample_sizes_df(2, 0.15);
  EXPECT_NEAR(b.z, 4000.0 / 3.0, 1e-9);
  EXPECT_EQ(b.s1, 2028173u);
  EXPECT_EQ(b.s2, 0u);
  EXPECT_EQ(sample_sizes_df(3, 0.15).s1, 3139570u);
  // z^2 ln(40 k U) = 39349391.000126...; the fraction must survive rounding.
  EXPECT_EQ(sample_sizes_df(3, 0.15, 156).s2, 39349392u);
  EXPECT_THROW(sample_sizes_df(2, 1.5), InvalidInput);
}

TEST(Intervals, HandExamples) {
  const Text t = text_of("abab");
  const IntervalPartition a = build_B(sample_of({1, 1, 2, 3, 4, 4, 4, 4}, t), 4, 2.0);
  EXPECT_EQ(a.bounds, (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(a.heavy, (std::vector<char>{0, 0}));
  const IntervalPartition b = build_B(sample_of({2, 2, 2, 2}, t), 4, 2.0);
  EXPECT_EQ(b.bounds, (std::vector<std::size_t>{1, 2, 4}));
  EXPECT_EQ(b.heavy, (std::vector<char>{0, 1, 0}));
  const IntervalPartition c =
      build_B(census(t, RationalDistribution::uniform(4)), 4, 1.0);
  EXPECT_EQ(c.bounds, (std::vector<std::size_t>{4}));
  EXPECT_EQ(c.heavy, (std::vector<char>{0}));
}

TEST(Intervals, Properties) {
  Rng rng(1);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 1 + rng.below(200);
    const Text t = testing::random_text(rng, n, 3);
    const RationalDistribution p = testing::random_rational(rng, n, 30);
    const SampleSet s = DistributionOracle(t, p).draw(1 + rng.below(3000), rep);
    const double z = 1.0 + rng.uniform01() * 40.0;
    const IntervalPartition b = build_B(s, n, z);
    ASSERT_EQ(b.bounds.back(), n);
    const double total = static_cast<double>(s.size());
    for (std::size_t u = 1; u <= b.size(); ++u) {
      const Interval iv = b.interval(u);
      ASSERT_LE(iv.first, iv.last);
      double hits = 0;
      for (std::size_t j = iv.first; j <= iv.last; ++j) hits += s.count(j);
      if (b.heavy[u - 1]) {
        EXPECT_EQ(iv.first, iv.last);
        EXPECT_GT(hits * z, total);
      } else {
        EXPECT_LE(hits * z, total);
        if (iv.last < n) {
          EXPECT_GT((hits + s.count(iv.last + 1)) * z, total);
        }
      }
    }
  }
}

TEST(ReferenceIntervals, HandExamples) {
  const ReferencePartition u = build_H(Distribution::uniform(8), 1.0);
  EXPECT_EQ(u.bounds, (std::vector<std::size_t>{2, 4, 6, 8}));
  for (HClass c : u.classes) EXPECT_EQ(c, HClass::kMed);
  const ReferencePartition atom = build_H(Distribution({0.05, 0.9, 0.05}), 1.0);
  EXPECT_EQ(atom.bounds, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(atom.classes[1], HClass::kSin);
  EXPECT_EQ(atom.classes[0], HClass::kSml);
  const ReferencePartition one = build_H(Distribution({1.0}), 0.5);
  EXPECT_EQ(one.bounds, (std::vector<std::size_t>{1}));
}

TEST(ReferenceIntervals, Properties) {
  Rng rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.below(300);
    const Distribution p = testing::random_rational(rng, n, 200).to_float();
    const double z = 1.0 + rng.uniform01() * 30.0;
    const ReferencePartition h = build_H(p, z);
    ASSERT_EQ(h.bounds.back(), n);
    for (std::size_t l = 1; l <= h.size(); ++l) {
      const Interval iv = h.interval(l);
      if (h.classes[l - 1] == HClass::kSin) {
        EXPECT_EQ(iv.first, iv.last);
        EXPECT_GT(h.weights[l - 1], 1.0 / (8.0 * z));
      } else {
        EXPECT_LE(h.weights[l - 1], 1.0 / (4.0 * z) + 1e-12);
      }
    }
  }
}

TEST(Events, CensusSatisfiesBoth) {
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 1 + rng.below(50);
    const Text t = testing::random_text(rng, n, 3);
    const RationalDistribution p = testing::random_rational(rng, n, 20);
    const SampleSet s = census(t, p);
    const double z = 1.0 + rng.uniform01() * 10.0;
    EXPECT_TRUE(check_E1(p.to_float(), s, z));
    const Word w = testing::random_word(rng, 2, 3);
    EXPECT_TRUE(check_E2(t, p, s, build_B(s, n, z), w, z));
  }
}

TEST(Xi, HandExample) {
  const Text t = text_of("ab");
  const XiMatrix xi = estimate_xi(sample_of({1, 2, 2, 2}, t), partition({1, 2}, {0, 0}),
                                  word_of("ab"));
  EXPECT_DOUBLE_EQ(xi.at(1, 1), 0.25);
  EXPECT_DOUBLE_EQ(xi.at(1, 2), 0.25);
  EXPECT_DOUBLE_EQ(xi.at(2, 1), 0.0);
  EXPECT_DOUBLE_EQ(xi.at(2, 2), 0.75);
  EXPECT_DOUBLE_EQ(xi.weight(0), 0.0);
  EXPECT_DOUBLE_EQ(xi.weight(1), 0.25);
  EXPECT_DOUBLE_EQ(xi.weight(2), 1.0);
}

TEST(Xi, CensusIsExactAndAbsentRowsVanish) {
  Rng rng(4);
  const Text t = testing::random_text(rng, 40, 2);
  const RationalDistribution p = testing::random_rational(rng, 40, 10);
  const SampleSet s = census(t, p);
  const Word w = word_of("abc");
  const IntervalPartition b = build_B(s, 40, 6.0);
  const XiMatrix est = estimate_xi(s, b, w);
  const XiMatrix exact = exact_xi(t, w, p, b);
  EXPECT_LT(max_abs_diff(est, exact), 1e-12);
  for (std::size_t u = 1; u <= b.size(); ++u) EXPECT_EQ(est.at(3, u), 0.0);
}

TEST(Alg1, HandExamples) {
  const PrimeStructure a = run_alg1(partition({1, 3}, {1, 0}));
  EXPECT_EQ(a.bounds, (std::vector<std::size_t>{1, 2, 6}));
  EXPECT_EQ(a.f, (std::vector<std::size_t>{1, 1, 2}));
  const PrimeStructure light = run_alg1(partition({2, 5, 7}, {0, 0, 0}));
  EXPECT_EQ(light.bounds, (std::vector<std::size_t>{4, 10, 14}));
  EXPECT_EQ(light.f, (std::vector<std::size_t>{1, 2, 3}));
  const PrimeStructure heavy = run_alg1(partition({1, 2, 3}, {1, 1, 1}));
  EXPECT_EQ(heavy.bounds, (std::vector<std::size_t>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(heavy.f, (std::vector<std::size_t>{1, 1, 2, 2, 3, 3}));
}

// With exact densities the assembled matrix is xi' of the interleaved text.
TEST(Assemble, CensusMatchesInterleavedDensities) {
  Rng rng(5);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 1 + rng.below(12);
    const Text t = testing::random_text(rng, n, 3);
    const Word w = testing::random_word(rng, 1 + rng.below(3), 3);
    RationalDistribution p = testing::random_rational(rng, n, 12);
    if (rep % 3 == 0) {
      std::vector<std::uint64_t> a(p.numerators().begin(), p.numerators().end());
      a[rng.below(n)] += 10 * p.denominator();
      p = RationalDistribution(a, 11 * p.denominator());
    }
    const SampleSet s = census(t, p);
    const IntervalPartition b = build_B(s, n, 1.0 + rng.uniform01() * 8.0);
    const PrimeStructure prime = run_alg1(b);
    const CountMatrix hat = assemble_xi_hat(estimate_xi(s, b, w), b, prime);
    const XiMatrix expected = exact_xi_prime(t, w, p, prime);
    EXPECT_LT(max_abs_diff(hat, expected), 1e-12);
  }
}

TEST(Assemble, ShapeMismatch) {
  const Text t = text_of("ab");
  const IntervalPartition b = partition({1, 2}, {0, 0});
  const XiMatrix xi = estimate_xi(sample_of({1, 2}, t), b, word_of("ab"));
  EXPECT_THROW(assemble_xi_hat(xi, partition({2}, {0}), run_alg1(b)), InvalidInput);
}

TEST(Tilde, RunLengthMatchesMaterializedSplitting) {
  Rng rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rng.below(8);
    const Text t = testing::random_text(rng, n, 3);
    const Word w = testing::random_word(rng, 1 + rng.below(3), 3);
    std::vector<std::uint64_t> alpha(n);
    for (auto& a : alpha) a = 1 + rng.below(4);
    const IntervalPartition b =
        build_B(census(t, RationalDistribution::uniform(n)), n, 1.0 + rng.uniform01() * 4);
    const PrimeStructure prime = run_alg1(b);
    const XiMatrix tilde = exact_xi_tilde(t, w, alpha, prime);

    const Text tp = interleave_sentinel(t);
    const Word wp = interleave_sentinel(w);
    std::vector<std::uint64_t> doubled;
    std::uint64_t total = 0;
    for (std::uint64_t a : alpha) {
      doubled.push_back(a);
      doubled.push_back(a);
      total += 2 * a;
    }
    const Splitting sp = build_splitting(
        tp, RationalDistribution(doubled, total), Rational(BigInt(1), BigInt(total)));
    for (std::size_t u = 1; u <= prime.size(); ++u) {
      std::size_t end = 0;
      for (std::size_t pos = 0; pos < prime.bounds[u - 1]; ++pos) end += doubled[pos];
      for (std::size_t i = 1; i <= wp.size(); ++i) {
        const double expected = static_cast<double>(count_prefix(sp.expanded, wp, i, end)) /
                                static_cast<double>(total);
        EXPECT_DOUBLE_EQ(tilde.at(i, u), expected);
      }
    }
  }
}

TEST(ExactRational, Values) {
  EXPECT_EQ(exact_rational(0.5), Rational(1, 2));
  EXPECT_EQ(exact_rational(-3.0), Rational(-3));
  EXPECT_EQ(exact_rational(0.0), Rational(0));
  const Rational tenth = exact_rational(0.1);
  EXPECT_NE(tenth, Rational(1, 10));
  EXPECT_LT(abs(tenth - Rational(1, 10)), Rational(1, 100000000000000000LL));
  EXPECT_EQ(exact_eta(1000, 2, 0.5), Rational(1, 6400000));
}

TEST(ReductionPremise, SpacingAndAccuracy) {
  // T = "ab", alpha = (1, 3): T~ = a 0 b b b 0 0 0, n~ = 8, k~ = 4.
  const Text t = text_of("ab");
  const Word w = word_of("ab");
  const std::vector<std::uint64_t> alpha{1, 3};
  PrimeStructure coarse;
  coarse.bounds = {4};
  coarse.f = {1};
  const XiMatrix tilde = exact_xi_tilde(t, w, alpha, coarse);
  CountMatrix hat(4, 1);
  for (std::size_t i = 1; i <= 4; ++i) hat.at(i, 1) = tilde.at(i, 1);
  const ReductionPremise ok = check_reduction_premise(hat, tilde, coarse, alpha, 0.5, 1.0, 0.1);
  EXPECT_FALSE(ok.spacing);  // one block of length 8 > 1 * 0.5 * 8 / 4
  EXPECT_TRUE(ok.accuracy);

  PrimeStructure fine;
  fine.bounds = {1, 2, 3, 4};
  fine.f = {1, 1, 2, 2};
  const XiMatrix tilde_fine = exact_xi_tilde(t, w, alpha, fine);
  CountMatrix off(4, 4);
  for (std::size_t i = 1; i <= 4; ++i) {
    for (std::size_t u = 1; u <= 4; ++u) off.at(i, u) = tilde_fine.at(i, u) + 0.01;
  }
  const ReductionPremise r = check_reduction_premise(off, tilde_fine, fine, alpha, 0.5, 0.125, 0.125);
  EXPECT_TRUE(r.spacing);
  EXPECT_TRUE(r.accuracy);  // 0.01 <= 0.125 * 0.5 / 4
  EXPECT_NEAR(r.max_error, 0.01, 1e-12);
  const ReductionPremise tight = check_reduction_premise(off, tilde_fine, fine, alpha, 0.5, 0.125, 0.01);
  EXPECT_FALSE(tight.accuracy);
}

TEST(Estimator, AlternatingTextUniformWeights) {
  std::string s;
  for (int i = 0; i < 5000; ++i) s += "ab";
  const Text t = text_of(s);
  const DistributionOracle oracle(t, RationalDistribution::uniform(t.size()));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const DfEstimate e = estimate_df(oracle, word_of("ab"), t.size(), 0.3, seed);
    EXPECT_GE(e.delta_hat, 0.2);
    EXPECT_LE(e.delta_hat, 0.8);
    const ZParams expected = sample_sizes_df(2, 0.3, e.U, t.size());
    EXPECT_EQ(e.params.s1, expected.s1);
    EXPECT_EQ(e.params.s2, expected.s2);
    EXPECT_EQ(e.U_prime, e.U);  // no index is heavy under uniform weights
  }
}

TEST(Estimator, WordFreeText) {
  Rng rng(7);
  const Text t = text_of(std::string(500, 'b') + std::string(500, 'a'));
  const RationalDistribution p = testing::random_rational(rng, t.size(), 50);
  const DistributionOracle oracle(t, p);
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    good += estimate_df(oracle, word_of("ab"), t.size(), 0.5, seed).delta_hat <= 0.5;
  }
  EXPECT_GE(good, 90);
}

TEST(Estimator, DeterministicWithTrace) {
  Rng rng(8);
  const Text t = testing::random_text(rng, 500, 3);
  const RationalDistribution p = testing::random_rational(rng, 500, 20);
  const DistributionOracle oracle(t, p);
  const DfEstimate a = estimate_df(oracle, word_of("aba"), 500, 0.5, 3, 1.0, true);
  const DfEstimate b = estimate_df(oracle, word_of("aba"), 500, 0.5, 3);
  EXPECT_EQ(a.raw, b.raw);
  ASSERT_TRUE(a.trace);
  EXPECT_EQ(a.trace->s1.size(), a.params.s1);
  EXPECT_EQ(a.trace->s2.size(), a.params.s2);
  EXPECT_EQ(a.trace->prime.size(), a.U_prime);
  EXPECT_EQ(estimate_df(oracle, word_of("ab"), 500, 1.0, 3).params.s1, 0u);
}

TEST(Special, Examples) {
  const Text t = text_of("abab");
  const DistributionOracle oracle(t, RationalDistribution::uniform(4));
  const DfEstimate e = estimate_df_special(oracle, word_of("ab"), 4, 0.4, 1);
  EXPECT_NEAR(e.delta_hat, 0.5, 0.4);
  const DfEstimate single = estimate_df_special(oracle, word_of("a"), 4, 0.4, 2);
  EXPECT_NEAR(single.delta_hat, 0.5, 0.4);
  EXPECT_THROW(estimate_df_special(oracle, word_of("aab"), 4, 0.4, 1), InvalidInput);
}

}  // namespace
}  // namespace subfree
