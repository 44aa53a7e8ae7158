#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "subfree/kernels.hpp"
#include "subfree/rng.hpp"

namespace subfree::kernels {
namespace {

class Kernels : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!avx2_supported()) GTEST_SKIP() << "no AVX2 on this CPU";
  }
  void TearDown() override { reset_isa(); }
};

TEST_F(Kernels, CountEqualMatches) {
  Rng rng(1);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 31u, 64u, 1000u, 4099u}) {
    std::vector<Symbol> data(n);
    for (auto& x : data) x = static_cast<Symbol>(rng.below(4));
    for (Symbol v = 0; v < 5; ++v) {
      EXPECT_EQ(scalar::count_equal(data, v), avx2::count_equal(data, v)) << n;
    }
  }
}

TEST_F(Kernels, DiffPrefixMaxIntMatches) {
  Rng rng(2);
  for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 256u, 1001u}) {
    std::vector<std::int64_t> a(n), b(n), x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<std::int64_t>(rng.below(1000)) - 500;
      b[i] = static_cast<std::int64_t>(rng.below(1000)) - 500;
    }
    scalar::diff_prefix_max(a, b, x);
    avx2::diff_prefix_max(a, b, y);
    EXPECT_EQ(x, y) << n;
  }
}

TEST_F(Kernels, DiffPrefixMaxDoubleMatches) {
  Rng rng(3);
  for (std::size_t n : {1u, 2u, 4u, 6u, 33u, 500u}) {
    std::vector<double> a(n), b(n), x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform01() * 100.0;
      b[i] = rng.uniform01() * 100.0;
    }
    scalar::diff_prefix_max(a, b, x);
    avx2::diff_prefix_max(a, b, y);
    EXPECT_EQ(x, y) << n;
  }
}

TEST_F(Kernels, CdfLookupMatches) {
  Rng rng(4);
  for (std::size_t n : {1u, 2u, 10u, 97u, 5000u}) {
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // Some zero weights, one heavy atom.
      w[i] = rng.below(5) == 0 ? 0.0 : rng.uniform01();
      total += w[i];
    }
    w[n / 2] += total + 1.0;
    total += total + 1.0;
    std::vector<double> cdf(n);
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) cdf[i] = (running += w[i]) / total;
    cdf.back() = 1.0;
    std::vector<std::uint32_t> guide(n);
    for (std::size_t t = 0, j = 0; t < n; ++t) {
      while (cdf[j] <= static_cast<double>(t) / static_cast<double>(n)) ++j;
      guide[t] = static_cast<std::uint32_t>(j);
    }
    std::vector<double> u(3001);
    for (auto& x : u) x = rng.uniform01();
    u[0] = 0.0;
    std::vector<std::uint32_t> x(u.size()), y(u.size());
    scalar::cdf_lookup(cdf, guide, u, x);
    avx2::cdf_lookup(cdf, guide, u, y);
    EXPECT_EQ(x, y) << n;
    for (std::size_t q = 0; q < u.size(); ++q) {
      const auto expected = static_cast<std::uint32_t>(
          std::upper_bound(cdf.begin(), cdf.end(), u[q]) - cdf.begin());
      ASSERT_EQ(x[q], expected);
    }
  }
}

TEST_F(Kernels, DispatchFollowsOverride) {
  force_isa(Isa::kScalar);
  EXPECT_EQ(active_isa(), Isa::kScalar);
  force_isa(Isa::kAvx2);
  EXPECT_EQ(active_isa(), Isa::kAvx2);
  EXPECT_EQ(isa_name(Isa::kAvx2), "avx2");
}

}  // namespace
}  // namespace subfree::kernels
