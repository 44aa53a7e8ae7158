#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and an
// AVX2 version; the dispatching entry points pick one at runtime. Variants are
// required to return bit-identical results (the tests check this), so the
// choice never changes an experiment's output.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "subfree/core.hpp"

namespace subfree::kernels {

enum class Isa { kScalar, kAvx2 };

bool avx2_supported();
Isa active_isa();
std::string_view isa_name(Isa isa);

// Overrides the detected ISA (tests, benchmarking). Requesting kAvx2 on a CPU
// without it throws ConfigError.
void force_isa(Isa isa);
void reset_isa();

// Number of entries equal to `value`.
std::size_t count_equal(std::span<const Symbol> data, Symbol value);

// out[r] = max over r' <= r of (a[r'] - b[r']).
void diff_prefix_max(std::span<const std::int64_t> a,
                     std::span<const std::int64_t> b,
                     std::span<std::int64_t> out);
void diff_prefix_max(std::span<const double> a, std::span<const double> b,
                     std::span<double> out);

// For each u in [0,1): the first index j with u < cdf[j]. `guide` has m
// buckets, guide[t] being the first j with cdf[j] > t/m; cdf.back() == 1.
void cdf_lookup(std::span<const double> cdf,
                std::span<const std::uint32_t> guide,
                std::span<const double> u, std::span<std::uint32_t> out);

namespace scalar {
std::size_t count_equal(std::span<const Symbol> data, Symbol value);
void diff_prefix_max(std::span<const std::int64_t> a,
                     std::span<const std::int64_t> b,
                     std::span<std::int64_t> out);
void diff_prefix_max(std::span<const double> a, std::span<const double> b,
                     std::span<double> out);
void cdf_lookup(std::span<const double> cdf,
                std::span<const std::uint32_t> guide,
                std::span<const double> u, std::span<std::uint32_t> out);
}  // namespace scalar

namespace avx2 {
std::size_t count_equal(std::span<const Symbol> data, Symbol value);
void diff_prefix_max(std::span<const std::int64_t> a,
                     std::span<const std::int64_t> b,
                     std::span<std::int64_t> out);
void diff_prefix_max(std::span<const double> a, std::span<const double> b,
                     std::span<double> out);
void cdf_lookup(std::span<const double> cdf,
                std::span<const std::uint32_t> guide,
                std::span<const double> u, std::span<std::uint32_t> out);
}  // namespace avx2

}  // namespace subfree::kernels
