#include <algorithm>
#include <limits>

#include "subfree/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define SUBFREE_X86 1
#else
#define SUBFREE_X86 0
#endif

namespace subfree::kernels::avx2 {

#if SUBFREE_X86

#define SUBFREE_AVX2 __attribute__((target("avx2")))

namespace {

SUBFREE_AVX2 inline __m256i max_epi64(__m256i x, __m256i y) {
  return _mm256_blendv_epi8(y, x, _mm256_cmpgt_epi64(x, y));
}

}  // namespace

SUBFREE_AVX2 std::size_t count_equal(std::span<const Symbol> data,
                                     Symbol value) {
  const __m256i needle = _mm256_set1_epi32(static_cast<int>(value));
  const Symbol* p = data.data();
  const std::size_t n = data.size();
  std::size_t total = 0;
  std::size_t i = 0;
  // Per-lane 32-bit counters are flushed before they can overflow.
  constexpr std::size_t kFlush = std::size_t{1} << 24;
  while (i + 8 <= n) {
    __m256i acc = _mm256_setzero_si256();
    const std::size_t stop = std::min(n - (n - i) % 8, i + 8 * kFlush);
    for (; i < stop; i += 8) {
      const __m256i v =
          _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + i));
      acc = _mm256_sub_epi32(acc, _mm256_cmpeq_epi32(v, needle));
    }
    alignas(32) std::uint32_t lanes[8];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
    for (std::uint32_t lane : lanes) total += lane;
  }
  for (; i < n; ++i) total += (p[i] == value);
  return total;
}

SUBFREE_AVX2 void diff_prefix_max(std::span<const std::int64_t> a,
                                  std::span<const std::int64_t> b,
                                  std::span<std::int64_t> out) {
  constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
  const __m256i floor = _mm256_set1_epi64x(kMin);
  __m256i carry = floor;
  const std::size_t n = out.size();
  std::size_t r = 0;
  for (; r + 4 <= n; r += 4) {
    __m256i v = _mm256_sub_epi64(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a.data() + r)),
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b.data() + r)));
    // In-register inclusive scan: shift by one lane, then by two.
    __m256i t = _mm256_permute4x64_epi64(v, _MM_SHUFFLE(2, 1, 0, 0));
    v = max_epi64(v, _mm256_blend_epi32(t, floor, 0x03));
    t = _mm256_permute4x64_epi64(v, _MM_SHUFFLE(1, 0, 0, 0));
    v = max_epi64(v, _mm256_blend_epi32(t, floor, 0x0F));
    v = max_epi64(v, carry);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out.data() + r), v);
    carry = _mm256_permute4x64_epi64(v, _MM_SHUFFLE(3, 3, 3, 3));
  }
  std::int64_t running = r == 0 ? kMin : out[r - 1];
  for (; r < n; ++r) {
    running = std::max(running, a[r] - b[r]);
    out[r] = running;
  }
}

SUBFREE_AVX2 void diff_prefix_max(std::span<const double> a,
                                  std::span<const double> b,
                                  std::span<double> out) {
  constexpr double kMin = -std::numeric_limits<double>::infinity();
  const __m256d floor = _mm256_set1_pd(kMin);
  __m256d carry = floor;
  const std::size_t n = out.size();
  std::size_t r = 0;
  for (; r + 4 <= n; r += 4) {
    __m256d v = _mm256_sub_pd(_mm256_loadu_pd(a.data() + r),
                              _mm256_loadu_pd(b.data() + r));
    __m256d t = _mm256_permute4x64_pd(v, _MM_SHUFFLE(2, 1, 0, 0));
    v = _mm256_max_pd(v, _mm256_blend_pd(t, floor, 0x1));
    t = _mm256_permute4x64_pd(v, _MM_SHUFFLE(1, 0, 0, 0));
    v = _mm256_max_pd(v, _mm256_blend_pd(t, floor, 0x3));
    v = _mm256_max_pd(v, carry);
    _mm256_storeu_pd(out.data() + r, v);
    carry = _mm256_permute4x64_pd(v, _MM_SHUFFLE(3, 3, 3, 3));
  }
  double running = r == 0 ? kMin : out[r - 1];
  for (; r < n; ++r) {
    running = std::max(running, a[r] - b[r]);
    out[r] = running;
  }
}

SUBFREE_AVX2 void cdf_lookup(std::span<const double> cdf,
                             std::span<const std::uint32_t> guide,
                             std::span<const double> u,
                             std::span<std::uint32_t> out) {
  const double buckets = static_cast<double>(guide.size());
  const std::size_t last_bucket = guide.size() - 1;
  const __m256d vbuckets = _mm256_set1_pd(buckets);
  const __m256i vlast = _mm256_set1_epi64x(static_cast<long long>(last_bucket));
  const __m256i pack = _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7);
  const int* guide_base = reinterpret_cast<const int*>(guide.data());
  const std::size_t n = u.size();
  std::size_t q = 0;
  for (; q + 4 <= n; q += 4) {
    const __m256d vu = _mm256_loadu_pd(u.data() + q);
    __m256i bucket = _mm256_cvtepi32_epi64(
        _mm256_cvttpd_epi32(_mm256_mul_pd(vu, vbuckets)));
    bucket = _mm256_blendv_epi8(bucket, vlast,
                                _mm256_cmpgt_epi64(bucket, vlast));
    __m256i j = _mm256_cvtepu32_epi64(
        _mm256_i64gather_epi32(guide_base, bucket, 4));
    for (;;) {
      const __m256d c = _mm256_i64gather_pd(
          cdf.data(), j, 8);
      const __m256d le = _mm256_cmp_pd(c, vu, _CMP_LE_OQ);
      if (_mm256_movemask_pd(le) == 0) break;
      j = _mm256_sub_epi64(j, _mm256_castpd_si256(le));
    }
    const __m256i packed = _mm256_permutevar8x32_epi32(j, pack);
    _mm_storeu_si128(reinterpret_cast<__m128i*>(out.data() + q),
                     _mm256_castsi256_si128(packed));
  }
  for (; q < n; ++q) {
    const std::size_t b =
        std::min(static_cast<std::size_t>(u[q] * buckets), last_bucket);
    std::uint32_t j = guide[b];
    while (cdf[j] <= u[q]) ++j;
    out[q] = j;
  }
}

#else  // !SUBFREE_X86

std::size_t count_equal(std::span<const Symbol> data, Symbol value) {
  return scalar::count_equal(data, value);
}
void diff_prefix_max(std::span<const std::int64_t> a,
                     std::span<const std::int64_t> b,
                     std::span<std::int64_t> out) {
  scalar::diff_prefix_max(a, b, out);
}
void diff_prefix_max(std::span<const double> a, std::span<const double> b,
                     std::span<double> out) {
  scalar::diff_prefix_max(a, b, out);
}
void cdf_lookup(std::span<const double> cdf,
                std::span<const std::uint32_t> guide,
                std::span<const double> u, std::span<std::uint32_t> out) {
  scalar::cdf_lookup(cdf, guide, u, out);
}

#endif

}  // namespace subfree::kernels::avx2
