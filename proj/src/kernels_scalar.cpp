#include <algorithm>
#include <limits>

#include "subfree/kernels.hpp"

namespace subfree::kernels::scalar {

std::size_t count_equal(std::span<const Symbol> data, Symbol value) {
  std::size_t count = 0;
  for (Symbol s : data) count += (s == value);
  return count;
}

void diff_prefix_max(std::span<const std::int64_t> a,
                     std::span<const std::int64_t> b,
                     std::span<std::int64_t> out) {
  std::int64_t running = std::numeric_limits<std::int64_t>::min();
  for (std::size_t r = 0; r < out.size(); ++r) {
    running = std::max(running, a[r] - b[r]);
    out[r] = running;
  }
}

void diff_prefix_max(std::span<const double> a, std::span<const double> b,
                     std::span<double> out) {
  double running = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < out.size(); ++r) {
    running = std::max(running, a[r] - b[r]);
    out[r] = running;
  }
}

void cdf_lookup(std::span<const double> cdf,
                std::span<const std::uint32_t> guide,
                std::span<const double> u, std::span<std::uint32_t> out) {
  const double buckets = static_cast<double>(guide.size());
  const std::size_t last_bucket = guide.size() - 1;
  for (std::size_t q = 0; q < u.size(); ++q) {
    const std::size_t bucket =
        std::min(static_cast<std::size_t>(u[q] * buckets), last_bucket);
    std::uint32_t j = guide[bucket];
    while (cdf[j] <= u[q]) ++j;
    out[q] = j;
  }
}

}  // namespace subfree::kernels::scalar
