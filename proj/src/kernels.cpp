#include <atomic>
#include <cstdlib>

#include "subfree/kernels.hpp"

namespace subfree::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("SUBFREE_ISA");
      env != nullptr && std::string_view(env) == "scalar") {
    return Isa::kScalar;
  }
  return avx2_supported() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported;
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

void force_isa(Isa isa) {
  if (isa == Isa::kAvx2 && !avx2_supported()) {
    throw ConfigError("AVX2 requested but not supported by this CPU");
  }
  current().store(isa, std::memory_order_relaxed);
}

void reset_isa() { current().store(detect(), std::memory_order_relaxed); }

std::size_t count_equal(std::span<const Symbol> data, Symbol value) {
  return active_isa() == Isa::kAvx2 ? avx2::count_equal(data, value)
                                    : scalar::count_equal(data, value);
}

void diff_prefix_max(std::span<const std::int64_t> a,
                     std::span<const std::int64_t> b,
                     std::span<std::int64_t> out) {
  if (active_isa() == Isa::kAvx2) {
    avx2::diff_prefix_max(a, b, out);
  } else {
    scalar::diff_prefix_max(a, b, out);
  }
}

void diff_prefix_max(std::span<const double> a, std::span<const double> b,
                     std::span<double> out) {
  if (active_isa() == Isa::kAvx2) {
    avx2::diff_prefix_max(a, b, out);
  } else {
    scalar::diff_prefix_max(a, b, out);
  }
}

void cdf_lookup(std::span<const double> cdf,
                std::span<const std::uint32_t> guide,
                std::span<const double> u, std::span<std::uint32_t> out) {
  if (active_isa() == Isa::kAvx2) {
    avx2::cdf_lookup(cdf, guide, u, out);
  } else {
    scalar::cdf_lookup(cdf, guide, u, out);
  }
}

}  // namespace subfree::kernels
