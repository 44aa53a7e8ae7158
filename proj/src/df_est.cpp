#include "subfree/df_est.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "subfree/rng.hpp"

namespace subfree {

ZParams sample_sizes_df(std::size_t k, double delta, std::size_t U,
                        std::size_t n, double relax) {
  if (k == 0) throw InvalidInput("word length must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInput("delta must lie in (0, 1)");
  }
  if (!(relax > 0.0)) throw InvalidInput("relaxation factor must be positive");
  ZParams out;
  out.z = relax * kCz * static_cast<double>(k) / delta;
  if (n > 0) out.eta = kCeta / (static_cast<double>(n) * out.z);
  const double s1 = 120.0 * out.z * std::log(240.0 * out.z);
  out.s1 = s1 > 1.0 ? ceil_tolerant(s1) : 1;
  if (U > 0) {
    const double s2 = out.z * out.z *
                      std::log(40.0 * static_cast<double>(k) *
                               static_cast<double>(U));
    out.s2 = s2 > 1.0 ? ceil_tolerant(s2) : 1;
  }
  return out;
}

IntervalPartition build_B(const SampleSet& s1, std::size_t n, double z) {
  if (s1.empty()) throw InvalidInput("empty sample");
  if (n == 0) throw InvalidInput("interval construction over an empty domain");
  std::vector<std::uint64_t> hits(n + 1, 0);
  for (const auto& e : s1.entries()) {
    if (e.index > n) throw RangeError("sampled index beyond the domain");
    hits[e.index] = e.count;
  }
  // wt_S1(I) <= 1/z  <=>  hits(I) * z <= s.
  const double s = static_cast<double>(s1.size());
  auto within = [&](std::uint64_t count) {
    return static_cast<double>(count) * z <= s;
  };
  IntervalPartition out;
  std::size_t b = 0;
  while (b < n) {
    const std::size_t start = b + 1;
    if (!within(hits[start])) {
      out.bounds.push_back(start);
      out.heavy.push_back(1);
      b = start;
      continue;
    }
    std::uint64_t sum = hits[start];
    std::size_t end = start;
    while (end < n && within(sum + hits[end + 1])) sum += hits[++end];
    out.bounds.push_back(end);
    out.heavy.push_back(0);
    b = end;
  }
  return out;
}

CountMatrix XiMatrix::as_counts() const {
  CountMatrix out(roles, columns, false);
  for (std::size_t i = 1; i <= roles; ++i) {
    std::copy_n(cells.begin() + (i - 1) * columns, columns, out.row(i).begin());
  }
  return out;
}

XiMatrix estimate_xi(const SampleSet& s2, const IntervalPartition& b,
                     const Word& word) {
  if (s2.empty()) throw InvalidInput("empty sample");
  const PrefixHits hits = prefix_hits(s2, word, b.bounds);
  const double s = static_cast<double>(s2.size());
  XiMatrix out;
  out.roles = word.size();
  out.columns = b.size();
  out.cells.resize(hits.role_hits.size());
  for (std::size_t q = 0; q < hits.role_hits.size(); ++q) {
    out.cells[q] = static_cast<double>(hits.role_hits[q]) / s;
  }
  out.prefix_weight.resize(hits.total.size());
  for (std::size_t u = 0; u < hits.total.size(); ++u) {
    out.prefix_weight[u] = static_cast<double>(hits.total[u]) / s;
  }
  return out;
}

PrimeStructure run_alg1(const IntervalPartition& b) {
  PrimeStructure out;
  for (std::size_t v = 1; v <= b.size(); ++v) {
    const std::size_t bv = b.bound(v);
    if (b.heavy[v - 1]) {
      out.bounds.push_back(2 * bv - 1);
      out.bounds.push_back(2 * bv);
      out.f.push_back(v);
      out.f.push_back(v);
    } else {
      out.bounds.push_back(2 * bv);
      out.f.push_back(v);
    }
  }
  return out;
}

CountMatrix assemble_xi_hat(const XiMatrix& xi, const IntervalPartition& b,
                            const PrimeStructure& prime) {
  if (xi.columns != b.size() || prime.f.size() != prime.size() ||
      (!prime.f.empty() && prime.f.back() != b.size())) {
    throw InvalidInput("xi, interval and prime shapes disagree");
  }
  const std::size_t k = xi.roles;
  CountMatrix out(2 * k, prime.size(), false);
  for (std::size_t u = 1; u <= prime.size(); ++u) {
    const std::size_t v = prime.f[u - 1];
    if (v < 1 || v > b.size()) throw InvalidInput("f out of range");
    for (std::size_t m = 1; m <= k; ++m) out.at(2 * m - 1, u) = 0.5 * xi.at(m, v);
    // b'_u odd means T'[b'_u] is an original symbol; with B_v heavy this is
    // the first half of the pair, whose prefix ends before B_v's sentinel.
    const bool first_of_pair = b.heavy[v - 1] && prime.bounds[u - 1] % 2 == 1;
    assert(!first_of_pair || (u == 1 ? v == 1 : prime.f[u - 2] == v - 1));
    const double sentinel = 0.5 * xi.weight(first_of_pair ? v - 1 : v);
    for (std::size_t m = 1; m <= k; ++m) out.at(2 * m, u) = sentinel;
  }
  return out;
}

namespace {

struct SampledPipeline {
  ZParams params;
  SampleSet s1;
  SampleSet s2;
  IntervalPartition b;
  XiMatrix xi;
};

SampledPipeline sample_pipeline(const SamplingOracle& oracle, const Word& word,
                                std::size_t n, double delta, std::uint64_t seed,
                                double relax) {
  SampledPipeline out;
  out.params = sample_sizes_df(word.size(), delta, 0, n, relax);
  out.s1 = oracle.draw(out.params.s1, derive_seed(seed, 1));
  out.b = build_B(out.s1, n, out.params.z);
  out.params.s2 =
      sample_sizes_df(word.size(), delta, out.b.size(), n, relax).s2;
  out.s2 = oracle.draw(out.params.s2, derive_seed(seed, 2));
  out.xi = estimate_xi(out.s2, out.b, word);
  return out;
}

void check_oracle(const SamplingOracle& oracle, std::size_t n, double delta) {
  if (oracle.domain_size() != n) {
    throw InvalidInput("oracle domain size differs from n");
  }
  if (n == 0) throw InvalidInput("distance is undefined for an empty text");
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
}

}  // namespace

DfEstimate estimate_df(const SamplingOracle& oracle, const Word& word,
                       std::size_t n, double delta, std::uint64_t seed,
                       double relax, bool keep_trace) {
  check_oracle(oracle, n, delta);
  DfEstimate out;
  if (delta >= 1.0) return out;
  SampledPipeline run = sample_pipeline(oracle, word, n, delta, seed, relax);
  PrimeStructure prime = run_alg1(run.b);
  CountMatrix xi_hat = assemble_xi_hat(run.xi, run.b, prime);
  out.raw = 2.0 * compute_M(xi_hat);
  out.delta_hat = std::clamp(out.raw, 0.0, 1.0);
  out.params = run.params;
  out.U = run.b.size();
  out.U_prime = prime.size();
  if (keep_trace) {
    out.trace = DfTrace{std::move(run.s1), std::move(run.s2), std::move(run.b),
                        std::move(run.xi), std::move(prime), std::move(xi_hat)};
  }
  return out;
}

DfEstimate estimate_df_special(const SamplingOracle& oracle, const Word& word,
                               std::size_t n, double delta, std::uint64_t seed,
                               double relax, bool keep_trace) {
  if (!in_wc(word)) {
    throw InvalidInput("word has two equal consecutive symbols (not in W_c)");
  }
  check_oracle(oracle, n, delta);
  DfEstimate out;
  if (delta >= 1.0) return out;
  SampledPipeline run = sample_pipeline(oracle, word, n, delta, seed, relax);
  out.raw = compute_M(run.xi.as_counts());
  out.delta_hat = std::clamp(out.raw, 0.0, 1.0);
  out.params = run.params;
  out.U = run.b.size();
  out.U_prime = out.U;
  if (keep_trace) {
    out.trace = DfTrace{std::move(run.s1), std::move(run.s2), std::move(run.b),
                        std::move(run.xi), PrimeStructure{}, std::nullopt};
  }
  return out;
}

}  // namespace subfree
