#pragma once

// Distribution-free estimation of Delta(T, w, p) from samples drawn by p:
// sample-built intervals, prefix symbol densities, the interval map for the
// sentinel-interleaved word, and 2 M of the assembled matrix. Also the
// special-case estimator for words in W_c, and the diagnostics (reference
// intervals, events E1/E2, exact xi / xi' / xi~) used to check the
// intermediate guarantees.

#include <cstdint>
#include <optional>
#include <vector>

#include "subfree/core.hpp"
#include "subfree/exact.hpp"
#include "subfree/uniform_est.hpp"

namespace subfree {

inline constexpr double kCz = 100.0;
inline constexpr double kCeta = 1.0 / 16.0;

struct ZParams {
  double z = 0.0;         // relax * c_z * k / delta
  double eta = 0.0;       // c_eta / (n z); 0 when n is unknown
  std::uint64_t s1 = 0;   // ceil(120 z ln(240 z))
  std::uint64_t s2 = 0;   // ceil(z^2 ln(40 k U)); 0 when U is unknown
};

// `relax` scales z; 1 gives the proven constants.
ZParams sample_sizes_df(std::size_t k, double delta, std::size_t U = 0,
                        std::size_t n = 0, double relax = 1.0);

// Boundaries b_1 < ... < b_U = n; B_u = [b_{u-1} + 1, b_u].
struct IntervalPartition {
  std::vector<std::size_t> bounds;
  std::vector<char> heavy;

  std::size_t size() const { return bounds.size(); }
  // b_u for u in [0, U] (b_0 = 0).
  std::size_t bound(std::size_t u) const { return u == 0 ? 0 : bounds[u - 1]; }
  Interval interval(std::size_t u) const { return {bound(u - 1) + 1, bound(u)}; }
};

// A single index with wt_S1 > 1/z is a heavy interval; otherwise the interval
// extends as far as wt_S1 stays <= 1/z and is light.
IntervalPartition build_B(const SampleSet& s1, std::size_t n, double z);

enum class HClass { kSin, kMed, kSml };

struct ReferencePartition {
  std::vector<std::size_t> bounds;  // h_1 < ... < h_L = n
  std::vector<HClass> classes;
  std::vector<double> weights;      // wt_p(H_l)

  std::size_t size() const { return bounds.size(); }
  Interval interval(std::size_t l) const {
    return {l == 1 ? 1 : bounds[l - 2] + 1, bounds[l - 1]};
  }
};

// Intervals of p-weight at most 1/(4z) containing no index heavier than
// 1/(8z); heavier indices become singletons. The scan stops before an index
// heavier than 1/(8z). A singleton of weight exactly 1/(8z) is labelled med.
ReferencePartition build_H(const Distribution& p, double z);

// E1: every sin/med H has wt_S1 within [wt_p / 2, 3 wt_p / 2]; every sml H
// has wt_S1 <= 1/(2z).
bool check_E1(const Distribution& p, const SampleSet& s1, double z);
bool check_E1(const ReferencePartition& h, const SampleSet& s1, double z);

// Per-prefix symbol densities over [b_u]: xi[i][u] for i in [k], u in [U],
// and the prefix weights wt([b_u]).
struct XiMatrix {
  std::size_t roles = 0;
  std::size_t columns = 0;
  std::vector<double> cells;
  std::vector<double> prefix_weight;

  double at(std::size_t i, std::size_t u) const {
    return cells[(i - 1) * columns + u - 1];
  }
  // wt([b_u]) for u in [0, U].
  double weight(std::size_t u) const {
    return u == 0 ? 0.0 : prefix_weight[u - 1];
  }
  CountMatrix as_counts() const;
};

// xi-breve from S2 in one pass.
XiMatrix estimate_xi(const SampleSet& s2, const IntervalPartition& b,
                     const Word& word);

// xi and wt_p([b_u]) from the exact weights.
XiMatrix exact_xi(const Text& text, const Word& word,
                  const RationalDistribution& p, const IntervalPartition& b);

// E2: |xi-breve - xi| <= 1/z entrywise and |wt_S2([b_u]) - wt_p([b_u])| <= 1/z.
bool check_E2(const XiMatrix& estimate, const XiMatrix& exact, double z);
bool check_E2(const Text& text, const RationalDistribution& p,
              const SampleSet& s2, const IntervalPartition& b, const Word& word,
              double z);

// Intervals of [2n] for the interleaved text, and f : [U'] -> [U].
struct PrimeStructure {
  std::vector<std::size_t> bounds;  // b'_1 .. b'_{U'}
  std::vector<std::size_t> f;       // 1-based

  std::size_t size() const { return bounds.size(); }
};

PrimeStructure run_alg1(const IntervalPartition& b);

// 2k x U' matrix. Odd rows copy half of xi-breve for role (i+1)/2 at f(u).
// Even rows (the sentinel) take half of wt_S2([b_{f(u)}]), except for the
// first position of a heavy pair (b'_u odd), which takes wt_S2([b_{f(u)-1}]).
CountMatrix assemble_xi_hat(const XiMatrix& xi, const IntervalPartition& b,
                            const PrimeStructure& prime);

struct DfTrace {
  SampleSet s1;
  SampleSet s2;
  IntervalPartition b;
  XiMatrix xi;
  PrimeStructure prime;
  std::optional<CountMatrix> xi_hat;
};

struct DfEstimate {
  double delta_hat = 0.0;  // clamped to [0, 1]
  double raw = 0.0;
  ZParams params;
  std::size_t U = 0;
  std::size_t U_prime = 0;
  std::optional<DfTrace> trace;
};

// S1 and S2 are drawn with seeds derived from `seed` (streams 1 and 2), so
// U is known before S2 is sized. For delta >= 1 this returns 0 without
// sampling.
DfEstimate estimate_df(const SamplingOracle& oracle, const Word& word,
                       std::size_t n, double delta, std::uint64_t seed,
                       double relax = 1.0, bool keep_trace = false);

// For w in W_c: the same two samples, output M(xi-breve). Throws InvalidInput
// when w has two equal consecutive symbols.
DfEstimate estimate_df_special(const SamplingOracle& oracle, const Word& word,
                               std::size_t n, double delta, std::uint64_t seed,
                               double relax = 1.0, bool keep_trace = false);

// ---- Exact-path diagnostics -------------------------------------------------

// xi'_i^u = sum over j <= b'_u of I_i^j(T', w') p'_j, with p' built from q.
XiMatrix exact_xi_prime(const Text& text, const Word& word,
                        const RationalDistribution& q,
                        const PrimeStructure& prime);

// xi~_i^u = N_i^{b~_u}(T~, w') / n~, with T~ the splitting of (T', p') by the
// quantized multiplicities (each T position j contributes alpha_j copies of
// t_j followed by alpha_j sentinels). Counted run by run.
XiMatrix exact_xi_tilde(const Text& text, const Word& word,
                        std::span<const std::uint64_t> alpha,
                        const PrimeStructure& prime);

// Largest |a - b| over all entries; shapes must agree.
double max_abs_diff(const CountMatrix& a, const XiMatrix& b);
double max_abs_diff(const XiMatrix& a, const XiMatrix& b);

// Rational for the exact value of a double.
Rational exact_rational(double value);

// eta = c_eta / (n z) as an exact rational, z = c_z k / delta (delta taken at
// its exact binary value).
Rational exact_eta(std::size_t n, std::size_t k, double delta);

struct ReductionPremise {
  bool spacing = false;   // long blocks of T~ are constant
  bool accuracy = false;  // |xi-hat - xi~| <= c2 delta / k~
  double max_error = 0.0;
};

// Checks both items with block lengths and counts measured in T~.
ReductionPremise check_reduction_premise(const CountMatrix& xi_hat,
                                         const XiMatrix& xi_tilde,
                                         const PrimeStructure& prime,
                                         std::span<const std::uint64_t> alpha,
                                         double delta, double c1, double c2);

}  // namespace subfree
