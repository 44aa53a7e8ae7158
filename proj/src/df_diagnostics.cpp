#include "subfree/df_est.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace subfree {

ReferencePartition build_H(const Distribution& p, double z) {
  if (!(z > 0.0)) throw InvalidInput("z must be positive");
  const double single = 1.0 / (8.0 * z);
  const double cap = 1.0 / (4.0 * z);
  const auto w = p.weights();
  const std::size_t n = w.size();
  ReferencePartition out;
  std::size_t j = 0;
  while (j < n) {
    if (w[j] > single) {
      out.bounds.push_back(j + 1);
      out.classes.push_back(HClass::kSin);
      out.weights.push_back(w[j]);
      ++j;
      continue;
    }
    double sum = w[j];
    std::size_t end = j;
    while (end + 1 < n && w[end + 1] <= single && sum + w[end + 1] <= cap) {
      sum += w[++end];
    }
    out.bounds.push_back(end + 1);
    out.classes.push_back(sum >= single ? HClass::kMed : HClass::kSml);
    out.weights.push_back(sum);
    j = end + 1;
  }
  return out;
}

namespace {

// Prefix sums of N_S over [0, n].
std::vector<std::uint64_t> sample_prefix(const SampleSet& s, std::size_t n) {
  std::vector<std::uint64_t> prefix(n + 1, 0);
  for (const auto& e : s.entries()) {
    if (e.index > n) throw RangeError("sampled index beyond the domain");
    prefix[e.index] = e.count;
  }
  for (std::size_t j = 1; j <= n; ++j) prefix[j] += prefix[j - 1];
  return prefix;
}

}  // namespace

bool check_E1(const ReferencePartition& h, const SampleSet& s1, double z) {
  if (s1.empty()) throw InvalidInput("empty sample");
  const std::size_t n = h.size() == 0 ? 0 : h.bounds.back();
  const auto prefix = sample_prefix(s1, n);
  const double s = static_cast<double>(s1.size());
  for (std::size_t l = 1; l <= h.size(); ++l) {
    const Interval iv = h.interval(l);
    const double ws =
        static_cast<double>(prefix[iv.last] - prefix[iv.first - 1]) / s;
    const double wp = h.weights[l - 1];
    if (h.classes[l - 1] == HClass::kSml) {
      if (ws > 1.0 / (2.0 * z)) return false;
    } else if (ws < 0.5 * wp || ws > 1.5 * wp) {
      return false;
    }
  }
  return true;
}

bool check_E1(const Distribution& p, const SampleSet& s1, double z) {
  return check_E1(build_H(p, z), s1, z);
}

namespace {

// xi over the given prefix ends, from integer weights over a denominator.
XiMatrix weighted_xi(std::span<const Symbol> text, const Word& word,
                     std::span<const std::uint64_t> weight,
                     std::uint64_t denominator,
                     std::span<const std::size_t> bounds) {
  std::unordered_map<Symbol, std::size_t> id;
  std::vector<std::size_t> role_id;
  for (Symbol s : word.symbols()) {
    role_id.push_back(id.try_emplace(s, id.size()).first->second);
  }
  const std::size_t columns = bounds.size();
  std::vector<std::uint64_t> sums(id.size(), 0);
  std::vector<std::uint64_t> at_bound(id.size() * columns, 0);
  std::vector<std::uint64_t> total(columns, 0);
  std::uint64_t running = 0;
  std::size_t pos = 0;
  for (std::size_t u = 0; u < columns; ++u) {
    if (bounds[u] > text.size() || bounds[u] < pos) {
      throw InvalidInput("interval bounds do not fit the text");
    }
    for (; pos < bounds[u]; ++pos) {
      running += weight[pos];
      if (auto it = id.find(text[pos]); it != id.end()) {
        sums[it->second] += weight[pos];
      }
    }
    for (std::size_t d = 0; d < id.size(); ++d) at_bound[d * columns + u] = sums[d];
    total[u] = running;
  }
  const double den = static_cast<double>(denominator);
  XiMatrix out;
  out.roles = word.size();
  out.columns = columns;
  out.cells.resize(word.size() * columns);
  for (std::size_t i = 0; i < word.size(); ++i) {
    for (std::size_t u = 0; u < columns; ++u) {
      out.cells[i * columns + u] =
          static_cast<double>(at_bound[role_id[i] * columns + u]) / den;
    }
  }
  out.prefix_weight.resize(columns);
  for (std::size_t u = 0; u < columns; ++u) {
    out.prefix_weight[u] = static_cast<double>(total[u]) / den;
  }
  return out;
}

}  // namespace

XiMatrix exact_xi(const Text& text, const Word& word,
                  const RationalDistribution& p, const IntervalPartition& b) {
  if (p.size() != text.size()) {
    throw InvalidInput("distribution length differs from the text length");
  }
  return weighted_xi(text.symbols(), word, p.numerators(), p.denominator(),
                     b.bounds);
}

bool check_E2(const XiMatrix& estimate, const XiMatrix& exact, double z) {
  if (estimate.roles != exact.roles || estimate.columns != exact.columns) {
    throw InvalidInput("xi shapes disagree");
  }
  const double bound = 1.0 / z;
  for (std::size_t q = 0; q < estimate.cells.size(); ++q) {
    if (std::abs(estimate.cells[q] - exact.cells[q]) > bound) return false;
  }
  for (std::size_t u = 0; u < estimate.prefix_weight.size(); ++u) {
    if (std::abs(estimate.prefix_weight[u] - exact.prefix_weight[u]) > bound) {
      return false;
    }
  }
  return true;
}

bool check_E2(const Text& text, const RationalDistribution& p,
              const SampleSet& s2, const IntervalPartition& b, const Word& word,
              double z) {
  return check_E2(estimate_xi(s2, b, word), exact_xi(text, word, p, b), z);
}

XiMatrix exact_xi_prime(const Text& text, const Word& word,
                        const RationalDistribution& q,
                        const PrimeStructure& prime) {
  const WcReduction reduced = reduce_to_wc(text, word, q);
  return weighted_xi(reduced.text.symbols(), reduced.word,
                     reduced.dist->numerators(), reduced.dist->denominator(),
                     prime.bounds);
}

XiMatrix exact_xi_tilde(const Text& text, const Word& word,
                        std::span<const std::uint64_t> alpha,
                        const PrimeStructure& prime) {
  if (alpha.size() != text.size()) {
    throw InvalidInput("multiplicities do not match the text length");
  }
  // Counting N(T~, w') at b~_u is counting T' with weight alpha per position.
  const Text interleaved = interleave_sentinel(text);
  std::vector<std::uint64_t> weight(interleaved.size());
  std::uint64_t a = 0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    weight[2 * j] = weight[2 * j + 1] = alpha[j];
    a += alpha[j];
  }
  return weighted_xi(interleaved.symbols(), interleave_sentinel(word), weight,
                     2 * a, prime.bounds);
}

double max_abs_diff(const CountMatrix& a, const XiMatrix& b) {
  if (a.roles() != b.roles || a.columns() != b.columns) {
    throw InvalidInput("matrix shapes disagree");
  }
  double worst = 0.0;
  for (std::size_t i = 1; i <= b.roles; ++i) {
    for (std::size_t u = 1; u <= b.columns; ++u) {
      worst = std::max(worst, std::abs(a.at(i, u) - b.at(i, u)));
    }
  }
  return worst;
}

double max_abs_diff(const XiMatrix& a, const XiMatrix& b) {
  if (a.roles != b.roles || a.columns != b.columns) {
    throw InvalidInput("matrix shapes disagree");
  }
  double worst = 0.0;
  for (std::size_t q = 0; q < a.cells.size(); ++q) {
    worst = std::max(worst, std::abs(a.cells[q] - b.cells[q]));
  }
  return worst;
}

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw InvalidInput("non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational out{BigInt(scaled)};
  if (exponent > 0) {
    out *= Rational(BigInt(1) << exponent);
  } else if (exponent < 0) {
    out /= Rational(BigInt(1) << -exponent);
  }
  return out;
}

Rational exact_eta(std::size_t n, std::size_t k, double delta) {
  if (n == 0 || k == 0) throw InvalidInput("n and k must be positive");
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  // c_eta / (n z) with z = c_z k / delta, c_eta = 1/16, c_z = 100.
  return exact_rational(delta) /
         Rational(BigInt(1600) * BigInt(k) * BigInt(n));
}

ReductionPremise check_reduction_premise(const CountMatrix& xi_hat,
                                         const XiMatrix& xi_tilde,
                                         const PrimeStructure& prime,
                                         std::span<const std::uint64_t> alpha,
                                         double delta, double c1, double c2) {
  if (xi_hat.columns() != prime.size()) {
    throw InvalidInput("xi-hat and the prime intervals disagree");
  }
  const double k_tilde = static_cast<double>(xi_hat.roles());
  std::vector<std::uint64_t> prefix(2 * alpha.size() + 1, 0);
  for (std::size_t pos = 1; pos < prefix.size(); ++pos) {
    prefix[pos] = prefix[pos - 1] + alpha[(pos - 1) / 2];
  }
  const double n_tilde = static_cast<double>(prefix.back());
  ReductionPremise out;
  out.spacing = true;
  const double long_block = c1 * delta * n_tilde / k_tilde;
  std::size_t previous = 0;
  for (std::size_t b : prime.bounds) {
    if (b >= prefix.size() || b <= previous) {
      throw InvalidInput("prime bounds do not fit the multiplicities");
    }
    const double length = static_cast<double>(prefix[b] - prefix[previous]);
    if (length > long_block && b - previous != 1) out.spacing = false;
    previous = b;
  }
  out.max_error = max_abs_diff(xi_hat, xi_tilde);
  out.accuracy = out.max_error <= c2 * delta / k_tilde;
  return out;
}

}  // namespace subfree
