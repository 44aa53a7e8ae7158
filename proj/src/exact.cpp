#include "subfree/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "subfree/kernels.hpp"

namespace subfree {

namespace {

// Positions (1-based) of each symbol of w, in increasing order.
std::unordered_map<Symbol, std::vector<std::size_t>> occurrences(
    const Text& text, const Word& word) {
  std::unordered_map<Symbol, std::vector<std::size_t>> occ;
  for (Symbol s : word.symbols()) occ.try_emplace(s);
  const auto t = text.symbols();
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (auto it = occ.find(t[j]); it != occ.end()) it->second.push_back(j + 1);
  }
  return occ;
}

// Runs the greedy construction, handing each completed copy to `emit`.
// Copy m takes, for role i, the first occurrence of w_i after both
// C_m[i-1] and C_{m-1}[i]; both bounds only grow, so each role keeps one
// forward-moving cursor into its occurrence list.
template <typename Emit>
std::size_t run_greedy(const Text& text, const Word& word, Emit&& emit) {
  const auto occ = occurrences(text, word);
  const std::size_t k = word.size();
  std::vector<const std::vector<std::size_t>*> lists(k);
  for (std::size_t i = 0; i < k; ++i) lists[i] = &occ.at(word.symbols()[i]);
  std::vector<std::size_t> cursor(k, 0);
  std::vector<std::size_t> copy(k);
  std::size_t found = 0;
  for (;;) {
    std::size_t previous = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& list = *lists[i];
      std::size_t c = cursor[i];
      while (c < list.size() && list[c] <= previous) ++c;
      if (c == list.size()) return found;
      copy[i] = previous = list[c];
      cursor[i] = c + 1;
    }
    ++found;
    emit(copy);
  }
}

}  // namespace

CopySet greedy_copies(const Text& text, const Word& word) {
  CopySet out;
  run_greedy(text, word, [&](const std::vector<std::size_t>& copy) {
    out.copies.push_back(copy);
  });
  return out;
}

std::size_t count_role_disjoint(const Text& text, const Word& word) {
  return run_greedy(text, word, [](const std::vector<std::size_t>&) {});
}

bool is_role_disjoint(const CopySet& copies, const Text& text,
                      const Word& word) {
  const std::size_t k = word.size();
  std::vector<std::vector<std::size_t>> used(k);
  for (const auto& copy : copies.copies) {
    if (copy.size() != k) return false;
    for (std::size_t i = 0; i < k; ++i) {
      if (copy[i] < 1 || copy[i] > text.size()) return false;
      if (i > 0 && copy[i] <= copy[i - 1]) return false;
      if (text.at(copy[i]) != word.role(i + 1)) return false;
      used[i].push_back(copy[i]);
    }
  }
  for (auto& positions : used) {
    std::sort(positions.begin(), positions.end());
    if (std::adjacent_find(positions.begin(), positions.end()) !=
        positions.end()) {
      return false;
    }
  }
  return true;
}

RTable r_table(const Text& text, const Word& word) {
  const std::size_t k = word.size();
  const std::size_t n = text.size();
  RTable table(k, n);
  const auto t = text.symbols();
  std::vector<std::int64_t> counts(n + 1);
  std::vector<std::int64_t> running(n);
  for (std::size_t i = 1; i <= k; ++i) {
    const Symbol target = word.role(i);
    counts[0] = 0;
    for (std::size_t j = 1; j <= n; ++j) {
      counts[j] = counts[j - 1] + (t[j - 1] == target ? 1 : 0);
    }
    auto row = table.row(i);
    if (i == 1) {
      std::copy(counts.begin(), counts.end(), row.begin());
      continue;
    }
    if (n == 0) continue;
    // running[j-1] = max over j' <= j of (N_i^{j'} - R_{i-1}^{j'-1}).
    const auto previous = table.row(i - 1);
    kernels::diff_prefix_max(std::span<const std::int64_t>(counts).subspan(1),
                             previous.first(n), running);
    row[0] = 0;
    for (std::size_t j = 1; j <= n; ++j) row[j] = counts[j] - running[j - 1];
  }
  return table;
}

Rational uniform_distance(const Text& text, const Word& word) {
  if (text.empty()) {
    throw InvalidInput("distance is undefined for an empty text");
  }
  return Rational(BigInt(count_role_disjoint(text, word)), BigInt(text.size()));
}

namespace {

// Whether the text, with the candidate positions selected by `removed`
// deleted, still contains w as a subsequence. Leftmost matching decides this.
bool contains_after_removal(std::span<const Symbol> t, std::span<const Symbol> w,
                            std::span<const int> candidate_bit,
                            std::uint32_t removed) {
  std::size_t state = 0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    const int bit = candidate_bit[j];
    if (bit >= 0 && (removed >> bit) & 1U) continue;
    if (t[j] == w[state] && ++state == w.size()) return true;
  }
  return false;
}

// Next integer with the same popcount (Gosper).
std::uint64_t next_combination(std::uint64_t x) {
  const std::uint64_t low = x & (~x + 1);
  const std::uint64_t ripple = x + low;
  return ripple | (((x ^ ripple) >> 2) / low);
}

}  // namespace

Rational bruteforce_distance(const Text& text, const Word& word,
                             const std::optional<RationalDistribution>& p) {
  const std::size_t n = text.size();
  if (n > kBruteForceMaxLength) {
    throw SizeLimitError("brute force limited to n <= 22, got n = " +
                         std::to_string(n));
  }
  if (n == 0) throw InvalidInput("distance is undefined for an empty text");
  if (p && p->size() != n) {
    throw InvalidInput("distribution and text lengths differ");
  }
  const auto t = text.symbols();
  const auto w = word.symbols();
  // Only positions carrying a symbol of w can matter.
  std::vector<int> candidate_bit(n, -1);
  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::find(w.begin(), w.end(), t[j]) != w.end()) {
      candidate_bit[j] = static_cast<int>(candidates.size());
      candidates.push_back(j);
    }
  }
  const std::size_t m = candidates.size();
  const std::uint64_t limit = std::uint64_t{1} << m;

  if (!p) {
    for (std::size_t c = 0; c <= m; ++c) {
      for (std::uint64_t mask = (std::uint64_t{1} << c) - 1; mask < limit;
           mask = next_combination(mask)) {
        if (!contains_after_removal(t, w, candidate_bit,
                                    static_cast<std::uint32_t>(mask))) {
          return Rational(BigInt(c), BigInt(n));
        }
        if (c == 0) break;
      }
    }
    return Rational(BigInt(m), BigInt(n));
  }

  const auto a = p->numerators();
  // Removing every candidate always works.
  std::uint64_t best = 0;  // bounded by the denominator
  for (std::size_t j : candidates) best += a[j];
  for (std::size_t c = 0; c < m; ++c) {
    for (std::uint64_t mask = (std::uint64_t{1} << c) - 1; mask < limit;
         mask = next_combination(mask)) {
      std::uint64_t weight = 0;
      for (std::uint64_t bits = mask; bits != 0; bits &= bits - 1) {
        weight += a[candidates[std::countr_zero(bits)]];
      }
      if (weight < best &&
          !contains_after_removal(t, w, candidate_bit,
                                  static_cast<std::uint32_t>(mask))) {
        best = weight;
      }
      if (c == 0) break;
    }
  }
  return Rational(BigInt(best), BigInt(p->denominator()));
}

bool in_wc(const Word& word) {
  const auto w = word.symbols();
  return std::adjacent_find(w.begin(), w.end()) == w.end();
}

Splitting build_splitting(const Text& text, const RationalDistribution& p,
                          const Rational& beta) {
  if (p.size() != text.size()) {
    throw InvalidInput("distribution and text lengths differ");
  }
  if (beta <= 0) throw InvalidInput("beta must be positive");
  Splitting out;
  out.multiplicity.reserve(p.size());
  std::uint64_t total = 0;
  for (std::size_t j = 1; j <= p.size(); ++j) {
    const Rational alpha = p.weight(j) / beta;
    if (boost::multiprecision::denominator(alpha) != 1 || alpha <= 0) {
      throw InvalidInput("p_" + std::to_string(j) + " / beta = " +
                         to_string(alpha) + " is not a positive integer");
    }
    const BigInt a = boost::multiprecision::numerator(alpha);
    if (a > kMaxMaterialized || total + a.convert_to<std::uint64_t>() >
                                    kMaxMaterialized) {
      throw SizeLimitError("splitting would exceed 10^7 positions");
    }
    out.multiplicity.push_back(a.convert_to<std::uint64_t>());
    total += out.multiplicity.back();
  }
  std::vector<Symbol> expanded;
  expanded.reserve(total);
  out.origin.reserve(total);
  const auto t = text.symbols();
  for (std::size_t j = 0; j < t.size(); ++j) {
    expanded.insert(expanded.end(), out.multiplicity[j], t[j]);
    out.origin.insert(out.origin.end(), out.multiplicity[j], j + 1);
  }
  out.expanded = Text(std::move(expanded));
  return out;
}

QuantizedDistribution quantize(const Distribution& p, double eta) {
  if (!(eta > 0.0)) throw InvalidInput("eta must be positive");
  QuantizedDistribution out;
  out.eta = eta;
  const auto w = p.weights();
  out.rounded.resize(w.size());
  double total = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    out.rounded[j] = static_cast<double>(ceil_tolerant(w[j] / eta)) * eta;
    total += out.rounded[j];
  }
  out.zeta = 1.0 / total;
  out.weights.resize(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    out.weights[j] = out.zeta * out.rounded[j];
    out.l1 += std::abs(w[j] - out.weights[j]);
  }
  return out;
}

QuantizedRational quantize(const RationalDistribution& p, const Rational& eta) {
  if (eta <= 0) throw InvalidInput("eta must be positive");
  std::vector<std::uint64_t> alpha(p.size());
  BigInt total = 0;
  for (std::size_t j = 1; j <= p.size(); ++j) {
    const Rational ratio = p.weight(j) / eta;
    const BigInt num = boost::multiprecision::numerator(ratio);
    const BigInt den = boost::multiprecision::denominator(ratio);
    const BigInt ceiling = (num + den - 1) / den;
    if (ceiling > BigInt(std::numeric_limits<std::uint64_t>::max())) {
      throw SizeLimitError("quantized multiplicity exceeds 64 bits");
    }
    alpha[j - 1] = ceiling.convert_to<std::uint64_t>();
    total += ceiling;
  }
  if (total > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw SizeLimitError("quantized total exceeds 64 bits");
  }
  const std::uint64_t a_total = total.convert_to<std::uint64_t>();
  RationalDistribution weights(alpha, a_total);
  Rational l1 = 0;
  for (std::size_t j = 1; j <= p.size(); ++j) {
    l1 += abs(p.weight(j) - weights.weight(j));
  }
  return {eta, std::move(alpha), 1 / (eta * Rational(total)),
          std::move(weights), l1};
}

Text interleave_sentinel(const Text& text) {
  std::vector<Symbol> out;
  out.reserve(2 * text.size());
  for (Symbol s : text.symbols()) {
    if (s == kSentinel) throw InvalidInput("text already contains the sentinel");
    out.push_back(s);
    out.push_back(kSentinel);
  }
  return Text(std::move(out));
}

Word interleave_sentinel(const Word& word) {
  std::vector<Symbol> out;
  out.reserve(2 * word.size());
  for (Symbol s : word.symbols()) {
    if (s == kSentinel) throw InvalidInput("word already contains the sentinel");
    out.push_back(s);
    out.push_back(kSentinel);
  }
  return Word(std::move(out));
}

WcReduction reduce_to_wc(const Text& text, const Word& word) {
  return {interleave_sentinel(text), interleave_sentinel(word), std::nullopt};
}

WcReduction reduce_to_wc(const Text& text, const Word& word,
                         const RationalDistribution& q) {
  if (q.size() != text.size()) {
    throw InvalidInput("distribution and text lengths differ");
  }
  if (q.denominator() > std::numeric_limits<std::uint64_t>::max() / 2) {
    throw SizeLimitError("denominator too large to halve the weights");
  }
  std::vector<std::uint64_t> halves;
  halves.reserve(2 * q.size());
  for (std::uint64_t a : q.numerators()) {
    halves.push_back(a);
    halves.push_back(a);
  }
  WcReduction out = reduce_to_wc(text, word);
  out.dist = RationalDistribution(std::move(halves), 2 * q.denominator());
  return out;
}

Rational exact_weighted_distance(const Text& text, const Word& word,
                                 const RationalDistribution& p) {
  const PositiveSupport support = drop_zero_weight(text, p);
  std::uint64_t g = support.dist.denominator();
  for (std::uint64_t a : support.dist.numerators()) g = std::gcd(g, a);
  const std::uint64_t denominator = support.dist.denominator() / g;
  if (denominator > kMaxMaterialized / 2) {
    throw SizeLimitError("common denominator " + std::to_string(denominator) +
                         " too large: the split text would exceed 10^7 positions");
  }
  std::vector<std::uint64_t> reduced(support.dist.numerators().begin(),
                                     support.dist.numerators().end());
  for (std::uint64_t& a : reduced) a /= g;
  const RationalDistribution q(std::move(reduced), denominator);
  const WcReduction prime = reduce_to_wc(support.text, word, q);
  const Splitting split = build_splitting(
      prime.text, *prime.dist, Rational(BigInt(1), BigInt(2 * denominator)));
  const std::size_t r = count_role_disjoint(split.expanded, prime.word);
  // Delta(T, w, p) = 2 * Delta(T~', w') = 2 * r / (2D).
  return Rational(BigInt(r), BigInt(denominator));
}

}  // namespace subfree
