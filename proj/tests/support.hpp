#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "subfree/core.hpp"
#include "subfree/rng.hpp"

namespace subfree::testing {

// 'a' -> 1, 'b' -> 2, ...; '0' -> the sentinel.
inline std::vector<Symbol> symbols_of(const std::string& s) {
  std::vector<Symbol> out;
  for (char c : s) out.push_back(c == '0' ? kSentinel : static_cast<Symbol>(c - 'a' + 1));
  return out;
}

inline Text text_of(const std::string& s) { return Text(symbols_of(s)); }
inline Word word_of(const std::string& s) { return Word(symbols_of(s)); }

inline std::string string_of(std::span<const Symbol> symbols) {
  std::string out;
  for (Symbol x : symbols) out += x == kSentinel ? '0' : static_cast<char>('a' + x - 1);
  return out;
}

inline Text random_text(Rng& rng, std::size_t n, std::size_t alphabet) {
  std::vector<Symbol> t(n);
  for (auto& x : t) x = static_cast<Symbol>(rng.below(alphabet) + 1);
  return Text(std::move(t));
}

inline Word random_word(Rng& rng, std::size_t k, std::size_t alphabet) {
  std::vector<Symbol> w(k);
  for (auto& x : w) x = static_cast<Symbol>(rng.below(alphabet) + 1);
  return Word(std::move(w));
}

// Positive integer weights a_j in [1, max_weight] over their sum.
inline RationalDistribution random_rational(Rng& rng, std::size_t n,
                                            std::uint64_t max_weight) {
  std::vector<std::uint64_t> a(n);
  std::uint64_t total = 0;
  for (auto& x : a) total += x = 1 + rng.below(max_weight);
  return RationalDistribution(std::move(a), total);
}

// Minimum total weight of positions to modify so that T becomes w-free, by a
// DP over the state of leftmost matching (number of roles matched so far).
// A modified position matches nothing. Weights are integers; the result is in
// the same units.
inline std::uint64_t automaton_cost(std::span<const Symbol> t,
                                    std::span<const Symbol> w,
                                    std::span<const std::uint64_t> weight) {
  constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  const std::size_t k = w.size();
  std::vector<std::uint64_t> cost(k, kInf);
  cost[0] = 0;
  for (std::size_t j = 0; j < t.size(); ++j) {
    std::vector<std::uint64_t> next(k, kInf);
    for (std::size_t q = 0; q < k; ++q) {
      if (cost[q] == kInf) continue;
      next[q] = std::min(next[q], cost[q] + weight[j]);
      if (t[j] == w[q]) {
        if (q + 1 < k) next[q + 1] = std::min(next[q + 1], cost[q]);
      } else {
        next[q] = std::min(next[q], cost[q]);
      }
    }
    cost = std::move(next);
  }
  return *std::min_element(cost.begin(), cost.end());
}

inline Rational automaton_distance(const Text& text, const Word& word,
                                   const RationalDistribution& p) {
  return Rational(BigInt(automaton_cost(text.symbols(), word.symbols(), p.numerators())),
                  BigInt(p.denominator()));
}

inline Rational automaton_distance(const Text& text, const Word& word) {
  const std::vector<std::uint64_t> ones(text.size(), 1);
  return Rational(BigInt(automaton_cost(text.symbols(), word.symbols(), ones)),
                  BigInt(text.size()));
}

}  // namespace subfree::testing
