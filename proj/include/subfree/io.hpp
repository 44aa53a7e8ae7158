#pragma once

// Token interning and the on-disk formats:
//   text/word file: whitespace-separated tokens, one per position;
//   distribution file: one weight per line, decimal ("0.25") or "a/b",
//   normalized on load when |sum - 1| <= 1e-6, rejected otherwise.

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subfree/core.hpp"

namespace subfree {

// Maps tokens to dense ids starting at 1 (0 is the reserved sentinel).
class Alphabet {
 public:
  Symbol intern(std::string_view token);
  // Throws InvalidInput for unknown tokens.
  Symbol lookup(std::string_view token) const;
  const std::string& token(Symbol id) const;
  std::size_t size() const { return tokens_.size(); }

 private:
  std::unordered_map<std::string, Symbol> ids_;
  std::vector<std::string> tokens_;
};

std::vector<Symbol> read_tokens(std::istream& in, Alphabet& alphabet);

Text load_text(const std::filesystem::path& path, Alphabet& alphabet);
Word load_word(const std::filesystem::path& path, Alphabet& alphabet);

// Parses "a/b" or a plain decimal (optionally with exponent) exactly.
Rational parse_weight(std::string_view literal);

std::vector<Rational> read_weights(std::istream& in);

// Normalizes exactly and expresses the weights over their least common
// denominator. Throws SizeLimitError if that denominator exceeds 64 bits.
RationalDistribution normalize_weights(const std::vector<Rational>& weights);

RationalDistribution load_distribution(const std::filesystem::path& path,
                                       std::size_t expected_length);

}  // namespace subfree
