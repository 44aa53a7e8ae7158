#include "subfree/io.hpp"

#include <boost/integer/common_factor.hpp>

#include <cctype>
#include <fstream>
#include <sstream>

namespace subfree {

Symbol Alphabet::intern(std::string_view token) {
  auto [it, inserted] =
      ids_.try_emplace(std::string(token), static_cast<Symbol>(tokens_.size() + 1));
  if (inserted) tokens_.emplace_back(token);
  return it->second;
}

Symbol Alphabet::lookup(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) {
    throw InvalidInput("unknown token '" + std::string(token) + "'");
  }
  return it->second;
}

const std::string& Alphabet::token(Symbol id) const {
  if (id == kSentinel || id > tokens_.size()) {
    throw RangeError("symbol id " + std::to_string(id) + " not interned");
  }
  return tokens_[id - 1];
}

std::vector<Symbol> read_tokens(std::istream& in, Alphabet& alphabet) {
  std::vector<Symbol> out;
  std::string token;
  while (in >> token) out.push_back(alphabet.intern(token));
  return out;
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

Text load_text(const std::filesystem::path& path, Alphabet& alphabet) {
  auto in = open_input(path);
  return Text(read_tokens(in, alphabet));
}

Word load_word(const std::filesystem::path& path, Alphabet& alphabet) {
  auto in = open_input(path);
  auto symbols = read_tokens(in, alphabet);
  if (symbols.empty()) {
    throw InvalidInput("word file '" + path.string() + "' is empty");
  }
  return Word(std::move(symbols));
}

Rational parse_weight(std::string_view literal) {
  auto bad = [&]() {
    return InvalidInput("malformed weight '" + std::string(literal) + "'");
  };
  if (literal.empty()) throw bad();
  if (auto slash = literal.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_weight(literal.substr(0, slash));
    const Rational den = parse_weight(literal.substr(slash + 1));
    if (den == 0) throw InvalidInput("zero denominator in weight");
    return num / den;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (literal[pos] == '+' || literal[pos] == '-') {
    negative = literal[pos] == '-';
    ++pos;
  }
  BigInt mantissa = 0;
  long scale = 0;
  bool digits = false;
  for (; pos < literal.size() && std::isdigit(static_cast<unsigned char>(literal[pos])); ++pos) {
    mantissa = mantissa * 10 + (literal[pos] - '0');
    digits = true;
  }
  if (pos < literal.size() && literal[pos] == '.') {
    for (++pos; pos < literal.size() && std::isdigit(static_cast<unsigned char>(literal[pos])); ++pos) {
      mantissa = mantissa * 10 + (literal[pos] - '0');
      --scale;
      digits = true;
    }
  }
  if (!digits) throw bad();
  if (pos < literal.size() && (literal[pos] == 'e' || literal[pos] == 'E')) {
    ++pos;
    bool exp_negative = false;
    if (pos < literal.size() && (literal[pos] == '+' || literal[pos] == '-')) {
      exp_negative = literal[pos] == '-';
      ++pos;
    }
    long exponent = 0;
    bool exp_digits = false;
    for (; pos < literal.size() && std::isdigit(static_cast<unsigned char>(literal[pos])); ++pos) {
      exponent = exponent * 10 + (literal[pos] - '0');
      exp_digits = true;
      if (exponent > 400) throw bad();
    }
    if (!exp_digits) throw bad();
    scale += exp_negative ? -exponent : exponent;
  }
  if (pos != literal.size()) throw bad();
  Rational value(mantissa);
  const BigInt power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::labs(scale)));
  if (scale >= 0) {
    value *= power;
  } else {
    value /= power;
  }
  return negative ? -value : value;
}

std::vector<Rational> read_weights(std::istream& in) {
  std::vector<Rational> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string literal;
    if (!(fields >> literal)) continue;
    std::string extra;
    if (fields >> extra) {
      throw InvalidInput("expected one weight per line, got '" + line + "'");
    }
    out.push_back(parse_weight(literal));
  }
  return out;
}

RationalDistribution normalize_weights(const std::vector<Rational>& weights) {
  if (weights.empty()) throw InvalidInput("empty distribution");
  Rational sum = 0;
  for (const Rational& w : weights) {
    if (w < 0) throw InvalidInput("negative weight");
    sum += w;
  }
  const Rational tolerance(BigInt(1), BigInt(1000000));
  if (abs(sum - 1) > tolerance) {
    throw InvalidInput("weights sum to " + std::to_string(to_double(sum)) +
                       "; |sum - 1| exceeds 1e-6");
  }
  BigInt lcm = 1;
  for (const Rational& w : weights) {
    const Rational normalized = w / sum;
    lcm = boost::integer::lcm(lcm, BigInt(boost::multiprecision::denominator(normalized)));
  }
  if (lcm > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw SizeLimitError("common denominator of the weights exceeds 64 bits");
  }
  std::vector<std::uint64_t> numerators;
  numerators.reserve(weights.size());
  for (const Rational& w : weights) {
    const Rational scaled = (w / sum) * lcm;
    numerators.push_back(
        boost::multiprecision::numerator(scaled).convert_to<std::uint64_t>());
  }
  return RationalDistribution(std::move(numerators),
                              lcm.convert_to<std::uint64_t>());
}

RationalDistribution load_distribution(const std::filesystem::path& path,
                                       std::size_t expected_length) {
  auto in = open_input(path);
  auto weights = read_weights(in);
  if (weights.size() != expected_length) {
    throw InvalidInput("distribution has " + std::to_string(weights.size()) +
                       " weights, text has " + std::to_string(expected_length) +
                       " positions");
  }
  return normalize_weights(weights);
}

}  // namespace subfree
