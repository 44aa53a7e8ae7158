#pragma once

// Shared domain types: words, texts, weight vectors, sample multisets and the
// sampling oracle through which estimators observe a text.
//
// Conventions: positions, interval endpoints, prefix lengths and word roles are
// 1-based, as in the usual statement of the problem ([n] = {1, ..., n}). Dense
// storage (Text::symbols(), matrices) is 0-based.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace subfree {

using Symbol = std::uint32_t;

// Never produced by ingestion; reserved for the W_c reduction.
inline constexpr Symbol kSentinel = 0;

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

std::string to_string(const Rational& value);
double to_double(const Rational& value);

// ceil(x) that ignores a relative excess below 1e-9, so that values such as
// 6 / 0.3 = 20.000000000000004 round to 20.
std::uint64_t ceil_tolerant(double x);

class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Closed interval [first, last] of 1-based positions.
struct Interval {
  std::size_t first;
  std::size_t last;
};

class Word {
 public:
  explicit Word(std::vector<Symbol> symbols);

  std::size_t size() const { return symbols_.size(); }
  std::size_t distinct_count() const { return distinct_; }
  // 1-based role.
  Symbol role(std::size_t i) const;
  std::span<const Symbol> symbols() const { return symbols_; }

  bool operator==(const Word&) const = default;

 private:
  std::vector<Symbol> symbols_;
  std::size_t distinct_ = 0;
};

class Text {
 public:
  Text() = default;
  explicit Text(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  // 1-based position.
  Symbol at(std::size_t position) const;
  std::span<const Symbol> symbols() const { return symbols_; }

  bool operator==(const Text&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

// Float weight vector used on the estimator path.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit Distribution(std::vector<double> weights);
  static Distribution uniform(std::size_t n);

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t position) const;
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// Exact weight vector: numerators over one common denominator, summing to it.
class RationalDistribution {
 public:
  RationalDistribution(std::vector<std::uint64_t> numerators,
                       std::uint64_t denominator);
  static RationalDistribution uniform(std::size_t n);

  std::size_t size() const { return numerators_.size(); }
  std::uint64_t denominator() const { return denominator_; }
  std::uint64_t numerator(std::size_t position) const;
  std::span<const std::uint64_t> numerators() const { return numerators_; }
  Rational weight(std::size_t position) const;
  Distribution to_float() const;

  bool operator==(const RationalDistribution&) const = default;

 private:
  std::vector<std::uint64_t> numerators_;
  std::uint64_t denominator_;
};

struct SamplePair {
  std::size_t index;  // 1-based
  Symbol symbol;
};

// A multiset of (index, symbol) draws, kept as distinct indices with
// multiplicities, sorted by index.
class SampleSet {
 public:
  struct Entry {
    std::size_t index;
    Symbol symbol;
    std::uint64_t count;

    bool operator==(const Entry&) const = default;
  };

  SampleSet() = default;
  static SampleSet from_pairs(std::span<const SamplePair> pairs);
  static SampleSet from_entries(std::vector<Entry> entries);

  std::uint64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::span<const Entry> entries() const { return entries_; }
  // N_S(j).
  std::uint64_t count(std::size_t index) const;
  std::vector<SamplePair> pairs() const;

  bool operator==(const SampleSet&) const = default;

 private:
  std::vector<Entry> entries_;
  std::uint64_t size_ = 0;
};

// The only view of a text an estimator gets. Implementations are immutable;
// draw() is deterministic in (s, seed) and safe to call concurrently.
class SamplingOracle {
 public:
  virtual ~SamplingOracle() = default;
  virtual std::size_t domain_size() const = 0;
  virtual SampleSet draw(std::uint64_t s, std::uint64_t seed) const = 0;
};

class UniformOracle final : public SamplingOracle {
 public:
  explicit UniformOracle(const Text& text) : text_(text) {}
  std::size_t domain_size() const override { return text_.size(); }
  SampleSet draw(std::uint64_t s, std::uint64_t seed) const override;

 private:
  const Text& text_;
};

// Inverse-CDF sampling over a cumulative table, with a guide table of n
// buckets so that a lookup starts next to its answer.
class DistributionOracle final : public SamplingOracle {
 public:
  DistributionOracle(const Text& text, const Distribution& p);
  DistributionOracle(const Text& text, const RationalDistribution& p);

  std::size_t domain_size() const override { return text_.size(); }
  SampleSet draw(std::uint64_t s, std::uint64_t seed) const override;

 private:
  void build_guide();

  const Text& text_;
  std::vector<double> cdf_;
  std::vector<std::uint32_t> guide_;
};

// wt_p([first, last]).
double wt_p(const Distribution& p, Interval interval);
Rational wt_p(const RationalDistribution& p, Interval interval);

// wt_S([first, last]) = (1/s) * sum of N_S(j) over the interval.
double wt_S(const SampleSet& sample, Interval interval);

// N_i^j: occurrences of w_i in T[1..j]. role in [1, k], prefix in [0, n].
std::size_t count_prefix(const Text& text, const Word& word, std::size_t role,
                         std::size_t prefix);

// I_i^j: 1 iff T[j] = w_i.
int indicator(const Text& text, const Word& word, std::size_t role,
              std::size_t position);

// A full census of a rational distribution: index j appears numerator(j)
// times, so that wt_S = wt_p exactly.
SampleSet census(const Text& text, const RationalDistribution& p);

struct PositiveSupport {
  Text text;
  RationalDistribution dist;
  std::vector<std::size_t> origin;  // 1-based position in the input
};

// Removes zero-weight positions; they can be modified at no cost.
PositiveSupport drop_zero_weight(const Text& text,
                                 const RationalDistribution& p);

}  // namespace subfree
