#include "subfree/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "subfree/kernels.hpp"
#include "subfree/rng.hpp"

namespace subfree {

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) {
  return value.convert_to<double>();
}

std::uint64_t ceil_tolerant(double x) {
  if (!(x >= 0.0) || !std::isfinite(x) || x >= 0x1.0p63) {
    throw RangeError("ceil_tolerant argument out of range");
  }
  // A few ulps: enough for rounding noise, small next to genuine fractions.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x);
  return static_cast<std::uint64_t>(std::ceil(x - slack));
}

Word::Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw InvalidInput("word must be nonempty");
  std::unordered_set<Symbol> seen(symbols_.begin(), symbols_.end());
  distinct_ = seen.size();
}

Symbol Word::role(std::size_t i) const {
  if (i < 1 || i > symbols_.size()) {
    throw InvalidInput("role " + std::to_string(i) + " outside [1, " +
                       std::to_string(symbols_.size()) + "]");
  }
  return symbols_[i - 1];
}

Symbol Text::at(std::size_t position) const {
  if (position < 1 || position > symbols_.size()) {
    throw RangeError("position " + std::to_string(position) +
                     " outside [1, " + std::to_string(symbols_.size()) + "]");
  }
  return symbols_[position - 1];
}

Distribution::Distribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidInput("distribution weights must be finite and nonnegative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InvalidInput("distribution weights sum to " + std::to_string(sum) +
                       ", not 1");
  }
}

Distribution Distribution::uniform(std::size_t n) {
  if (n == 0) throw InvalidInput("uniform distribution over an empty domain");
  return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double Distribution::weight(std::size_t position) const {
  if (position < 1 || position > weights_.size()) {
    throw RangeError("position outside the distribution's domain");
  }
  return weights_[position - 1];
}

RationalDistribution::RationalDistribution(
    std::vector<std::uint64_t> numerators, std::uint64_t denominator)
    : numerators_(std::move(numerators)), denominator_(denominator) {
  if (denominator_ == 0) throw InvalidInput("zero denominator");
  __extension__ typedef unsigned __int128 Wide;
  Wide sum = 0;
  for (std::uint64_t a : numerators_) sum += a;
  if (sum != denominator_) {
    throw InvalidInput("rational weights do not sum to 1");
  }
}

RationalDistribution RationalDistribution::uniform(std::size_t n) {
  if (n == 0) throw InvalidInput("uniform distribution over an empty domain");
  return RationalDistribution(std::vector<std::uint64_t>(n, 1), n);
}

std::uint64_t RationalDistribution::numerator(std::size_t position) const {
  if (position < 1 || position > numerators_.size()) {
    throw RangeError("position outside the distribution's domain");
  }
  return numerators_[position - 1];
}

Rational RationalDistribution::weight(std::size_t position) const {
  return Rational(BigInt(numerator(position)), BigInt(denominator_));
}

Distribution RationalDistribution::to_float() const {
  std::vector<double> w(numerators_.size());
  const double den = static_cast<double>(denominator_);
  for (std::size_t j = 0; j < w.size(); ++j) {
    w[j] = static_cast<double>(numerators_[j]) / den;
  }
  return Distribution(std::move(w));
}

SampleSet SampleSet::from_pairs(std::span<const SamplePair> pairs) {
  std::vector<SamplePair> sorted(pairs.begin(), pairs.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SamplePair& x, const SamplePair& y) {
                     return x.index < y.index;
                   });
  std::vector<Entry> entries;
  for (const SamplePair& p : sorted) {
    if (!entries.empty() && entries.back().index == p.index) {
      if (entries.back().symbol != p.symbol) {
        throw InvalidInput("inconsistent symbols for one sampled index");
      }
      ++entries.back().count;
    } else {
      entries.push_back({p.index, p.symbol, 1});
    }
  }
  return from_entries(std::move(entries));
}

SampleSet SampleSet::from_entries(std::vector<Entry> entries) {
  SampleSet out;
  std::erase_if(entries, [](const Entry& e) { return e.count == 0; });
  for (std::size_t q = 0; q < entries.size(); ++q) {
    if (entries[q].index == 0 ||
        (q > 0 && entries[q].index <= entries[q - 1].index)) {
      throw InvalidInput("sample entries must have increasing 1-based indices");
    }
    out.size_ += entries[q].count;
  }
  out.entries_ = std::move(entries);
  return out;
}

std::uint64_t SampleSet::count(std::size_t index) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, std::size_t j) { return e.index < j; });
  return (it != entries_.end() && it->index == index) ? it->count : 0;
}

std::vector<SamplePair> SampleSet::pairs() const {
  std::vector<SamplePair> out;
  out.reserve(size_);
  for (const Entry& e : entries_) {
    for (std::uint64_t c = 0; c < e.count; ++c) {
      out.push_back({e.index, e.symbol});
    }
  }
  return out;
}

namespace {

SampleSet compact(const Text& text, const std::vector<std::uint64_t>& counts) {
  std::vector<SampleSet::Entry> entries;
  const auto symbols = text.symbols();
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] != 0) entries.push_back({j + 1, symbols[j], counts[j]});
  }
  return SampleSet::from_entries(std::move(entries));
}

}  // namespace

SampleSet UniformOracle::draw(std::uint64_t s, std::uint64_t seed) const {
  if (s == 0) return {};
  const std::size_t n = text_.size();
  if (n == 0) throw InvalidInput("cannot sample from an empty text");
  Rng rng(seed);
  std::vector<std::uint64_t> counts(n, 0);
  for (std::uint64_t q = 0; q < s; ++q) ++counts[rng.below(n)];
  return compact(text_, counts);
}

DistributionOracle::DistributionOracle(const Text& text, const Distribution& p)
    : text_(text), cdf_(p.size()) {
  if (p.size() != text.size() || text.empty()) {
    throw InvalidInput("distribution and text lengths differ");
  }
  const auto w = p.weights();
  double running = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    running += w[j];
    cdf_[j] = running;
  }
  for (double& c : cdf_) c /= running;
  build_guide();
}

DistributionOracle::DistributionOracle(const Text& text,
                                       const RationalDistribution& p)
    : text_(text), cdf_(p.size()) {
  if (p.size() != text.size() || text.empty()) {
    throw InvalidInput("distribution and text lengths differ");
  }
  const auto a = p.numerators();
  const double den = static_cast<double>(p.denominator());
  std::uint64_t running = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    running += a[j];
    cdf_[j] = static_cast<double>(running) / den;
  }
  build_guide();
}

void DistributionOracle::build_guide() {
  cdf_.back() = 1.0;
  const std::size_t m = cdf_.size();
  guide_.resize(m);
  std::size_t j = 0;
  for (std::size_t t = 0; t < m; ++t) {
    const double threshold = static_cast<double>(t) / static_cast<double>(m);
    while (cdf_[j] <= threshold) ++j;
    guide_[t] = static_cast<std::uint32_t>(j);
  }
}

SampleSet DistributionOracle::draw(std::uint64_t s, std::uint64_t seed) const {
  if (s == 0) return {};
  Rng rng(seed);
  std::vector<std::uint64_t> counts(cdf_.size(), 0);
  constexpr std::size_t kBatch = 4096;
  std::array<double, kBatch> u;
  std::array<std::uint32_t, kBatch> idx;
  std::uint64_t remaining = s;
  while (remaining > 0) {
    const std::size_t batch =
        static_cast<std::size_t>(std::min<std::uint64_t>(remaining, kBatch));
    for (std::size_t q = 0; q < batch; ++q) u[q] = rng.uniform01();
    kernels::cdf_lookup(cdf_, guide_, std::span(u.data(), batch),
                        std::span(idx.data(), batch));
    for (std::size_t q = 0; q < batch; ++q) ++counts[idx[q]];
    remaining -= batch;
  }
  return compact(text_, counts);
}

double wt_p(const Distribution& p, Interval interval) {
  if (interval.first < 1 || interval.first > interval.last ||
      interval.last > p.size()) {
    throw RangeError("interval outside [1, n]");
  }
  const auto w = p.weights();
  double sum = 0.0;
  for (std::size_t j = interval.first; j <= interval.last; ++j) sum += w[j - 1];
  return sum;
}

Rational wt_p(const RationalDistribution& p, Interval interval) {
  if (interval.first < 1 || interval.first > interval.last ||
      interval.last > p.size()) {
    throw RangeError("interval outside [1, n]");
  }
  const auto a = p.numerators();
  BigInt sum = 0;
  for (std::size_t j = interval.first; j <= interval.last; ++j) sum += a[j - 1];
  return Rational(sum, BigInt(p.denominator()));
}

double wt_S(const SampleSet& sample, Interval interval) {
  if (sample.empty()) throw InvalidInput("empty sample");
  if (interval.first > interval.last) throw RangeError("empty interval");
  std::uint64_t hits = 0;
  for (const auto& e : sample.entries()) {
    if (e.index >= interval.first && e.index <= interval.last) hits += e.count;
  }
  return static_cast<double>(hits) / static_cast<double>(sample.size());
}

std::size_t count_prefix(const Text& text, const Word& word, std::size_t role,
                         std::size_t prefix) {
  const Symbol target = word.role(role);
  if (prefix > text.size()) throw RangeError("prefix longer than the text");
  return kernels::count_equal(text.symbols().first(prefix), target);
}

int indicator(const Text& text, const Word& word, std::size_t role,
              std::size_t position) {
  return text.at(position) == word.role(role) ? 1 : 0;
}

SampleSet census(const Text& text, const RationalDistribution& p) {
  if (p.size() != text.size()) {
    throw InvalidInput("distribution and text lengths differ");
  }
  std::vector<SampleSet::Entry> entries;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const std::uint64_t a = p.numerators()[j];
    if (a != 0) entries.push_back({j + 1, text.symbols()[j], a});
  }
  return SampleSet::from_entries(std::move(entries));
}

PositiveSupport drop_zero_weight(const Text& text,
                                 const RationalDistribution& p) {
  if (p.size() != text.size()) {
    throw InvalidInput("distribution and text lengths differ");
  }
  std::vector<Symbol> symbols;
  std::vector<std::uint64_t> numerators;
  std::vector<std::size_t> origin;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p.numerators()[j] == 0) continue;
    symbols.push_back(text.symbols()[j]);
    numerators.push_back(p.numerators()[j]);
    origin.push_back(j + 1);
  }
  return {Text(std::move(symbols)),
          RationalDistribution(std::move(numerators), p.denominator()),
          std::move(origin)};
}

}  // namespace subfree
