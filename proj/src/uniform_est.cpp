#include "subfree/uniform_est.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "subfree/kernels.hpp"

namespace subfree {

std::size_t PrefixGrid::max_gap() const {
  std::size_t gap = 0;
  std::size_t previous = 0;
  for (std::size_t j : points) {
    gap = std::max(gap, j - previous);
    previous = j;
  }
  return gap;
}

std::vector<char> PrefixGrid::unit_blocks() const {
  std::vector<char> unit(points.size());
  std::size_t previous = 0;
  for (std::size_t r = 0; r < points.size(); ++r) {
    unit[r] = points[r] - previous == 1;
    previous = points[r];
  }
  return unit;
}

PrefixGrid build_J(std::size_t n, double gamma) {
  if (n == 0) throw InvalidInput("grid over an empty text");
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive");
  PrefixGrid grid;
  grid.gamma = gamma;
  if (gamma >= 1.0) {
    grid.points = {n};
    return grid;
  }
  const double step = gamma * static_cast<double>(n);
  for (std::uint64_t r = 1; grid.points.empty() || grid.points.back() < n;
       ++r) {
    const std::uint64_t j = std::min<std::uint64_t>(
        ceil_tolerant(static_cast<double>(r) * step), n);
    if (j > 0 && (grid.points.empty() || j > grid.points.back())) {
      grid.points.push_back(static_cast<std::size_t>(j));
    }
  }
  return grid;
}

PrefixGrid make_grid(std::vector<std::size_t> points, std::size_t n) {
  if (points.empty() || points.back() != n) {
    throw InvalidInput("grid must end at n");
  }
  for (std::size_t r = 0; r < points.size(); ++r) {
    if (points[r] == 0 || (r > 0 && points[r] <= points[r - 1])) {
      throw InvalidInput("grid points must increase strictly from 1");
    }
  }
  PrefixGrid grid;
  grid.points = std::move(points);
  return grid;
}

UniformSampleSize sample_size_uniform(std::size_t k, double delta,
                                      double relax) {
  if (k == 0) throw InvalidInput("word length must be positive");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInput("delta must lie in (0, 1)");
  }
  if (!(relax > 0.0)) throw InvalidInput("relaxation factor must be positive");
  UniformSampleSize out;
  out.gamma = delta / (3.0 * static_cast<double>(k));
  out.ell = ceil_tolerant(1.0 / out.gamma);
  const double s = std::log(6.0 * static_cast<double>(k) *
                            static_cast<double>(out.ell)) /
                   (2.0 * out.gamma * out.gamma);
  out.s = std::max<std::uint64_t>(1, ceil_tolerant(relax * s));
  return out;
}

CountMatrix::CountMatrix(std::size_t k, std::size_t ell, bool exact)
    : k_(k), ell_(ell), exact_(exact), cells_(k * ell, 0.0) {}

void CountMatrix::set_unit_blocks(std::vector<char> unit) {
  if (!unit.empty() && unit.size() != ell_) {
    throw InvalidInput("unit-block flags do not match the column count");
  }
  unit_ = std::move(unit);
}

CountMatrix CountMatrix::scaled(double factor) const {
  CountMatrix out = *this;
  for (double& c : out.cells_) c *= factor;
  return out;
}

namespace {

// Dense ids for the distinct symbols of w, and each role's id.
struct RoleIndex {
  std::unordered_map<Symbol, std::size_t> id;
  std::vector<std::size_t> role_id;
};

RoleIndex index_roles(const Word& word) {
  RoleIndex out;
  for (Symbol s : word.symbols()) {
    auto [it, inserted] = out.id.try_emplace(s, out.id.size());
    out.role_id.push_back(it->second);
  }
  return out;
}

}  // namespace

CountMatrix exact_counts(const Text& text, const Word& word,
                         const PrefixGrid& grid) {
  if (grid.length() != text.size()) {
    throw InvalidInput("grid does not end at the text length");
  }
  const RoleIndex roles = index_roles(word);
  const std::size_t ell = grid.size();
  std::vector<Symbol> distinct(roles.id.size());
  for (const auto& [symbol, d] : roles.id) distinct[d] = symbol;
  std::vector<double> prefix(distinct.size() * ell);
  const auto t = text.symbols();
  for (std::size_t d = 0; d < distinct.size(); ++d) {
    std::size_t running = 0;
    std::size_t previous = 0;
    for (std::size_t r = 0; r < ell; ++r) {
      running += kernels::count_equal(
          t.subspan(previous, grid.points[r] - previous), distinct[d]);
      prefix[d * ell + r] = static_cast<double>(running);
      previous = grid.points[r];
    }
  }
  CountMatrix out(word.size(), ell, true);
  for (std::size_t i = 1; i <= word.size(); ++i) {
    const std::size_t d = roles.role_id[i - 1];
    std::copy_n(prefix.begin() + d * ell, ell, out.row(i).begin());
  }
  out.set_unit_blocks(grid.unit_blocks());
  return out;
}

PrefixHits prefix_hits(const SampleSet& sample, const Word& word,
                       std::span<const std::size_t> points) {
  const RoleIndex roles = index_roles(word);
  const std::size_t ell = points.size();
  if (ell == 0) throw InvalidInput("empty grid");
  std::vector<std::uint64_t> bucket(roles.id.size() * ell, 0);
  PrefixHits out;
  out.roles = word.size();
  out.columns = ell;
  out.total.assign(ell, 0);
  std::size_t r = 0;
  for (const auto& e : sample.entries()) {
    if (e.index > points.back()) throw RangeError("sampled index beyond the grid");
    while (points[r] < e.index) ++r;
    out.total[r] += e.count;
    if (auto it = roles.id.find(e.symbol); it != roles.id.end()) {
      bucket[it->second * ell + r] += e.count;
    }
  }
  for (std::size_t c = 1; c < ell; ++c) out.total[c] += out.total[c - 1];
  for (std::size_t d = 0; d < roles.id.size(); ++d) {
    for (std::size_t c = 1; c < ell; ++c) {
      bucket[d * ell + c] += bucket[d * ell + c - 1];
    }
  }
  out.role_hits.resize(word.size() * ell);
  for (std::size_t i = 0; i < word.size(); ++i) {
    std::copy_n(bucket.begin() + roles.role_id[i] * ell, ell,
                out.role_hits.begin() + i * ell);
  }
  return out;
}

CountMatrix estimate_counts(const SampleSet& sample, const Word& word,
                            const PrefixGrid& grid, std::size_t n) {
  if (sample.empty()) throw InvalidInput("empty sample");
  if (grid.length() != n) {
    throw InvalidInput("grid does not end at the domain size");
  }
  const PrefixHits hits = prefix_hits(sample, word, grid.points);
  const double scale =
      static_cast<double>(n) / static_cast<double>(sample.size());
  CountMatrix out(word.size(), grid.size(), false);
  for (std::size_t i = 1; i <= word.size(); ++i) {
    auto row = out.row(i);
    for (std::size_t c = 0; c < grid.size(); ++c) {
      row[c] = static_cast<double>(hits.role_hits[(i - 1) * grid.size() + c]) *
               scale;
    }
  }
  out.set_unit_blocks(grid.unit_blocks());
  return out;
}

CountMatrix estimate_counts(const SamplingOracle& oracle, const Word& word,
                            const PrefixGrid& grid, std::uint64_t s,
                            std::uint64_t seed) {
  if (s == 0) throw InvalidInput("sample size must be positive");
  return estimate_counts(oracle.draw(s, seed), word, grid,
                         oracle.domain_size());
}

CountMatrix m_table(const CountMatrix& counts) {
  const std::size_t k = counts.roles();
  const std::size_t ell = counts.columns();
  if (k == 0 || ell == 0) throw InvalidInput("empty count matrix");
  CountMatrix m(k, ell, counts.exact());
  m.set_unit_blocks(counts.unit_blocks());
  const auto& unit = counts.unit_blocks();
  std::copy_n(counts.row(1).begin(), ell, m.row(1).begin());
  std::vector<double> partner(ell);
  std::vector<double> running(ell);
  for (std::size_t i = 2; i <= k; ++i) {
    const auto previous = m.row(i - 1);
    for (std::size_t r = 0; r < ell; ++r) {
      const bool single = !unit.empty() && unit[r];
      partner[r] = single ? (r == 0 ? 0.0 : previous[r - 1]) : previous[r];
    }
    const auto current = counts.row(i);
    kernels::diff_prefix_max(current, partner, running);
    auto out = m.row(i);
    for (std::size_t r = 0; r < ell; ++r) out[r] = current[r] - running[r];
  }
  return m;
}

double compute_M(const CountMatrix& counts) {
  const CountMatrix m = m_table(counts);
  return m.at(m.roles(), m.columns());
}

UniformEstimate estimate_uniform(const SamplingOracle& oracle, const Word& word,
                                 std::size_t n, double delta,
                                 std::uint64_t seed, double relax) {
  if (oracle.domain_size() != n) {
    throw InvalidInput("oracle domain size differs from n");
  }
  if (n == 0) throw InvalidInput("distance is undefined for an empty text");
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  UniformEstimate out;
  if (delta >= 1.0) return out;
  const UniformSampleSize size = sample_size_uniform(word.size(), delta, relax);
  const PrefixGrid grid = build_J(n, size.gamma);
  const CountMatrix counts =
      estimate_counts(oracle, word, grid, size.s, seed);
  out.raw = compute_M(counts) / static_cast<double>(n);
  out.delta_hat = std::clamp(out.raw, 0.0, 1.0);
  out.samples = size.s;
  out.gamma = size.gamma;
  out.ell = size.ell;
  out.grid_size = grid.size();
  return out;
}

}  // namespace subfree
