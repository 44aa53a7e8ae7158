#pragma once

// Sample-based estimation of Delta(T, w) under the uniform distribution:
// a gamma-spaced prefix grid, sampled prefix counts on it, and the
// M recursion over the resulting k x l matrix.

#include <cstdint>
#include <vector>

#include "subfree/core.hpp"

namespace subfree {

// Grid points j_1 < ... < j_l = n (j_0 = 0 implicit).
struct PrefixGrid {
  std::vector<std::size_t> points;
  double gamma = 0.0;

  std::size_t size() const { return points.size(); }
  std::size_t length() const { return points.empty() ? 0 : points.back(); }
  std::size_t max_gap() const;
  // unit[r-1] is true when block r = (j_{r-1}, j_r] is a single position.
  std::vector<char> unit_blocks() const;
};

// j_r = min(ceil(r gamma n), n), deduplicated.
PrefixGrid build_J(std::size_t n, double gamma);

// Grid from explicit points; they must increase strictly and end at n.
PrefixGrid make_grid(std::vector<std::size_t> points, std::size_t n);

struct UniformSampleSize {
  double gamma = 0.0;   // delta / (3k)
  std::uint64_t ell = 0;  // ceil(1 / gamma)
  std::uint64_t s = 0;    // ceil(ln(6 k ell) / (2 gamma^2))
};

// `relax` multiplies the sample size; 1 gives the proven constants.
UniformSampleSize sample_size_uniform(std::size_t k, double delta,
                                      double relax = 1.0);

// k x l matrix of prefix counts. Row i, column r holds the count for role i
// on the prefix [j_r].
class CountMatrix {
 public:
  CountMatrix(std::size_t k, std::size_t ell, bool exact = false);

  std::size_t roles() const { return k_; }
  std::size_t columns() const { return ell_; }
  bool exact() const { return exact_; }

  double& at(std::size_t i, std::size_t r) { return cells_[(i - 1) * ell_ + r - 1]; }
  double at(std::size_t i, std::size_t r) const {
    return cells_[(i - 1) * ell_ + r - 1];
  }
  std::span<double> row(std::size_t i) { return {cells_.data() + (i - 1) * ell_, ell_}; }
  std::span<const double> row(std::size_t i) const {
    return {cells_.data() + (i - 1) * ell_, ell_};
  }

  // Columns whose block is a single text position; empty means none.
  const std::vector<char>& unit_blocks() const { return unit_; }
  void set_unit_blocks(std::vector<char> unit);

  CountMatrix scaled(double factor) const;

 private:
  std::size_t k_;
  std::size_t ell_;
  bool exact_;
  std::vector<double> cells_;
  std::vector<char> unit_;
};

// Sample hits on the prefixes [j_r]: role_hits[(i-1) * l + (r-1)] counts
// sampled pairs (j, t_j) with j <= j_r and t_j = w_i; total[r-1] counts all
// sampled pairs with j <= j_r. One pass over the sample.
struct PrefixHits {
  std::size_t roles = 0;
  std::size_t columns = 0;
  std::vector<std::uint64_t> role_hits;
  std::vector<std::uint64_t> total;
};

PrefixHits prefix_hits(const SampleSet& sample, const Word& word,
                       std::span<const std::size_t> points);

// N_i^{j_r}(T, w) by direct counting.
CountMatrix exact_counts(const Text& text, const Word& word,
                         const PrefixGrid& grid);

// (n / s) * #{sampled (j, t_j) : j <= j_r, t_j = w_i}. Throws InvalidInput on
// an empty sample.
CountMatrix estimate_counts(const SampleSet& sample, const Word& word,
                            const PrefixGrid& grid, std::size_t n);
CountMatrix estimate_counts(const SamplingOracle& oracle, const Word& word,
                            const PrefixGrid& grid, std::uint64_t s,
                            std::uint64_t seed);

// The full table M_i^r. Row 1 copies the counts; for i >= 2,
//   M_i^r = N_i^r - max_{r' <= r} (N_i^{r'} - M_{i-1}^{r'}),
// except that a single-position block r' pairs with M_{i-1}^{r'-1}: an
// occurrence of w_i there cannot follow a partial copy ending at the same
// position. On the full grid J = [n] this is exactly the R recursion.
CountMatrix m_table(const CountMatrix& counts);

// M_k^l. Throws InvalidInput on an empty matrix.
double compute_M(const CountMatrix& counts);

struct UniformEstimate {
  double delta_hat = 0.0;  // clamped to [0, 1]
  double raw = 0.0;        // M / n before clamping
  std::uint64_t samples = 0;
  double gamma = 0.0;
  std::uint64_t ell = 0;
  std::size_t grid_size = 0;
};

// For delta >= 1 every output is within delta of the truth; this returns 0
// without sampling.
UniformEstimate estimate_uniform(const SamplingOracle& oracle, const Word& word,
                                 std::size_t n, double delta,
                                 std::uint64_t seed, double relax = 1.0);

}  // namespace subfree
