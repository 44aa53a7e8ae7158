#pragma once

// Ground-truth computations: role-disjoint copies, the prefix recursion,
// exhaustive minimum-modification search, splitting, quantization and the
// sentinel-interleaving reduction that puts any word into W_c.

#include <cstdint>
#include <optional>
#include <vector>

#include "subfree/core.hpp"

namespace subfree {

// copies[m][i-1] is the position (1-based) playing role i in copy m.
struct CopySet {
  std::vector<std::vector<std::size_t>> copies;

  std::size_t size() const { return copies.size(); }
};

CopySet greedy_copies(const Text& text, const Word& word);

// R(T, w) without materializing the copies.
std::size_t count_role_disjoint(const Text& text, const Word& word);

// True iff every copy is strictly increasing, matches w, and no position is
// used twice in the same role.
bool is_role_disjoint(const CopySet& copies, const Text& text, const Word& word);

// R_i^j for i in [1, k] and j in [0, n].
class RTable {
 public:
  RTable(std::size_t k, std::size_t n) : k_(k), n_(n), cells_(k * (n + 1), 0) {}

  std::size_t roles() const { return k_; }
  std::size_t length() const { return n_; }
  std::int64_t at(std::size_t i, std::size_t j) const {
    return cells_[(i - 1) * (n_ + 1) + j];
  }
  std::span<std::int64_t> row(std::size_t i) {
    return {cells_.data() + (i - 1) * (n_ + 1), n_ + 1};
  }
  std::span<const std::int64_t> row(std::size_t i) const {
    return {cells_.data() + (i - 1) * (n_ + 1), n_ + 1};
  }

 private:
  std::size_t k_;
  std::size_t n_;
  std::vector<std::int64_t> cells_;
};

RTable r_table(const Text& text, const Word& word);

// R(T, w) / n. Throws InvalidInput on an empty text.
Rational uniform_distance(const Text& text, const Word& word);

inline constexpr std::size_t kBruteForceMaxLength = 22;

// Minimum p-weight (|S|/n when p is absent) of a position set whose
// modification leaves T w-free, by subset enumeration. Throws SizeLimitError
// for n > 22.
Rational bruteforce_distance(const Text& text, const Word& word,
                             const std::optional<RationalDistribution>& p = {});

// True iff no two consecutive symbols of w are equal.
bool in_wc(const Word& word);

struct Splitting {
  std::vector<std::uint64_t> multiplicity;  // alpha_j
  Text expanded;                            // T~
  std::vector<std::size_t> origin;          // phi, 1-based

  std::size_t size() const { return expanded.size(); }
};

inline constexpr std::uint64_t kMaxMaterialized = 10'000'000;

// T~ = t_1^{alpha_1} ... t_n^{alpha_n} with alpha_j = p_j / beta; the split
// distribution is uniform over 1/beta positions. Throws InvalidInput when some
// p_j / beta is not a positive integer, SizeLimitError beyond 10^7 positions.
Splitting build_splitting(const Text& text, const RationalDistribution& p,
                          const Rational& beta);

struct QuantizedDistribution {
  double eta = 0.0;
  std::vector<double> rounded;  // p-double-dot: ceil(p_j / eta) * eta
  double zeta = 0.0;            // 1 / sum of rounded
  std::vector<double> weights;  // p-dot = zeta * rounded
  double l1 = 0.0;              // L1(p, p-dot)
};

QuantizedDistribution quantize(const Distribution& p, double eta);

// Exact variant: p-dot_j = alpha_j / A with alpha_j = ceil(p_j / eta).
struct QuantizedRational {
  Rational eta;
  std::vector<std::uint64_t> alpha;
  Rational zeta;  // 1 / (eta * A)
  RationalDistribution weights;
  Rational l1;
};

QuantizedRational quantize(const RationalDistribution& p, const Rational& eta);

struct WcReduction {
  Text text;   // t_1 0 t_2 0 ... t_n 0
  Word word;   // w_1 0 w_2 0 ... w_k 0
  std::optional<RationalDistribution> dist;  // q_j / 2 on both copies
};

Text interleave_sentinel(const Text& text);
Word interleave_sentinel(const Word& word);
WcReduction reduce_to_wc(const Text& text, const Word& word);
WcReduction reduce_to_wc(const Text& text, const Word& word,
                         const RationalDistribution& q);

// Delta(T, w, p) computed as 2 R(T~', w') / |T~'| through the reduction and a
// splitting at beta = 1/(2D), D the reduced common denominator.
Rational exact_weighted_distance(const Text& text, const Word& word,
                                 const RationalDistribution& p);

}  // namespace subfree
