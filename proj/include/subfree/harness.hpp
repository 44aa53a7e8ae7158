#pragma once

// Instance generators, the lower-bound concentration experiment, estimator
// error sweeps and the event diagnostics, all reproducible from a master seed.
// Trial t runs with seed (master XOR t).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subfree/core.hpp"

namespace subfree::harness {

enum class EnsembleKind { kPeriodic, kBlockwise, kRandomText, kLowerboundT1, kLowerboundT2 };
enum class WeightFamily { kUniform, kRandomRational, kPointMass, kAlternate };
enum class EstimatorKind { kUniform, kDf, kDfWc };

EnsembleKind parse_ensemble(const std::string& name);
WeightFamily parse_weights(const std::string& name);
EstimatorKind parse_estimator(const std::string& name);
std::string name(EnsembleKind kind);
std::string name(WeightFamily family);
std::string name(EstimatorKind kind);

// (1 2 ... k)^{n/k} and 1^{n/k} 2^{n/k} ... k^{n/k}; k must divide n.
Text periodic_text(std::size_t n, std::size_t k);
Text blockwise_text(std::size_t n, std::size_t k);
// Uniform over symbols 1..alphabet.
Text random_text(std::size_t n, std::size_t alphabet, std::uint64_t seed);
// w_i = ((i - 1) mod alphabet) + 1.
Word cyclic_word(std::size_t k, std::size_t alphabet);

struct LowerboundPremise {
  bool delta_ok = false;  // delta <= 1 / (300 k_d)
  bool n_ok = false;      // n > max{8 k / delta, 200 / (k_d delta^2)}
};

LowerboundPremise lowerbound_premise(std::size_t k_d, double delta,
                                     std::size_t n);

struct LowerboundInstance {
  Text text;
  Word word;  // v_1 ... v_{k_d} = 1 ... k_d
  double rho = 0.0;
};

// n / k_d blocks [lambda, v_2, ..., v_{k_d}]; lambda is the symbol "0"
// (id k_d + 1) with probability rho and v_1 otherwise.
LowerboundInstance gen_lowerbound_rho(std::size_t k_d, double rho,
                                      std::size_t n, std::uint64_t seed);
// rho = 1/2 for T1 and 1/2 + 3 k_d delta for T2. Throws ConfigError when k_d
// does not divide n or rho leaves [0, 1]; the premise is reported, not
// enforced.
LowerboundInstance gen_lowerbound(EnsembleKind kind, std::size_t k_d,
                                  double delta, std::size_t n,
                                  std::uint64_t seed);

// Positive integer weights over a common denominator, <= 10^6 for n <= 10^4.
// kRandomRational: a_j uniform in [1, 100]. kPointMass: a_j uniform in [1, 10]
// plus 9 times their sum at one random index (mass 0.9 there).
RationalDistribution make_weights(WeightFamily family, std::size_t n,
                                  std::uint64_t seed);

struct EnsembleConfig {
  EnsembleKind kind = EnsembleKind::kRandomText;
  std::size_t n = 0;
  std::size_t k = 2;
  std::size_t alphabet = 3;
  WeightFamily weights = WeightFamily::kUniform;
};

struct Instance {
  Text text;
  Word word{{1}};
  RationalDistribution dist{{1}, 1};
  WeightFamily family = WeightFamily::kUniform;
};

// Per-trial instance. Lowerbound kinds use k as k_d and `delta` for rho.
// kAlternate uses kRandomRational on even trials and kPointMass on odd ones.
Instance make_instance(const EnsembleConfig& config, double delta,
                       std::uint64_t trial, std::uint64_t seed);

// Runs body(t) for t in [0, count) on up to `threads` workers (0 = all cores).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = 0);

struct Percentiles {
  double p50 = 0.0;
  double p90 = 0.0;
  double p99 = 0.0;
  double max = 0.0;
};

// Nearest-rank percentiles; all zero for an empty input.
Percentiles percentiles(std::vector<double> values);

// ---- lower bound -----------------------------------------------------------

struct ConcentrationTrial {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t r1 = 0;
  std::size_t r2 = 0;
  bool t1_ok = false;  // R(T1) >= n/(2 k_d) - (2/8) delta n
  bool t2_ok = false;  // R(T2) <= n/(2 k_d) - (23/8) delta n
  double wall_ms = 0.0;
};

struct ConcentrationReport {
  std::size_t k_d = 0;
  double delta = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  LowerboundPremise premise;
  double t1_threshold = 0.0;
  double t2_threshold = 0.0;
  std::vector<ConcentrationTrial> trials;
  double t1_frequency = 0.0;
  double t2_frequency = 0.0;
};

ConcentrationReport concentration_experiment(std::size_t k_d, double delta,
                                             std::size_t n, std::size_t trials,
                                             std::uint64_t seed,
                                             std::size_t threads = 0);

// ---- error sweep -----------------------------------------------------------

struct SweepConfig {
  EstimatorKind estimator = EstimatorKind::kUniform;
  EnsembleConfig ensemble;
  std::vector<double> deltas;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double relax = 1.0;
  bool events = false;  // evaluate E1 / E2 on df trials
  std::size_t threads = 0;
};

struct SweepTrial {
  double delta = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::string family;
  std::string truth_exact;
  double truth = 0.0;
  double estimate = 0.0;
  double raw = 0.0;
  double error = 0.0;
  bool success = false;
  std::uint64_t samples = 0;
  std::uint64_t s1 = 0;
  std::uint64_t s2 = 0;
  std::size_t U = 0;
  std::optional<bool> e1;
  std::optional<bool> e2;
  double wall_ms = 0.0;
};

struct SweepSummary {
  double delta = 0.0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  Percentiles error;
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepTrial> trials;     // ordered by (delta index, trial)
  std::vector<SweepSummary> summary;  // one per delta
};

// Throws ConfigError when the exact truth is out of reach (df truth needs a
// reduced denominator of at most 5 * 10^6).
SweepReport error_sweep(const SweepConfig& config);

// ---- event diagnostics -----------------------------------------------------

struct EventTrial {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t U = 0;
  std::size_t U_prime = 0;
  bool e1 = false;
  bool e2 = false;
  double max_light_weight = 0.0;  // largest wt_p over light intervals
  bool light_ok = false;          // max_light_weight < 6 / z
  double xi_error = 0.0;          // max |xi-hat - xi~|
  bool xi_ok = false;             // xi_error <= c_eta / z + 1 / (2z)
  double wall_ms = 0.0;
};

struct EventReport {
  std::size_t n = 0;
  std::size_t k = 0;
  double delta = 0.0;
  double z = 0.0;
  std::uint64_t s1 = 0;
  std::uint64_t seed = 0;
  double relax = 1.0;
  std::vector<EventTrial> trials;
  double e1_frequency = 0.0;
  double e2_frequency = 0.0;
  // Implications checked on the trials where the event holds.
  bool light_given_e1 = true;
  bool xi_given_e2 = true;
};

EventReport events_experiment(const Text& text, const Word& word,
                              const RationalDistribution& p, double delta,
                              std::size_t trials, std::uint64_t seed,
                              double relax = 1.0, std::size_t threads = 0);

}  // namespace subfree::harness
