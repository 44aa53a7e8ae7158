#include "subfree/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "subfree/df_est.hpp"
#include "subfree/exact.hpp"
#include "subfree/rng.hpp"
#include "subfree/uniform_est.hpp"

namespace subfree::harness {

namespace {

template <typename E, std::size_t N>
E parse_name(const std::string& value, const char* what,
             const std::pair<const char*, E> (&table)[N]) {
  for (const auto& [key, kind] : table) {
    if (value == key) return kind;
  }
  throw ConfigError(std::string("unknown ") + what + " '" + value + "'");
}

template <typename E, std::size_t N>
std::string lookup_name(E kind, const std::pair<const char*, E> (&table)[N]) {
  for (const auto& [key, k] : table) {
    if (k == kind) return key;
  }
  return "?";
}

constexpr std::pair<const char*, EnsembleKind> kEnsembles[] = {
    {"periodic", EnsembleKind::kPeriodic},
    {"blockwise", EnsembleKind::kBlockwise},
    {"random-text", EnsembleKind::kRandomText},
    {"lowerbound-T1", EnsembleKind::kLowerboundT1},
    {"lowerbound-T2", EnsembleKind::kLowerboundT2},
};

constexpr std::pair<const char*, WeightFamily> kFamilies[] = {
    {"uniform", WeightFamily::kUniform},
    {"random-rational", WeightFamily::kRandomRational},
    {"point-mass", WeightFamily::kPointMass},
    {"alternate", WeightFamily::kAlternate},
};

constexpr std::pair<const char*, EstimatorKind> kEstimators[] = {
    {"uniform", EstimatorKind::kUniform},
    {"df", EstimatorKind::kDf},
    {"df-wc", EstimatorKind::kDfWc},
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

EnsembleKind parse_ensemble(const std::string& value) {
  return parse_name(value, "ensemble", kEnsembles);
}
WeightFamily parse_weights(const std::string& value) {
  return parse_name(value, "weight family", kFamilies);
}
EstimatorKind parse_estimator(const std::string& value) {
  return parse_name(value, "estimator", kEstimators);
}
std::string name(EnsembleKind kind) { return lookup_name(kind, kEnsembles); }
std::string name(WeightFamily family) { return lookup_name(family, kFamilies); }
std::string name(EstimatorKind kind) { return lookup_name(kind, kEstimators); }

Text periodic_text(std::size_t n, std::size_t k) {
  if (k == 0 || n % k != 0) throw ConfigError("k must divide n");
  std::vector<Symbol> t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = static_cast<Symbol>(j % k + 1);
  return Text(std::move(t));
}

Text blockwise_text(std::size_t n, std::size_t k) {
  if (k == 0 || n % k != 0) throw ConfigError("k must divide n");
  const std::size_t run = n / k;
  std::vector<Symbol> t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = static_cast<Symbol>(j / run + 1);
  return Text(std::move(t));
}

Text random_text(std::size_t n, std::size_t alphabet, std::uint64_t seed) {
  if (alphabet == 0) throw ConfigError("alphabet must be non-empty");
  Rng rng(seed);
  std::vector<Symbol> t(n);
  for (Symbol& s : t) s = static_cast<Symbol>(rng.below(alphabet) + 1);
  return Text(std::move(t));
}

Word cyclic_word(std::size_t k, std::size_t alphabet) {
  if (k == 0 || alphabet == 0) throw ConfigError("k and alphabet must be positive");
  std::vector<Symbol> w(k);
  for (std::size_t i = 0; i < k; ++i) w[i] = static_cast<Symbol>(i % alphabet + 1);
  return Word(std::move(w));
}

LowerboundPremise lowerbound_premise(std::size_t k_d, double delta,
                                     std::size_t n) {
  LowerboundPremise out;
  if (k_d == 0 || !(delta > 0.0)) return out;
  const double kd = static_cast<double>(k_d);
  out.delta_ok = delta <= 1.0 / (300.0 * kd);
  // The word is v_1 ... v_{k_d}, so k = k_d.
  out.n_ok = static_cast<double>(n) >
             std::max(8.0 * kd / delta, 200.0 / (kd * delta * delta));
  return out;
}

LowerboundInstance gen_lowerbound_rho(std::size_t k_d, double rho,
                                      std::size_t n, std::uint64_t seed) {
  if (k_d == 0 || n == 0 || n % k_d != 0) {
    throw ConfigError("k_d must be positive and divide n");
  }
  if (!(rho >= 0.0 && rho <= 1.0)) throw ConfigError("rho must lie in [0, 1]");
  const Symbol zero = static_cast<Symbol>(k_d + 1);
  Rng rng(seed);
  std::vector<Symbol> t(n);
  for (std::size_t block = 0; block < n / k_d; ++block) {
    t[block * k_d] = rng.bernoulli(rho) ? zero : 1;
    for (std::size_t i = 1; i < k_d; ++i) {
      t[block * k_d + i] = static_cast<Symbol>(i + 1);
    }
  }
  std::vector<Symbol> w(k_d);
  for (std::size_t i = 0; i < k_d; ++i) w[i] = static_cast<Symbol>(i + 1);
  return {Text(std::move(t)), Word(std::move(w)), rho};
}

LowerboundInstance gen_lowerbound(EnsembleKind kind, std::size_t k_d,
                                  double delta, std::size_t n,
                                  std::uint64_t seed) {
  if (!(delta >= 0.0)) throw ConfigError("delta must be non-negative");
  double rho = 0.5;
  if (kind == EnsembleKind::kLowerboundT2) {
    rho += 3.0 * static_cast<double>(k_d) * delta;
  } else if (kind != EnsembleKind::kLowerboundT1) {
    throw ConfigError("not a lower-bound ensemble");
  }
  return gen_lowerbound_rho(k_d, rho, n, seed);
}

RationalDistribution make_weights(WeightFamily family, std::size_t n,
                                  std::uint64_t seed) {
  if (n == 0) throw ConfigError("weights over an empty text");
  if (family == WeightFamily::kUniform) return RationalDistribution::uniform(n);
  Rng rng(seed);
  std::vector<std::uint64_t> a(n);
  std::uint64_t total = 0;
  switch (family) {
    case WeightFamily::kRandomRational:
      for (auto& x : a) total += x = 1 + rng.below(100);
      break;
    case WeightFamily::kPointMass: {
      for (auto& x : a) total += x = 1 + rng.below(10);
      const std::size_t heavy = rng.below(n);
      a[heavy] += 9 * total;
      total *= 10;
      break;
    }
    default:
      throw ConfigError("weight family must be resolved per trial");
  }
  return RationalDistribution(std::move(a), total);
}

Instance make_instance(const EnsembleConfig& config, double delta,
                       std::uint64_t trial, std::uint64_t seed) {
  Instance out;
  switch (config.kind) {
    case EnsembleKind::kPeriodic:
      out.text = periodic_text(config.n, config.k);
      out.word = cyclic_word(config.k, config.k);
      break;
    case EnsembleKind::kBlockwise:
      out.text = blockwise_text(config.n, config.k);
      out.word = cyclic_word(config.k, config.k);
      break;
    case EnsembleKind::kRandomText:
      out.text = random_text(config.n, config.alphabet, derive_seed(seed, 10));
      out.word = cyclic_word(config.k, config.alphabet);
      break;
    case EnsembleKind::kLowerboundT1:
    case EnsembleKind::kLowerboundT2: {
      auto lb = gen_lowerbound(config.kind, config.k, delta, config.n,
                               derive_seed(seed, 11));
      out.text = std::move(lb.text);
      out.word = std::move(lb.word);
      break;
    }
  }
  out.family = config.weights;
  if (out.family == WeightFamily::kAlternate) {
    out.family = trial % 2 == 0 ? WeightFamily::kRandomRational
                                : WeightFamily::kPointMass;
  }
  out.dist = make_weights(out.family, out.text.size(), derive_seed(seed, 12));
  return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t t = 0; t < count; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < count;) {
      try {
        body(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

Percentiles percentiles(std::vector<double> values) {
  Percentiles out;
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  auto rank = [&](double q) {
    const auto r = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(values.size())));
    return values[std::max<std::size_t>(r, 1) - 1];
  };
  out.p50 = rank(0.50);
  out.p90 = rank(0.90);
  out.p99 = rank(0.99);
  out.max = values.back();
  return out;
}

ConcentrationReport concentration_experiment(std::size_t k_d, double delta,
                                             std::size_t n, std::size_t trials,
                                             std::uint64_t seed,
                                             std::size_t threads) {
  ConcentrationReport report;
  report.k_d = k_d;
  report.delta = delta;
  report.n = n;
  report.seed = seed;
  report.premise = lowerbound_premise(k_d, delta, n);
  const double nn = static_cast<double>(n);
  const double base = nn / (2.0 * static_cast<double>(k_d));
  report.t1_threshold = base - (2.0 / 8.0) * delta * nn;
  report.t2_threshold = base - (23.0 / 8.0) * delta * nn;
  // Validate the configuration once, before spawning trials.
  gen_lowerbound(EnsembleKind::kLowerboundT2, k_d, delta, k_d, 0);
  if (n == 0 || n % k_d != 0) throw ConfigError("k_d must divide n");

  report.trials.resize(trials);
  parallel_for(
      trials,
      [&](std::size_t t) {
        const auto start = std::chrono::steady_clock::now();
        ConcentrationTrial& out = report.trials[t];
        out.trial = t;
        out.seed = seed ^ t;
        const auto t1 = gen_lowerbound(EnsembleKind::kLowerboundT1, k_d, delta,
                                       n, derive_seed(out.seed, 1));
        const auto t2 = gen_lowerbound(EnsembleKind::kLowerboundT2, k_d, delta,
                                       n, derive_seed(out.seed, 2));
        out.r1 = count_role_disjoint(t1.text, t1.word);
        out.r2 = count_role_disjoint(t2.text, t2.word);
        out.t1_ok = static_cast<double>(out.r1) >= report.t1_threshold;
        out.t2_ok = static_cast<double>(out.r2) <= report.t2_threshold;
        out.wall_ms = elapsed_ms(start);
      },
      threads);
  std::size_t ok1 = 0;
  std::size_t ok2 = 0;
  for (const auto& t : report.trials) {
    ok1 += t.t1_ok;
    ok2 += t.t2_ok;
  }
  if (trials > 0) {
    report.t1_frequency = static_cast<double>(ok1) / static_cast<double>(trials);
    report.t2_frequency = static_cast<double>(ok2) / static_cast<double>(trials);
  }
  return report;
}

namespace {

Rational truth_for(EstimatorKind estimator, const Instance& instance) {
  if (estimator == EstimatorKind::kUniform) {
    return uniform_distance(instance.text, instance.word);
  }
  try {
    return exact_weighted_distance(instance.text, instance.word, instance.dist);
  } catch (const SizeLimitError& e) {
    throw ConfigError(std::string("exact truth is infeasible (") + e.what() +
                      "); use a rational weight family with a small denominator");
  }
}

void run_sweep_trial(const SweepConfig& config, double delta, std::uint64_t t,
                     SweepTrial& out) {
  const auto start = std::chrono::steady_clock::now();
  out.delta = delta;
  out.trial = t;
  out.seed = config.seed ^ t;
  const Instance instance = make_instance(config.ensemble, delta, t, out.seed);
  const std::size_t n = instance.text.size();
  const Rational truth = truth_for(config.estimator, instance);
  out.truth_exact = to_string(truth);
  out.truth = to_double(truth);
  const std::uint64_t estimator_seed = derive_seed(out.seed, 3);
  if (config.estimator == EstimatorKind::kUniform) {
    out.family = "uniform";
    const UniformOracle oracle(instance.text);
    const auto est = estimate_uniform(oracle, instance.word, n, delta,
                                      estimator_seed, config.relax);
    out.estimate = est.delta_hat;
    out.raw = est.raw;
    out.samples = est.samples;
  } else {
    out.family = name(instance.family);
    const DistributionOracle oracle(instance.text, instance.dist);
    const bool special = config.estimator == EstimatorKind::kDfWc;
    const auto est =
        special ? estimate_df_special(oracle, instance.word, n, delta,
                                      estimator_seed, config.relax, config.events)
                : estimate_df(oracle, instance.word, n, delta, estimator_seed,
                              config.relax, config.events);
    out.estimate = est.delta_hat;
    out.raw = est.raw;
    out.s1 = est.params.s1;
    out.s2 = est.params.s2;
    out.samples = out.s1 + out.s2;
    out.U = est.U;
    if (est.trace) {
      const double z = est.params.z;
      out.e1 = check_E1(instance.dist.to_float(), est.trace->s1, z);
      out.e2 = check_E2(instance.text, instance.dist, est.trace->s2,
                        est.trace->b, instance.word, z);
    }
  }
  out.error = std::abs(out.estimate - out.truth);
  out.success = out.error <= delta;
  out.wall_ms = elapsed_ms(start);
}

}  // namespace

SweepReport error_sweep(const SweepConfig& config) {
  if (config.ensemble.n == 0) throw ConfigError("n must be positive");
  for (double d : config.deltas) {
    if (!(d > 0.0)) throw ConfigError("every delta must be positive");
  }
  if (!(config.relax > 0.0)) throw ConfigError("relaxation factor must be positive");
  if (config.estimator == EstimatorKind::kDfWc &&
      !in_wc(cyclic_word(config.ensemble.k, config.ensemble.alphabet))) {
    throw ConfigError("the W_c estimator needs a word without equal neighbours");
  }
  SweepReport report;
  report.config = config;
  const std::size_t per = config.trials;
  report.trials.resize(config.deltas.size() * per);
  parallel_for(
      report.trials.size(),
      [&](std::size_t q) {
        run_sweep_trial(config, config.deltas[q / per], q % per, report.trials[q]);
      },
      config.threads);
  for (std::size_t d = 0; d < config.deltas.size(); ++d) {
    SweepSummary summary;
    summary.delta = config.deltas[d];
    summary.trials = per;
    std::vector<double> errors;
    std::size_t ok = 0;
    for (std::size_t t = 0; t < per; ++t) {
      const SweepTrial& trial = report.trials[d * per + t];
      errors.push_back(trial.error);
      ok += trial.success;
    }
    if (per > 0) {
      summary.success_rate = static_cast<double>(ok) / static_cast<double>(per);
    }
    summary.error = percentiles(std::move(errors));
    report.summary.push_back(summary);
  }
  return report;
}

EventReport events_experiment(const Text& text, const Word& word,
                              const RationalDistribution& p, double delta,
                              std::size_t trials, std::uint64_t seed,
                              double relax, std::size_t threads) {
  if (p.size() != text.size()) {
    throw ConfigError("distribution length differs from the text length");
  }
  EventReport report;
  report.n = text.size();
  report.k = word.size();
  report.delta = delta;
  report.seed = seed;
  report.relax = relax;
  const ZParams params = sample_sizes_df(word.size(), delta, 0, text.size(), relax);
  report.z = params.z;
  report.s1 = params.s1;
  const Distribution pf = p.to_float();
  const ReferencePartition h = build_H(pf, params.z);
  const Rational eta =
      exact_eta(text.size(), word.size(), delta) / exact_rational(relax);
  const QuantizedRational quantized = quantize(p, eta);
  const double xi_bound = kCeta / params.z + 1.0 / (2.0 * params.z);
  const DistributionOracle oracle(text, p);

  report.trials.resize(trials);
  parallel_for(
      trials,
      [&](std::size_t t) {
        const auto start = std::chrono::steady_clock::now();
        EventTrial& out = report.trials[t];
        out.trial = t;
        out.seed = seed ^ t;
        const DfEstimate est = estimate_df(oracle, word, text.size(), delta,
                                           out.seed, relax, true);
        const DfTrace& trace = *est.trace;
        out.U = est.U;
        out.U_prime = est.U_prime;
        out.e1 = check_E1(h, trace.s1, params.z);
        out.e2 = check_E2(text, p, trace.s2, trace.b, word, params.z);
        for (std::size_t u = 1; u <= trace.b.size(); ++u) {
          if (!trace.b.heavy[u - 1]) {
            out.max_light_weight =
                std::max(out.max_light_weight, wt_p(pf, trace.b.interval(u)));
          }
        }
        out.light_ok = out.max_light_weight < 6.0 / params.z;
        const XiMatrix tilde =
            exact_xi_tilde(text, word, quantized.alpha, trace.prime);
        out.xi_error = max_abs_diff(*trace.xi_hat, tilde);
        out.xi_ok = out.xi_error <= xi_bound;
        out.wall_ms = elapsed_ms(start);
      },
      threads);
  std::size_t e1 = 0;
  std::size_t e2 = 0;
  for (const auto& t : report.trials) {
    e1 += t.e1;
    e2 += t.e2;
    if (t.e1 && !t.light_ok) report.light_given_e1 = false;
    if (t.e2 && !t.xi_ok) report.xi_given_e2 = false;
  }
  if (trials > 0) {
    report.e1_frequency = static_cast<double>(e1) / static_cast<double>(trials);
    report.e2_frequency = static_cast<double>(e2) / static_cast<double>(trials);
  }
  return report;
}

}  // namespace subfree::harness
