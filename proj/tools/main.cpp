#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "subfree/df_est.hpp"
#include "subfree/exact.hpp"
#include "subfree/harness.hpp"
#include "subfree/io.hpp"
#include "subfree/report.hpp"
#include "subfree/uniform_est.hpp"

namespace {

using nlohmann::json;
using namespace subfree;

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  double relax = 1.0;
  bool timing = false;
  std::size_t threads = 0;
};

struct FileInputs {
  std::string text;
  std::string word;
  std::string dist;
};

struct Loaded {
  Text text;
  Word word;
  std::optional<RationalDistribution> dist;
};

Loaded load(const FileInputs& files) {
  Alphabet alphabet;
  Text text = load_text(files.text, alphabet);
  Word word = load_word(files.word, alphabet);
  std::optional<RationalDistribution> dist;
  if (!files.dist.empty()) dist = load_distribution(files.dist, text.size());
  return {std::move(text), std::move(word), std::move(dist)};
}

void emit(const Globals& g, const std::string& payload) {
  if (g.out.empty()) {
    std::cout << payload;
    std::cout.flush();
    return;
  }
  std::ofstream file(g.out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file " + g.out);
  file << payload;
  file.close();
  if (!file) throw IoError("failed writing " + g.out);
}

std::string line(const json& object) { return object.dump() + "\n"; }

void tag_relax(json& object, double relax) {
  if (relax != 1.0) {
    object["relaxed_constants"] = relax;
    object["off_spec_constants"] = true;
  }
}

std::string run_exact(const FileInputs& files) {
  const Loaded in = load(files);
  json out = {{"n", in.text.size()}, {"k", in.word.size()}};
  Rational delta;
  if (in.dist) {
    delta = exact_weighted_distance(in.text, in.word, *in.dist);
  } else {
    out["R"] = count_role_disjoint(in.text, in.word);
    delta = uniform_distance(in.text, in.word);
  }
  out["delta"] = to_string(delta);
  out["delta_float"] = to_double(delta);
  return line(out);
}

std::string run_uniform(const Globals& g, const FileInputs& files, double delta) {
  const Loaded in = load(files);
  const UniformOracle oracle(in.text);
  const auto est =
      estimate_uniform(oracle, in.word, in.text.size(), delta, g.seed, g.relax);
  json out = {{"n", in.text.size()},      {"k", in.word.size()},
              {"delta", delta},           {"seed", g.seed},
              {"delta_hat", est.delta_hat}, {"raw", est.raw},
              {"samples", est.samples},   {"gamma", est.gamma},
              {"ell", est.ell},           {"grid_size", est.grid_size}};
  tag_relax(out, g.relax);
  return line(out);
}

std::string run_df(const Globals& g, const FileInputs& files, double delta,
                   bool special) {
  const Loaded in = load(files);
  const RationalDistribution p =
      in.dist ? *in.dist : RationalDistribution::uniform(in.text.size());
  const DistributionOracle oracle(in.text, p);
  const std::size_t n = in.text.size();
  const auto est =
      special ? estimate_df_special(oracle, in.word, n, delta, g.seed, g.relax)
              : estimate_df(oracle, in.word, n, delta, g.seed, g.relax);
  json out = {{"n", n},
              {"k", in.word.size()},
              {"delta", delta},
              {"seed", g.seed},
              {"delta_hat", est.delta_hat},
              {"raw", est.raw},
              {"z", est.params.z},
              {"s1", est.params.s1},
              {"s2", est.params.s2},
              {"samples", est.params.s1 + est.params.s2},
              {"U", est.U},
              {"U_prime", est.U_prime}};
  tag_relax(out, g.relax);
  return line(out);
}

struct EnsembleFlags {
  std::string kind = "random-text";
  std::size_t n = 1000;
  std::size_t k = 2;
  std::size_t alphabet = 3;
  std::string weights = "uniform";

  harness::EnsembleConfig config() const {
    harness::EnsembleConfig c;
    c.kind = harness::parse_ensemble(kind);
    c.n = n;
    c.k = k;
    c.alphabet = alphabet;
    c.weights = harness::parse_weights(weights);
    return c;
  }
};

void add_ensemble_flags(CLI::App* cmd, EnsembleFlags& e) {
  cmd->add_option("--ensemble", e.kind,
                  "periodic | blockwise | random-text | lowerbound-T1 | lowerbound-T2")
      ->capture_default_str();
  cmd->add_option("--n", e.n, "Text length")->capture_default_str();
  cmd->add_option("--k", e.k, "Word length (k_d for lower-bound ensembles)")
      ->capture_default_str();
  cmd->add_option("--alphabet", e.alphabet, "Alphabet size for random-text")
      ->capture_default_str();
  cmd->add_option("--weights", e.weights,
                  "uniform | random-rational | point-mass | alternate")
      ->capture_default_str();
}

int run(int argc, char** argv) {
  CLI::App app{"Distance to subsequence-freeness: exact values and sample-based estimates"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--out", g.out, "Write output to FILE instead of stdout");
  app.add_option("--relaxed-constants", g.relax,
                 "Scale the sample-size constants (no guarantees when != 1)")
      ->capture_default_str();
  app.add_flag("--timing", g.timing, "Include wall times in experiment output");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();

  FileInputs files;
  double delta = 0.1;
  auto add_files = [&](CLI::App* cmd, bool dist_required) {
    cmd->add_option("--text", files.text, "Text file")->required();
    cmd->add_option("--word", files.word, "Word file")->required();
    auto* d = cmd->add_option("--dist", files.dist, "Distribution file");
    if (dist_required) d->required();
  };

  auto* exact = app.add_subcommand("exact", "Exact distance via role-disjoint copies");
  add_files(exact, false);

  auto* uniform = app.add_subcommand("estimate-uniform", "Estimate under the uniform distribution");
  add_files(uniform, false);
  uniform->add_option("--delta", delta, "Additive error")->required();

  auto* df = app.add_subcommand("estimate-df", "Distribution-free estimate");
  add_files(df, false);
  df->add_option("--delta", delta, "Additive error")->required();

  auto* dfwc = app.add_subcommand("estimate-df-wc",
                                  "Distribution-free estimate for words without equal neighbours");
  add_files(dfwc, false);
  dfwc->add_option("--delta", delta, "Additive error")->required();

  auto* sweep = app.add_subcommand("sweep", "Estimator error sweep against exact truth");
  EnsembleFlags sweep_ensemble;
  std::string estimator = "uniform";
  std::vector<double> deltas{0.1};
  std::size_t trials = 10;
  bool events = false;
  sweep->add_option("--estimator", estimator, "uniform | df | df-wc")->capture_default_str();
  add_ensemble_flags(sweep, sweep_ensemble);
  sweep->add_option("--deltas", deltas, "Comma-separated deltas")->delimiter(',');
  sweep->add_option("--trials", trials, "Trials per delta")->capture_default_str();
  sweep->add_flag("--events", events, "Evaluate E1 / E2 on df trials");

  auto* lower = app.add_subcommand("lowerbound", "Concentration of R on the two lower-bound ensembles");
  std::size_t kd = 2;
  std::size_t lb_n = 0;
  lower->add_option("--kd", kd, "Distinct symbols in the word")->capture_default_str();
  lower->add_option("--delta", delta, "Distance parameter")->required();
  lower->add_option("--n", lb_n, "Text length")->required();
  lower->add_option("--trials", trials, "Trials")->capture_default_str();

  auto* diag = app.add_subcommand("diagnose-events", "Frequencies of the good-sample events");
  EnsembleFlags diag_ensemble;
  diag_ensemble.weights = "random-rational";
  diag->add_option("--text", files.text, "Text file (instead of an ensemble)");
  diag->add_option("--word", files.word, "Word file");
  diag->add_option("--dist", files.dist, "Distribution file");
  add_ensemble_flags(diag, diag_ensemble);
  diag->add_option("--delta", delta, "Additive error")->required();
  diag->add_option("--trials", trials, "Trials")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfig;
  }

  try {
    std::string payload;
    if (*exact) {
      payload = run_exact(files);
    } else if (*uniform) {
      payload = run_uniform(g, files, delta);
    } else if (*df) {
      payload = run_df(g, files, delta, false);
    } else if (*dfwc) {
      payload = run_df(g, files, delta, true);
    } else if (*sweep) {
      harness::SweepConfig c;
      c.estimator = harness::parse_estimator(estimator);
      c.ensemble = sweep_ensemble.config();
      c.deltas = deltas;
      c.trials = trials;
      c.seed = g.seed;
      c.relax = g.relax;
      c.events = events;
      c.threads = g.threads;
      payload = harness::render(harness::error_sweep(c), g.timing);
    } else if (*lower) {
      payload = harness::render(
          harness::concentration_experiment(kd, delta, lb_n, trials, g.seed, g.threads),
          g.timing);
    } else if (*diag) {
      Text text;
      Word word{{1}};
      std::optional<RationalDistribution> p;
      if (!files.text.empty() || !files.word.empty()) {
        if (files.text.empty() || files.word.empty()) {
          throw ConfigError("--text and --word go together");
        }
        Loaded in = load(files);
        text = std::move(in.text);
        word = std::move(in.word);
        p = in.dist ? std::move(in.dist)
                    : RationalDistribution::uniform(text.size());
      } else {
        harness::Instance instance =
            harness::make_instance(diag_ensemble.config(), delta, 0, g.seed);
        text = std::move(instance.text);
        word = std::move(instance.word);
        p = std::move(instance.dist);
      }
      payload = harness::render(
          harness::events_experiment(text, word, *p, delta, trials, g.seed,
                                     g.relax, g.threads),
          g.timing);
    }
    emit(g, payload);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RangeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SizeLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
