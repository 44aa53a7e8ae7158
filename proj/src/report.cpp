#include "subfree/report.hpp"

#include <json.hpp>

namespace subfree::harness {

using nlohmann::json;

namespace {

void append(std::string& out, const json& object) {
  out += object.dump();
  out += '\n';
}

json summary_header(const char* experiment) {
  return {{"type", "summary"},
          {"schema_version", kSchemaVersion},
          {"experiment", experiment}};
}

json to_json(const Percentiles& p) {
  return {{"p50", p.p50}, {"p90", p.p90}, {"p99", p.p99}, {"max", p.max}};
}

}  // namespace

std::string render(const ConcentrationReport& report, bool timing) {
  std::string out;
  for (const auto& t : report.trials) {
    json line = {{"type", "trial"},    {"trial", t.trial}, {"seed", t.seed},
                 {"R_T1", t.r1},       {"R_T2", t.r2},     {"T1_ok", t.t1_ok},
                 {"T2_ok", t.t2_ok}};
    if (timing) line["wall_ms"] = t.wall_ms;
    append(out, line);
  }
  json summary = summary_header("lowerbound");
  summary["config"] = {{"kd", report.k_d},
                       {"delta", report.delta},
                       {"n", report.n},
                       {"trials", report.trials.size()},
                       {"seed", report.seed}};
  summary["premise"] = {{"delta_le_1_over_300kd", report.premise.delta_ok},
                        {"n_large_enough", report.premise.n_ok}};
  summary["T1_threshold"] = report.t1_threshold;
  summary["T2_threshold"] = report.t2_threshold;
  summary["T1_frequency"] = report.t1_frequency;
  summary["T2_frequency"] = report.t2_frequency;
  append(out, summary);
  return out;
}

std::string render(const SweepReport& report, bool timing) {
  std::string out;
  const SweepConfig& c = report.config;
  for (const auto& t : report.trials) {
    json line = {{"type", "trial"},
                 {"delta", t.delta},
                 {"trial", t.trial},
                 {"seed", t.seed},
                 {"weights", t.family},
                 {"truth", t.truth},
                 {"truth_exact", t.truth_exact},
                 {"estimate", t.estimate},
                 {"raw", t.raw},
                 {"error", t.error},
                 {"success", t.success},
                 {"samples", t.samples}};
    if (c.estimator != EstimatorKind::kUniform) {
      line["s1"] = t.s1;
      line["s2"] = t.s2;
      line["U"] = t.U;
    }
    if (t.e1) line["E1"] = *t.e1;
    if (t.e2) line["E2"] = *t.e2;
    if (timing) line["wall_ms"] = t.wall_ms;
    append(out, line);
  }
  json summary = summary_header("sweep");
  summary["config"] = {{"estimator", name(c.estimator)},
                       {"ensemble", name(c.ensemble.kind)},
                       {"n", c.ensemble.n},
                       {"k", c.ensemble.k},
                       {"alphabet", c.ensemble.alphabet},
                       {"weights", name(c.ensemble.weights)},
                       {"deltas", c.deltas},
                       {"trials", c.trials},
                       {"seed", c.seed},
                       {"relaxed_constants", c.relax}};
  if (c.relax != 1.0) summary["off_spec_constants"] = true;
  json per_delta = json::array();
  for (const auto& s : report.summary) {
    per_delta.push_back({{"delta", s.delta},
                         {"trials", s.trials},
                         {"success_rate", s.success_rate},
                         {"error", to_json(s.error)}});
  }
  summary["per_delta"] = per_delta;
  append(out, summary);
  return out;
}

std::string render(const EventReport& report, bool timing) {
  std::string out;
  for (const auto& t : report.trials) {
    json line = {{"type", "trial"},
                 {"trial", t.trial},
                 {"seed", t.seed},
                 {"U", t.U},
                 {"U_prime", t.U_prime},
                 {"E1", t.e1},
                 {"E2", t.e2},
                 {"max_light_weight", t.max_light_weight},
                 {"light_ok", t.light_ok},
                 {"xi_error", t.xi_error},
                 {"xi_ok", t.xi_ok}};
    if (timing) line["wall_ms"] = t.wall_ms;
    append(out, line);
  }
  json summary = summary_header("diagnose-events");
  summary["config"] = {{"n", report.n},
                       {"k", report.k},
                       {"delta", report.delta},
                       {"trials", report.trials.size()},
                       {"seed", report.seed},
                       {"relaxed_constants", report.relax}};
  if (report.relax != 1.0) summary["off_spec_constants"] = true;
  summary["z"] = report.z;
  summary["s1"] = report.s1;
  summary["E1_frequency"] = report.e1_frequency;
  summary["E2_frequency"] = report.e2_frequency;
  summary["light_bound_given_E1"] = report.light_given_e1;
  summary["xi_bound_given_E2"] = report.xi_given_e2;
  append(out, summary);
  return out;
}

}  // namespace subfree::harness
