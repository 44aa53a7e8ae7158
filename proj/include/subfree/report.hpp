#pragma once

// JSON-lines rendering of experiment reports: one {"type":"trial"} object per
// trial in trial order, then one {"type":"summary"} object. Keys are sorted, so
// equal reports render to equal bytes. Wall times appear only when `timing`
// is set. Schema: docs/results_schema.md.

#include <string>

#include "subfree/harness.hpp"

namespace subfree::harness {

inline constexpr int kSchemaVersion = 1;

std::string render(const ConcentrationReport& report, bool timing = false);
std::string render(const SweepReport& report, bool timing = false);
std::string render(const EventReport& report, bool timing = false);

}  // namespace subfree::harness
