#pragma once

#include "cloak/protocol/runner.hpp"

namespace cloak::protocol {

/// Reports for each config, in order. Scenarios run in parallel threads.
std::vector<RunReport> runBatch(const std::vector<ScenarioConfig>& cfgs);
/// Reference implementation: one scenario after another.
std::vector<RunReport> runBatchSerial(const std::vector<ScenarioConfig>& cfgs);

}  // namespace cloak::protocol
