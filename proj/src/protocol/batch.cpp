#include "cloak/protocol/batch.hpp"

#include <exception>

namespace cloak::protocol {

std::vector<RunReport> runBatch(const std::vector<ScenarioConfig>& cfgs) {
    std::vector<RunReport> out(cfgs.size());
    std::vector<std::exception_ptr> errors(cfgs.size());
    const auto n = static_cast<std::ptrdiff_t>(cfgs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = runScenario(cfgs[static_cast<std::size_t>(i)]).report;
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<RunReport> runBatchSerial(const std::vector<ScenarioConfig>& cfgs) {
    std::vector<RunReport> out;
    out.reserve(cfgs.size());
    for (const auto& c : cfgs) out.push_back(runScenario(c).report);
    return out;
}

}  // namespace cloak::protocol
