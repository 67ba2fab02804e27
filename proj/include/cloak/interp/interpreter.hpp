// Big-step evaluator for private-contract functions: s', r <- f(x, s).
#pragma once

#include <map>
#include <optional>

#include "cloak/interp/state.hpp"

namespace cloak::interp {

enum class AbortReason { RequireFailed, Overflow, StepBudgetExceeded, TypeMismatch, UnavailableState };
std::string_view abortReasonName(AbortReason r);

struct ExecAbort {
    AbortReason reason = AbortReason::TypeMismatch;
    std::string message;
    frontend::SourceLoc loc;
};

struct ExecOptions {
    std::uint64_t stepBudget = 1'000'000;
    AccessLog* log = nullptr;
    /// Cells whose plaintext the executor does not hold; reading one aborts
    /// with UnavailableState.
    const std::set<CellId>* unavailable = nullptr;
};

struct ExecResult {
    StateStore newState;                    // equals the input state when aborted
    std::map<std::string, Value> returns;   // by declared return name ("$i" when unnamed)
    std::vector<std::string> returnOrder;   // declaration order of `returns`
    std::set<CellId> written;               // state cells assigned during the call
    std::optional<ExecAbort> abort;
    std::uint64_t steps = 0;

    bool ok() const { return !abort; }
};

/// Name under which the i-th return value is reported.
std::string returnName(const frontend::FunctionDecl& f, std::size_t i);

/// Executes `f` of contract `F`. `params` must provide every declared
/// parameter with a value of the declared data type; otherwise the call aborts
/// with TypeMismatch before running.
ExecResult execFunction(const frontend::ContractAst& F, const frontend::FunctionDecl& f, const StateStore& state,
                        const std::map<std::string, Value>& params, const Address& caller, const ExecOptions& opts = {});

}  // namespace cloak::interp
