// Privacy policy: per-variable ownership plus, per function, the owners of
// its parameters, the state it reads and mutates, and its return values.
#pragma once

#include <string>
#include <vector>

#include "cloak/codegen/serialize.hpp"
#include "cloak/typecheck/checker.hpp"

namespace cloak::codegen {

using typecheck::FunctionKind;

struct DataPolicy {
    std::string id;
    frontend::AnnotatedType type;
    bool operator==(const DataPolicy&) const = default;
};

struct RevealPolicy {
    std::string expr;
    std::string target;
    bool operator==(const RevealPolicy&) const = default;
};

struct FunctionPolicy {
    std::string id;
    FunctionKind kind = FunctionKind::PUT;
    std::vector<DataPolicy> params;   // P_X
    std::vector<DataPolicy> reads;    // P_R
    std::vector<DataPolicy> mutates;  // P_M
    std::vector<DataPolicy> returns;  // P_O
    std::vector<RevealPolicy> reveals;

    bool readsVar(std::string_view var) const;
    bool mutatesVar(std::string_view var) const;
    bool operator==(const FunctionPolicy&) const = default;
};

struct ContractPolicy {
    std::string contract;
    std::vector<DataPolicy> states;  // P_S
    std::vector<FunctionPolicy> functions;

    const FunctionPolicy* function(std::string_view id) const;
    const DataPolicy* state(std::string_view id) const;
    bool operator==(const ContractPolicy&) const = default;
};

/// State variables (by name, declaration order) read and written by `f`.
/// Locals and parameters shadow state variables of the same name.
struct AccessSets {
    std::vector<std::string> reads;
    std::vector<std::string> mutates;
};
AccessSets analyzeAccess(const frontend::ContractAst& c, const frontend::FunctionDecl& f);

ContractPolicy generatePolicy(const typecheck::CheckedContract& c);

json policyToJson(const ContractPolicy& p);
ContractPolicy policyFromJson(const json& j);
/// The exact bytes written to policy.json and hashed into H_P.
std::string policyBytes(const ContractPolicy& p);

}  // namespace cloak::codegen
