// Splits the outputs of an execution (mutated cells and return values) by
// their runtime owner.
#pragma once

#include <stdexcept>

#include "cloak/codegen/policy.hpp"
#include "cloak/interp/interpreter.hpp"

namespace cloak::interp {

class PolicyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Concrete addresses of owner names: "me" plus every address-valued
/// parameter, return and scalar state variable.
using RuntimeOwners = std::map<std::string, Address>;

RuntimeOwners collectRuntimeOwners(const codegen::FunctionPolicy& fp, const std::vector<codegen::DataPolicy>& statePolicy,
                                   const std::map<std::string, Value>& params, const std::map<std::string, Value>& returns,
                                   const StateStore& state, const Address& caller);

struct ResolvedOwner {
    enum class Kind { Public, Tee, Party };
    Kind kind = Kind::Public;
    Address addr;  // Party only
    bool operator==(const ResolvedOwner&) const = default;
};

/// Owner of one state cell under the state policy. Throws PolicyError when a
/// private owner cannot be resolved to a nonzero address.
ResolvedOwner cellOwner(const std::vector<codegen::DataPolicy>& statePolicy, const CellId& cell, const RuntimeOwners& owners);

ResolvedOwner returnOwner(const codegen::DataPolicy& ret, const RuntimeOwners& owners);

struct Slice {
    std::vector<std::pair<CellId, Value>> state;
    std::vector<std::pair<std::string, Value>> returns;
    bool empty() const { return state.empty() && returns.empty(); }
    bool operator==(const Slice&) const = default;
};

struct Partition {
    Slice publicSlice;
    Slice teeSlice;  // stays inside the enclave
    std::map<Address, Slice> parties;
};

Partition partitionOutputs(const codegen::FunctionPolicy& policy, const std::vector<codegen::DataPolicy>& statePolicy, const StateStore& newState,
                           const std::set<CellId>& mutated, const std::map<std::string, Value>& returns, const RuntimeOwners& owners);

}  // namespace cloak::interp
