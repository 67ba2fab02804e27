#include "cloak/interp/partition.hpp"

namespace cloak::interp {

using namespace frontend;
using codegen::DataPolicy;
using DK = DataType::Kind;

RuntimeOwners collectRuntimeOwners(const codegen::FunctionPolicy& fp, const std::vector<DataPolicy>& statePolicy,
                                   const std::map<std::string, Value>& params, const std::map<std::string, Value>& returns,
                                   const StateStore& state, const Address& caller) {
    RuntimeOwners out;
    for (const auto& s : statePolicy)
        if (s.type.data.kind == DK::Address) out[s.id] = state.read(CellId::scalar(s.id), s.type.data).asAddress();
    auto fromFrame = [&](const std::vector<DataPolicy>& decls, const std::map<std::string, Value>& values) {
        for (const auto& d : decls) {
            if (d.type.data.kind != DK::Address) continue;
            auto it = values.find(d.id);
            if (it != values.end() && it->second.isAddress()) out[d.id] = it->second.asAddress();
        }
    };
    fromFrame(fp.params, params);
    fromFrame(fp.returns, returns);
    out["me"] = caller;
    return out;
}

namespace {

ResolvedOwner resolve(const OwnerAtom& atom, const RuntimeOwners& owners, const std::optional<std::pair<std::string, Value>>& keyTag,
                      const std::string& what) {
    switch (atom.kind) {
        case OwnerAtom::Kind::All: return {};
        case OwnerAtom::Kind::Tee: return {ResolvedOwner::Kind::Tee, {}};
        case OwnerAtom::Kind::Me:
        case OwnerAtom::Kind::Named: break;
    }
    std::string name = atom.kind == OwnerAtom::Kind::Me ? "me" : atom.name;
    Address addr;
    if (keyTag && keyTag->first == name) {
        if (!keyTag->second.isAddress()) throw PolicyError(what + ": key of a named mapping is not an address");
        addr = keyTag->second.asAddress();
    } else {
        auto it = owners.find(name);
        if (it == owners.end()) throw PolicyError(what + ": owner '" + name + "' has no runtime address");
        addr = it->second;
    }
    if (addr.isZero()) throw PolicyError(what + ": owner '" + name + "' resolves to the zero address");
    return {ResolvedOwner::Kind::Party, addr};
}

}  // namespace

ResolvedOwner cellOwner(const std::vector<DataPolicy>& statePolicy, const CellId& cell, const RuntimeOwners& owners) {
    const DataPolicy* dp = nullptr;
    for (const auto& s : statePolicy)
        if (s.id == cell.var) dp = &s;
    if (!dp) throw PolicyError("cell " + cell.str() + " is not a state variable");
    const DataType& d = dp->type.data;
    switch (d.kind) {
        case DK::NamedMapping:
            if (!cell.key) throw PolicyError("cell " + cell.str() + " lacks a key");
            return resolve(d.value->owner, owners, std::make_pair(d.tag, *cell.key), "cell " + cell.str());
        case DK::Mapping: return resolve(d.value->owner, owners, std::nullopt, "cell " + cell.str());
        case DK::Array:
            if (d.value->owner.kind == OwnerAtom::Kind::Named && !owners.count(d.value->owner.name))
                throw PolicyError("cell " + cell.str() + ": elements have per-element owners");
            return resolve(d.value->owner, owners, std::nullopt, "cell " + cell.str());
        case DK::NamedAddressArray: return {};
        default: return resolve(dp->type.owner, owners, std::nullopt, "cell " + cell.str());
    }
}

ResolvedOwner returnOwner(const DataPolicy& ret, const RuntimeOwners& owners) {
    const DataType& d = ret.type.data;
    if (d.kind == DK::Array) {
        if (d.value->owner.kind == OwnerAtom::Kind::Named && !owners.count(d.value->owner.name))
            throw PolicyError("return '" + ret.id + "': elements have per-element owners");
        return resolve(d.value->owner, owners, std::nullopt, "return '" + ret.id + "'");
    }
    if (d.kind == DK::NamedAddressArray) return {};
    return resolve(ret.type.owner, owners, std::nullopt, "return '" + ret.id + "'");
}

Partition partitionOutputs(const codegen::FunctionPolicy& policy, const std::vector<DataPolicy>& statePolicy, const StateStore& newState,
                           const std::set<CellId>& mutated, const std::map<std::string, Value>& returns, const RuntimeOwners& owners) {
    Partition p;
    auto sliceFor = [&](const ResolvedOwner& o) -> Slice& {
        switch (o.kind) {
            case ResolvedOwner::Kind::Public: return p.publicSlice;
            case ResolvedOwner::Kind::Tee: return p.teeSlice;
            case ResolvedOwner::Kind::Party: break;
        }
        return p.parties[o.addr];
    };
    for (const auto& cell : mutated) {
        const auto* v = newState.find(cell);
        if (!v) throw PolicyError("mutated cell " + cell.str() + " missing from the new state");
        sliceFor(cellOwner(statePolicy, cell, owners)).state.emplace_back(cell, *v);
    }
    for (std::size_t i = 0; i < policy.returns.size(); ++i) {
        const auto& r = policy.returns[i];
        std::string name = r.id.empty() ? "$" + std::to_string(i) : r.id;
        auto it = returns.find(name);
        if (it == returns.end()) throw PolicyError("return '" + name + "' missing from the execution result");
        DataPolicy named{name, r.type};
        sliceFor(returnOwner(named, owners)).returns.emplace_back(name, it->second);
    }
    return p;
}

}  // namespace cloak::interp
