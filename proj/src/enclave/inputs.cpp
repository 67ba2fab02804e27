#include "cloak/enclave/inputs.hpp"

#include <set>

#include "cloak/chain/transaction.hpp"

namespace cloak::enclave {

using frontend::DataType;
using DK = DataType::Kind;
using interp::Value;

Bytes PartyInput::paramBytes() const { return toBytes(chain::canonicalDump(params)); }

Bytes PartyInput::encode() const {
    json st = json::array();
    for (const auto& s : states)
        st.push_back({{"var", s.cell.var}, {"key", toHex(cellKeyBytes(s.cell))}, {"value", toHex(s.value.encode())}, {"r", s.r.hex()}});
    return toBytes(chain::canonicalDump({{"params", params}, {"r_x", rX.hex()}, {"states", st}}));
}

PartyInput PartyInput::decode(ByteView raw) {
    json j = json::parse(raw.begin(), raw.end());
    PartyInput in;
    in.params = j.at("params");
    if (!in.params.is_object()) throw std::invalid_argument("input params must be an object");
    in.rX = crypto::Randomness::fromHexString(j.at("r_x").get<std::string>());
    for (const auto& s : j.at("states")) {
        chain::CommitEntry e{s.at("var").get<std::string>(), fromHex(s.at("key").get<std::string>()), "", {}};
        in.states.push_back({cellFromEntry(e), Value::decode(fromHex(s.at("value").get<std::string>())),
                             crypto::Randomness::fromHexString(s.at("r").get<std::string>())});
    }
    return in;
}

crypto::Ciphertext inputCommitment(const crypto::PublicKey& pk, const PartyInput& in) { return crypto::commit(pk, in.paramBytes(), in.rX); }

Digest commitmentDigest(const crypto::Ciphertext& c) { return crypto::hash(c.serialize()); }

Bytes Ack::signedBytes() const {
    json j{{"id_p", idp.hex()}, {"party", party.str()}, {"cx", toHex(cx.serialize())}, {"supplies", supplies}};
    return toBytes(chain::canonicalDump(j));
}

json Ack::toJson() const {
    return {{"id_p", idp.hex()}, {"party", party.str()}, {"pk", pk.hex()}, {"cx", toHex(cx.serialize())}, {"supplies", supplies}, {"sig", sig.hex()}};
}

Ack makeAck(const crypto::KeyPair& keys, const Digest& idp, const crypto::Ciphertext& cx, std::vector<std::string> supplies) {
    Ack a{idp, keys.addr, keys.pk, cx, std::move(supplies), {}};
    a.sig = crypto::sign(keys, a.signedBytes());
    return a;
}

bool verifyAck(const Ack& a) {
    if (a.pk.bytes.size() != crypto::kPublicKeySize || crypto::addressOf(a.pk) != a.party) return false;
    return crypto::verifySig(a.pk, a.signedBytes(), a.sig);
}

namespace {

/// Data-array parameter paired with the address array `arr`, if any.
const codegen::DataPolicy* pairedData(const codegen::FunctionPolicy& fp, const codegen::DataPolicy& arr) {
    for (const auto& d : fp.params)
        if (d.type.data.kind == DK::Array && d.type.data.value->owner.kind == frontend::OwnerAtom::Kind::Named &&
            d.type.data.value->owner.name == arr.type.data.tag)
            return &d;
    return nullptr;
}

/// Address array that `data` is paired with, if any.
const codegen::DataPolicy* pairedAddresses(const codegen::FunctionPolicy& fp, const codegen::DataPolicy& data) {
    for (const auto& a : fp.params)
        if (a.type.data.kind == DK::NamedAddressArray && pairedData(fp, a) == &data) return &a;
    return nullptr;
}

}  // namespace

std::vector<std::string> suppliableParams(const codegen::FunctionPolicy& fp) {
    std::vector<std::string> out;
    for (const auto& p : fp.params)
        if (!(p.type.data.kind == DK::NamedAddressArray && pairedData(fp, p))) out.push_back(p.id);
    return out;
}

std::map<std::string, Value> mergeParams(const codegen::FunctionPolicy& fp, const std::vector<std::pair<Address, json>>& inputs) {
    std::map<std::string, Value> out;
    for (const auto& p : fp.params) {
        const DataType& t = p.type.data;
        if (t.kind == DK::NamedAddressArray) {
            const auto* data = pairedData(fp, p);
            const std::string& key = data ? data->id : p.id;
            interp::ArrayV addrs;
            for (const auto& [a, x] : inputs)
                if (x.contains(key)) addrs.items.emplace_back(a);
            out[p.id] = Value(std::move(addrs));
            continue;
        }
        if (pairedAddresses(fp, p)) {
            interp::ArrayV elems;
            auto elemType = t.elementType().data;
            for (const auto& [a, x] : inputs)
                if (x.contains(p.id)) {
                    try {
                        elems.items.push_back(interp::valueFromJson(x.at(p.id), elemType));
                    } catch (const std::exception& e) {
                        throw MergeError("party " + a.str() + " supplied a bad element of '" + p.id + "': " + e.what());
                    }
                }
            out[p.id] = Value(std::move(elems));
            continue;
        }
        std::optional<Value> agreed;
        for (const auto& [a, x] : inputs) {
            if (!x.contains(p.id)) continue;
            Value v;
            try {
                v = interp::valueFromJson(x.at(p.id), t);
            } catch (const std::exception& e) {
                throw MergeError("party " + a.str() + " supplied a bad value for '" + p.id + "': " + e.what());
            }
            if (agreed && !(*agreed == v)) throw MergeError("parties disagree on '" + p.id + "'");
            agreed = std::move(v);
        }
        if (!agreed) throw MergeError("no party supplied '" + p.id + "'");
        out[p.id] = std::move(*agreed);
    }
    return out;
}

std::string ownerString(const interp::ResolvedOwner& o) {
    switch (o.kind) {
        case interp::ResolvedOwner::Kind::Public: return "all";
        case interp::ResolvedOwner::Kind::Tee: return "tee";
        case interp::ResolvedOwner::Kind::Party: break;
    }
    return o.addr.str();
}

Bytes cellKeyBytes(const interp::CellId& c) { return c.key ? c.key->encode() : Bytes{}; }

interp::CellId cellFromEntry(const chain::CommitEntry& e) {
    if (e.key.empty()) return interp::CellId::scalar(e.var);
    return interp::CellId::entry(e.var, Value::decode(e.key));
}

}  // namespace cloak::enclave
