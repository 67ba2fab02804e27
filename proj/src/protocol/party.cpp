#include "cloak/protocol/party.hpp"

namespace cloak::protocol {

using chain::CommitEntry;
using interp::Value;

namespace {

/// Adds one to the first numeric parameter; without one, changes the
/// input randomness instead.
void alter(enclave::PartyInput& in) {
    for (auto& [k, v] : in.params.items()) {
        if (v.is_number_unsigned()) {
            v = v.get<std::uint64_t>() + 1;
            return;
        }
        if (v.is_string() && !v.get_ref<const std::string&>().empty() &&
            v.get_ref<const std::string&>().find_first_not_of("0123456789") == std::string::npos) {
            v = (interp::U256(v.get<std::string>()) + 1).str();
            return;
        }
    }
    in.rX.bytes[0] ^= 1;
}

}  // namespace

PartyClient::PartyClient(PartyConfig cfg, const crypto::Seed& rngSeed, const std::map<std::string, Address>& names)
    : cfg_(std::move(cfg)),
      keys_(crypto::keygen(crypto::seedFromLabel("party " + cfg_.seed))),
      rng_(rngSeed, "party " + cfg_.name),
      params_(resolveRefs(cfg_.params, names)) {}

chain::Transaction PartyClient::tx(chain::TxKind kind, json payload) { return chain::makeTx(keys_, kind, std::move(payload), nonce_++); }

void PartyClient::refreshOpenings(const chain::VerifierState& v) {
    openings_.clear();
    for (const auto& e : v.oldStates()) {
        if (e.owner != keys_.addr.str()) continue;
        auto o = crypto::open(keys_, crypto::Ciphertext::deserialize(e.data));
        openings_.push_back({enclave::cellFromEntry(e), Value::decode(o.plaintext), o.randomness});
    }
}

void PartyClient::prepare(const Digest& idp) {
    idp_ = idp;
    committed_ = {};
    committed_.params = params_;
    committed_.rX = rng_.next32();
    committed_.states = openings_;
    sent_ = committed_;
    if (cfg_.behavior == Behavior::MismatchedInputs) alter(sent_);
}

enclave::Ack PartyClient::ack(const crypto::PublicKey& pkE) const {
    std::vector<std::string> supplies;
    for (const auto& [k, v] : params_.items()) supplies.push_back(k);
    return enclave::makeAck(keys_, idp_, enclave::inputCommitment(keys_.pk, committed_), supplies);
}

enclave::Envelope PartyClient::inputEnvelope(const crypto::PublicKey& pkE) {
    return enclave::seal(keys_, pkE, idp_, "inputs", sent_.encode(), rng_.next32());
}

json PartyClient::decryptOutputs(const json& txComPayload) const { return readableOutputs(keys_, txComPayload); }

json readableOutputs(const crypto::KeyPair& keys, const json& txComPayload) {
    json out = json::object();
    for (const auto& e : chain::entriesFromJson(txComPayload.at("c_r"))) {
        if (e.owner == "all") out[e.var] = Value::decode(e.data).str();
        else if (e.owner == keys.addr.str()) out[e.var] = Value::decode(crypto::open(keys, crypto::Ciphertext::deserialize(e.data)).plaintext).str();
        else out[e.var] = "encrypted";
    }
    return out;
}

}  // namespace cloak::protocol
