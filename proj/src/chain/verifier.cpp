#include "cloak/chain/verifier.hpp"

namespace cloak::chain {

Digest CommitEntry::digest() const { return crypto::hash(canonicalDump(toJson())); }

json CommitEntry::toJson() const { return {{"var", var}, {"key", toHex(key)}, {"owner", owner}, {"data", toHex(data)}}; }

CommitEntry CommitEntry::fromJson(const json& j) {
    return {j.at("var").get<std::string>(), fromHex(j.at("key").get<std::string>()), j.at("owner").get<std::string>(),
            fromHex(j.at("data").get<std::string>())};
}

json entriesToJson(const std::vector<CommitEntry>& es) {
    json a = json::array();
    for (const auto& e : es) a.push_back(e.toJson());
    return a;
}

std::vector<CommitEntry> entriesFromJson(const json& j) {
    std::vector<CommitEntry> out;
    for (const auto& e : j) out.push_back(CommitEntry::fromJson(e));
    return out;
}

Digest entriesDigest(const std::vector<CommitEntry>& es) {
    std::vector<Digest> ds;
    for (const auto& e : es) ds.push_back(e.digest());
    return crypto::hashList(ds);
}

json Proof::toJson() const {
    return {{"h_f", hF.hex()}, {"h_p", hP.hex()}, {"h_cx", hCx.hex()}, {"h_cs", hCs.hex()}, {"h_cs_new", hCsNew.hex()}, {"h_cr", hCr.hex()}};
}

Proof Proof::fromJson(const json& j) {
    auto d = [&](const char* k) { return Digest::fromHexString(j.at(k).get<std::string>()); };
    return {d("h_f"), d("h_p"), d("h_cx"), d("h_cs"), d("h_cs_new"), d("h_cr")};
}

std::size_t VerifierState::layoutIndex(const std::string& var) const {
    for (std::size_t i = 0; i < desc_.stateLayout.size(); ++i)
        if (desc_.stateLayout[i].var == var) return i;
    return desc_.stateLayout.size();
}

std::vector<CommitEntry> VerifierState::oldStates() const {
    std::vector<CommitEntry> out;
    for (const auto& [k, e] : cells_) out.push_back(e);
    return out;
}

bool VerifierState::verify(const Proof& proof, const std::vector<Digest>& hCx, const std::vector<CommitEntry>& cNew,
                           const std::vector<CommitEntry>& cR) const {
    Proof expect{desc_.hF, desc_.hP, crypto::hashList(hCx), stateDigest(), entriesDigest(cNew), entriesDigest(cR)};
    return proof == expect;
}

bool VerifierState::setNewStates(const Address& origin, const std::vector<CommitEntry>& cNew) {
    if (origin != desc_.adrE) return false;
    for (const auto& e : cNew)
        if (layoutIndex(e.var) == desc_.stateLayout.size()) return false;
    for (const auto& e : cNew) cells_[{layoutIndex(e.var), e.key}] = e;
    return true;
}

bool VerifierState::initState(const Address& origin, const std::vector<CommitEntry>& cells) {
    if (initialized_) return false;
    if (!setNewStates(origin, cells)) return false;
    initialized_ = true;
    return true;
}

}  // namespace cloak::chain
