#include "cloak/chain/service.hpp"

#include <numeric>
#include <set>

namespace cloak::chain {

std::string_view revertReasonName(RevertReason r) {
    switch (r) {
        case RevertReason::DuplicateProposal: return "DuplicateProposal";
        case RevertReason::InsufficientCoins: return "InsufficientCoins";
        case RevertReason::NotEnclave: return "NotEnclave";
        case RevertReason::BadStatus: return "BadStatus";
        case RevertReason::NotParty: return "NotParty";
        case RevertReason::TooEarly: return "TooEarly";
        case RevertReason::ProofRejected: return "ProofRejected";
        case RevertReason::UnknownProposal: return "UnknownProposal";
        case RevertReason::UnknownVerifier: return "UnknownVerifier";
        case RevertReason::NotDeployed: return "NotDeployed";
        case RevertReason::BadPayload: return "BadPayload";
    }
    return "?";
}

std::string_view proposalStatusName(ProposalStatus s) {
    switch (s) {
        case ProposalStatus::Settle: return "SETTLE";
        case ProposalStatus::Abort: return "ABORT";
        case ProposalStatus::Complete: return "COMPLETE";
        case ProposalStatus::Timeout: return "TIMEOUT";
    }
    return "?";
}

namespace {

json digestsToJson(const std::vector<Digest>& ds) {
    json a = json::array();
    for (const auto& d : ds) a.push_back(d.hex());
    return a;
}

std::vector<Digest> digestsFromJson(const json& j) {
    std::vector<Digest> out;
    for (const auto& d : j) out.push_back(Digest::fromHexString(d.get<std::string>()));
    return out;
}

json addressesToJson(const std::vector<Address>& as) {
    json a = json::array();
    for (const auto& x : as) a.push_back(x.str());
    return a;
}

std::vector<Address> addressesFromJson(const json& j) {
    std::vector<Address> out;
    for (const auto& a : j) out.push_back(Address::parse(a.get<std::string>()));
    return out;
}

Digest idpOf(const json& payload) { return Digest::fromHexString(payload.at("id_p").get<std::string>()); }

}  // namespace

json SettledProposal::toJson() const {
    return {{"adr_v", adrV.str()}, {"f", f}, {"parties", addressesToJson(parties)}, {"h_cx", digestsToJson(hCx)}, {"q", q}};
}

SettledProposal SettledProposal::fromJson(const json& j) {
    return {Address::parse(j.at("adr_v").get<std::string>()), j.at("f").get<std::string>(), addressesFromJson(j.at("parties")),
            digestsFromJson(j.at("h_cx")), j.at("q").get<Coins>()};
}

bool ProposalRecord::isParty(const Address& a) const {
    for (const auto& p : parties)
        if (p.addr == a) return true;
    return false;
}

std::vector<std::pair<Address, Coins>> splitRefund(Coins total, const std::vector<Address>& recipients) {
    std::vector<std::pair<Address, Coins>> out;
    if (recipients.empty()) return out;
    Coins each = total / recipients.size();
    Coins rem = total % recipients.size();
    for (const auto& r : recipients) out.emplace_back(r, each);
    out.front().second += rem;
    return out;
}

namespace {
Rational reduce(Coins num, Coins den) {
    Coins g = std::gcd(num, den);
    return g ? Rational{num / g, den / g} : Rational{num, den};
}
}  // namespace

Rational punishRefund(Coins q, std::size_t n, std::size_t m) { return reduce(q * (n + 1), n - m + 1); }

Rational timeoutRefund(Coins q, std::size_t n) { return reduce(q * (n + 1), n); }

Address verifierAddress(const Digest& deployTxId) {
    Bytes b = toBytes("verifier");
    append(b, deployTxId.view());
    auto h = crypto::hash(b);
    return Address(FixedBytes<20>::fromView(ByteView(h.bytes).subspan(12)));
}

Coins World::coinsOf(const Address& a) const {
    auto it = coins.find(a);
    return it == coins.end() ? 0 : it->second;
}

const ProposalRecord* World::proposal(const Digest& idp) const {
    auto it = prpls.find(idp);
    return it == prpls.end() ? nullptr : &it->second;
}

const VerifierState* World::verifier(const Address& a) const {
    auto it = verifiers.find(a);
    return it == verifiers.end() ? nullptr : &it->second;
}

Coins World::totalCoins() const {
    Coins t = 0;
    for (const auto& [a, c] : coins) t += c;
    return t;
}

ProposalRecord& World::record(const Digest& idp) {
    auto it = prpls.find(idp);
    if (it == prpls.end()) throw Revert(RevertReason::UnknownProposal, idp.hex());
    return it->second;
}

void World::requireEnclave(const Address& sender) const {
    if (!serviceDeployed) throw Revert(RevertReason::NotDeployed, "service not deployed");
    if (sender != adrE) throw Revert(RevertReason::NotEnclave, sender.str());
}

void World::credit(const std::vector<std::pair<Address, Coins>>& amounts) {
    for (const auto& [a, c] : amounts) coins[a] += c;
}

void World::deployService(const Address& sender, const crypto::PublicKey& pk, const Address& exec) {
    if (serviceDeployed) throw Revert(RevertReason::BadStatus, "service already deployed");
    serviceDeployed = true;
    pkE = pk;
    adrE = crypto::addressOf(pk);
    adrExec = exec;
}

Address World::deployVerifier(const Digest& txId, const codegen::VerifierDescriptor& d) {
    if (!serviceDeployed) throw Revert(RevertReason::NotDeployed, "service not deployed");
    if (d.adrE != adrE) throw Revert(RevertReason::BadPayload, "verifier bound to " + d.adrE.str() + ", enclave is " + adrE.str());
    Address a = verifierAddress(txId);
    verifiers.emplace(a, VerifierState(d));
    return a;
}

void World::initVerifierState(const Address& sender, const Address& adrV, const std::vector<CommitEntry>& cells) {
    requireEnclave(sender);
    auto it = verifiers.find(adrV);
    if (it == verifiers.end()) throw Revert(RevertReason::UnknownVerifier, adrV.str());
    if (!it->second.initState(sender, cells)) throw Revert(RevertReason::BadStatus, "verifier state already initialized or bad cell");
}

void World::csRegister(const Address& sender, const crypto::PublicKey& pk) {
    auto it = parPks.find(sender);
    if (it != parPks.end() && it->second != pk) warnings.push_back("register: key of " + sender.str() + " overwritten");
    parPks[sender] = pk;
}

void World::csDeposit(const Address& sender, Coins amount) { coins[sender] += amount; }

void World::csPropose(const Address& sender, std::uint64_t height, const Digest& idp, const SettledProposal& p, std::uint64_t tauRes,
                      std::uint64_t tauCom) {
    requireEnclave(sender);
    if (prpls.count(idp)) throw Revert(RevertReason::DuplicateProposal, idp.hex());
    if (!verifiers.count(p.adrV)) throw Revert(RevertReason::UnknownVerifier, p.adrV.str());
    if (p.parties.empty() || p.parties.size() != p.hCx.size()) throw Revert(RevertReason::BadPayload, "parties and H_Cx differ in length");
    std::set<Address> distinct(p.parties.begin(), p.parties.end());
    if (distinct.size() != p.parties.size() || distinct.count(adrExec)) throw Revert(RevertReason::BadPayload, "duplicate participant");
    std::vector<Address> payers = p.parties;
    payers.push_back(adrExec);
    for (const auto& a : payers)
        if (coinsOf(a) < p.q) throw Revert(RevertReason::InsufficientCoins, a.str());
    for (const auto& a : payers) coins[a] -= p.q;

    ProposalRecord r;
    r.V = p.adrV;
    r.f = p.f;
    for (const auto& a : p.parties) r.parties.push_back({a, false, std::nullopt});
    r.hCx = p.hCx;
    r.q = p.q;
    r.tauRes = tauRes;
    r.tauCom = tauCom;
    r.hCp = height;
    prpls.emplace(idp, std::move(r));
}

void World::csChallenge(const Address& sender, const Digest& idp, const std::vector<Address>& challenged) {
    requireEnclave(sender);
    auto& r = record(idp);
    if (r.status != ProposalStatus::Settle) throw Revert(RevertReason::BadStatus, std::string(proposalStatusName(r.status)));
    for (const auto& a : challenged)
        if (!r.isParty(a)) throw Revert(RevertReason::NotParty, a.str());
    for (auto& p : r.parties)
        if (std::find(challenged.begin(), challenged.end(), p.addr) != challenged.end()) p.cha = true;
}

void World::csResponse(const Address& sender, const Digest& idp, const json& encryptedInputs) {
    auto& r = record(idp);
    if (r.status != ProposalStatus::Settle) throw Revert(RevertReason::BadStatus, std::string(proposalStatusName(r.status)));
    for (auto& p : r.parties)
        if (p.addr == sender) {
            p.res = encryptedInputs;
            return;
        }
    throw Revert(RevertReason::NotParty, sender.str());
}

void World::csPunish(const Address& sender, std::uint64_t height, const Digest& idp, const std::vector<Address>& malicious) {
    requireEnclave(sender);
    auto& r = record(idp);
    if (r.status != ProposalStatus::Settle) throw Revert(RevertReason::BadStatus, std::string(proposalStatusName(r.status)));
    if (height <= r.hCp + r.tauRes) throw Revert(RevertReason::TooEarly, "height " + std::to_string(height));
    std::set<Address> bad(malicious.begin(), malicious.end());
    if (bad.size() != malicious.size()) throw Revert(RevertReason::BadPayload, "duplicate malicious party");
    for (const auto& a : bad)
        if (!r.isParty(a)) throw Revert(RevertReason::NotParty, a.str());
    std::vector<Address> recipients;
    for (const auto& p : r.parties)
        if (!bad.count(p.addr)) recipients.push_back(p.addr);
    recipients.push_back(adrExec);
    credit(splitRefund(r.q * (r.parties.size() + 1), recipients));
    r.status = ProposalStatus::Abort;
}

std::optional<RevertReason> World::checkComplete(const Address& sender, const Digest& idp, const Proof& proof, const std::vector<CommitEntry>& cS,
                                                 const std::vector<CommitEntry>& cNew, const std::vector<CommitEntry>& cR) const {
    if (!serviceDeployed) return RevertReason::NotDeployed;
    if (sender != adrE) return RevertReason::NotEnclave;
    const auto* r = proposal(idp);
    if (!r) return RevertReason::UnknownProposal;
    if (r->status != ProposalStatus::Settle) return RevertReason::BadStatus;
    const auto* v = verifier(r->V);
    if (!v) return RevertReason::UnknownVerifier;
    if (cS != v->oldStates()) return RevertReason::ProofRejected;
    if (!v->verify(proof, r->hCx, cNew, cR)) return RevertReason::ProofRejected;
    return std::nullopt;
}

void World::csComplete(const Address& sender, const Digest& idp, const Proof& proof, const std::vector<CommitEntry>& cS,
                       const std::vector<CommitEntry>& cNew, const std::vector<CommitEntry>& cR) {
    if (auto why = checkComplete(sender, idp, proof, cS, cNew, cR)) throw Revert(*why, "complete " + idp.hex());
    auto& r = record(idp);
    if (!verifiers.at(r.V).setNewStates(sender, cNew)) throw Revert(RevertReason::ProofRejected, "new states rejected by verifier");
    r.cR = cR;
    std::vector<std::pair<Address, Coins>> refunds;
    for (const auto& p : r.parties) refunds.emplace_back(p.addr, r.q);
    refunds.emplace_back(adrExec, r.q);
    credit(refunds);
    r.status = ProposalStatus::Complete;
}

void World::csTimeout(const Address& sender, std::uint64_t height, const Digest& idp) {
    auto& r = record(idp);
    if (r.status != ProposalStatus::Settle) throw Revert(RevertReason::BadStatus, std::string(proposalStatusName(r.status)));
    if (!r.isParty(sender)) throw Revert(RevertReason::NotParty, sender.str());
    if (height <= r.hCp + r.tauCom) throw Revert(RevertReason::TooEarly, "height " + std::to_string(height));
    std::vector<Address> recipients;
    for (const auto& p : r.parties) recipients.push_back(p.addr);
    credit(splitRefund(r.q * (r.parties.size() + 1), recipients));
    r.status = ProposalStatus::Timeout;
}

void World::apply(const Transaction& tx, std::uint64_t height) {
    const json& p = tx.payload;
    try {
        switch (tx.kind) {
            case TxKind::Register: {
                crypto::PublicKey pk{fromHex(p.at("pk").get<std::string>())};
                if (pk.bytes.size() != crypto::kPublicKeySize) throw Revert(RevertReason::BadPayload, "public key length");
                csRegister(tx.sender, pk);
                return;
            }
            case TxKind::Deposit: csDeposit(tx.sender, p.at("amount").get<Coins>()); return;
            case TxKind::Deploy:
                if (p.contains("service")) {
                    const auto& s = p.at("service");
                    deployService(tx.sender, crypto::PublicKey{fromHex(s.at("pk_e").get<std::string>())}, Address::parse(s.at("adr_exec").get<std::string>()));
                } else if (p.contains("verifier")) {
                    deployVerifier(tx.id, codegen::VerifierDescriptor::fromJson(p.at("verifier")));
                } else if (p.contains("state_init")) {
                    const auto& s = p.at("state_init");
                    initVerifierState(tx.sender, Address::parse(s.at("verifier").get<std::string>()), entriesFromJson(s.at("cells")));
                } else {
                    throw Revert(RevertReason::BadPayload, "unknown deployment");
                }
                return;
            case TxKind::Propose:
                csPropose(tx.sender, height, idpOf(p), SettledProposal::fromJson(p.at("proposal")), p.at("tau_res").get<std::uint64_t>(),
                          p.at("tau_com").get<std::uint64_t>());
                return;
            case TxKind::Challenge: csChallenge(tx.sender, idpOf(p), addressesFromJson(p.at("parties"))); return;
            case TxKind::Response: csResponse(tx.sender, idpOf(p), p.at("inputs")); return;
            case TxKind::Punish: csPunish(tx.sender, height, idpOf(p), addressesFromJson(p.at("malicious"))); return;
            case TxKind::Complete:
                csComplete(tx.sender, idpOf(p), Proof::fromJson(p.at("proof")), entriesFromJson(p.at("c_s")), entriesFromJson(p.at("c_s_new")),
                           entriesFromJson(p.at("c_r")));
                return;
            case TxKind::Timeout: csTimeout(tx.sender, height, idpOf(p)); return;
        }
    } catch (const json::exception& e) {
        throw Revert(RevertReason::BadPayload, e.what());
    } catch (const std::invalid_argument& e) {
        throw Revert(RevertReason::BadPayload, e.what());
    }
}

}  // namespace cloak::chain
