#include "cloak/protocol/audit.hpp"

#include <algorithm>

namespace cloak::protocol {

using chain::CommitEntry;
using chain::TxKind;

bool AuditReport::consistent() const {
    if (!worldMatches) return false;
    for (const auto& c : completions)
        if (c.accepted != c.chainOk) return false;
    return true;
}

namespace {

/// Applies one transaction the way a block does: all or nothing.
void applyTx(chain::World& w, const chain::Transaction& tx, std::uint64_t height) {
    auto snapshot = w;
    try {
        w.apply(tx, height);
    } catch (const chain::Revert&) {
        w = std::move(snapshot);
    }
}

bool sameWorld(const chain::World& a, const chain::World& b) {
    if (a.coins != b.coins || a.parPks != b.parPks || a.prpls.size() != b.prpls.size() || a.verifiers.size() != b.verifiers.size()) return false;
    for (const auto& [id, r] : a.prpls) {
        const auto* o = b.proposal(id);
        if (!o || o->status != r.status || o->hCp != r.hCp) return false;
    }
    for (const auto& [adr, v] : a.verifiers) {
        const auto* o = b.verifier(adr);
        if (!o || o->oldStates() != v.oldStates()) return false;
    }
    return true;
}

}  // namespace

bool acceptsCompletion(const chain::World& w, const Address& sender, const nlohmann::json& payload) {
    Digest idp;
    chain::Proof proof;
    std::vector<CommitEntry> cS, cNew, cR;
    try {
        idp = Digest::fromHexString(payload.at("id_p").get<std::string>());
        proof = chain::Proof::fromJson(payload.at("proof"));
        cS = chain::entriesFromJson(payload.at("c_s"));
        cNew = chain::entriesFromJson(payload.at("c_s_new"));
        cR = chain::entriesFromJson(payload.at("c_r"));
    } catch (const std::exception&) {
        return false;
    }
    if (!w.serviceDeployed || sender != w.adrE) return false;
    const auto* r = w.proposal(idp);
    if (!r || r->status != chain::ProposalStatus::Settle) return false;
    const auto* v = w.verifier(r->V);
    if (!v) return false;
    const auto& d = v->descriptor();

    // Every proof component is recomputed from published data.
    auto current = v->oldStates();
    if (cS != current) return false;
    std::vector<Digest> cells;
    for (const auto& e : current) cells.push_back(e.digest());
    std::vector<Digest> news, rets;
    for (const auto& e : cNew) {
        if (std::none_of(d.stateLayout.begin(), d.stateLayout.end(), [&](const auto& l) { return l.var == e.var; })) return false;
        news.push_back(e.digest());
    }
    for (const auto& e : cR) rets.push_back(e.digest());
    return proof.hF == d.hF && proof.hP == d.hP && proof.hCx == crypto::hashList(r->hCx) && proof.hCs == crypto::hashList(cells) &&
           proof.hCsNew == crypto::hashList(news) && proof.hCr == crypto::hashList(rets);
}

chain::World worldBefore(const chain::Chain& c, const Digest& txId) {
    chain::World w;
    for (std::uint64_t h = 1; h <= c.height(); ++h)
        for (const auto& tx : c.block(h).txs) {
            if (tx.id == txId) return w;
            applyTx(w, tx, h);
        }
    throw std::invalid_argument("worldBefore: transaction not on chain");
}

AuditReport auditChain(const chain::Chain& c) {
    AuditReport out;
    chain::World w;
    for (std::uint64_t h = 1; h <= c.height(); ++h)
        for (const auto& tx : c.block(h).txs) {
            if (tx.kind == TxKind::Complete) {
                AuditEntry e{tx.id, h, chain::checkTx(tx) && acceptsCompletion(w, tx.sender, tx.payload), c.receipt(tx.id)->ok};
                out.completions.push_back(e);
            }
            applyTx(w, tx, h);
        }
    out.worldMatches = sameWorld(w, c.world());
    return out;
}

}  // namespace cloak::protocol
