#include "cloak/enclave/enclave.hpp"

#include <algorithm>

namespace cloak::enclave {

using chain::CommitEntry;
using chain::Transaction;
using chain::TxKind;
using interp::CellId;
using interp::ResolvedOwner;
using interp::Value;

std::string_view sessionStatusName(SessionStatus s) {
    switch (s) {
        case SessionStatus::GenerateIdp: return "GENERATEIDP";
        case SessionStatus::Settle: return "SETTLE";
        case SessionStatus::Execute: return "EXECUTE";
        case SessionStatus::Complete: return "COMPLETE";
        case SessionStatus::Abort: return "ABORT";
    }
    return "?";
}

bool allowedTransition(SessionStatus from, SessionStatus to) {
    using S = SessionStatus;
    return (from == S::GenerateIdp && to == S::Settle) || (from == S::Settle && to == S::Execute) || (from == S::Execute && to == S::Complete) ||
           (from == S::Settle && to == S::Abort);
}

std::string_view abortReasonName(AbortReason r) {
    switch (r) {
        case AbortReason::Timeout: return "Timeout";
        case AbortReason::PolicyUnmet: return "PolicyUnmet";
        case AbortReason::BadStatus: return "BadStatus";
        case AbortReason::BadAckSignature: return "BadAckSignature";
        case AbortReason::BadPoP: return "BadPoP";
        case AbortReason::BindingMismatch: return "BindingMismatch";
        case AbortReason::UnknownSession: return "UnknownSession";
        case AbortReason::UnknownDeployment: return "UnknownDeployment";
    }
    return "?";
}

namespace {

const crypto::KeyPair& issuerKeys() {
    static const crypto::KeyPair k = crypto::keygen(crypto::seedFromLabel("cloak attestation issuer"));
    return k;
}

Bytes reportBytes(const crypto::PublicKey& pk, const Digest& m) {
    Bytes b = pk.bytes;
    append(b, m.view());
    return b;
}

json addressList(const std::vector<Address>& as) {
    json a = json::array();
    for (const auto& x : as) a.push_back(x.str());
    return a;
}

}  // namespace

json AttestationReport::toJson() const { return {{"pk_e", pkE.hex()}, {"measurement", measurement.hex()}, {"issuer_sig", issuerSig.hex()}}; }

const crypto::PublicKey& attestationIssuerKey() { return issuerKeys().pk; }

Digest enclaveMeasurement() { return crypto::hash("cloak enclave program v1"); }

bool verifyReport(const AttestationReport& r) {
    return r.measurement == enclaveMeasurement() && crypto::verifySig(attestationIssuerKey(), reportBytes(r.pkE, r.measurement), r.issuerSig);
}

json Proposal::toJson() const {
    return {{"f", f},
            {"q", q},
            {"t_n", tN},
            {"proposer", proposer.str()},
            {"adr_v", adrV.str()},
            {"meet", {{"require_all_inputs", meet.requireAllInputs}, {"min_parties", meet.minParties}}}};
}

Bytes SignedProposal::signedBytes() const { return toBytes(chain::canonicalDump({{"id_p", idp.hex()}, {"proposal", p.toJson()}})); }

bool verifySignedProposal(const crypto::PublicKey& pkE, const SignedProposal& sp) { return crypto::verifySig(pkE, sp.signedBytes(), sp.sig); }

Enclave::Enclave(const crypto::Seed& keySeed, const crypto::Seed& rngSeed, const Digest& genesis, EnclaveConfig cfg)
    : keys_(crypto::keygen(keySeed)), rng_(rngSeed, "enclave"), cfg_(cfg), bcp_(genesis) {
    tauRes_ = rng_.range(cfg_.tauResMin, cfg_.tauResMax);
    std::uint64_t lo = std::max(cfg_.tauComMin, tauRes_ + cfg_.tauGap);
    tauCom_ = rng_.range(lo, std::max(lo, cfg_.tauComMax));
    report_.pkE = keys_.pk;
    report_.measurement = enclaveMeasurement();
    report_.issuerSig = crypto::sign(issuerKeys(), reportBytes(keys_.pk, report_.measurement));
}

Enclave::Session& Enclave::session(const Digest& idp) {
    auto it = sessions_.find(idp);
    if (it == sessions_.end()) throw EnclaveAbort(AbortReason::UnknownSession, idp.hex());
    return it->second;
}

SessionStatus Enclave::status(const Digest& idp) const {
    auto it = sessions_.find(idp);
    if (it == sessions_.end()) throw EnclaveAbort(AbortReason::UnknownSession, idp.hex());
    return it->second.status;
}

const Enclave::Deployment& Enclave::deployment(const Address& adrV) const {
    auto it = deployments_.find(adrV);
    if (it == deployments_.end()) throw EnclaveAbort(AbortReason::UnknownDeployment, adrV.str());
    return it->second;
}

void Enclave::setStatus(Session& s, SessionStatus to) {
    transitions_.emplace_back(s.status, to);
    s.status = to;
}

Transaction Enclave::sign(TxKind kind, json payload) { return chain::makeTx(keys_, kind, std::move(payload), nonce_++); }

CommitEntry Enclave::commitValue(std::string var, Bytes key, const ResolvedOwner& owner, const Value& v,
                                 const std::map<Address, crypto::PublicKey>& pks) {
    CommitEntry e{std::move(var), std::move(key), ownerString(owner), {}};
    switch (owner.kind) {
        case ResolvedOwner::Kind::Public: e.data = v.encode(); break;
        case ResolvedOwner::Kind::Tee: e.data = crypto::commit(keys_.pk, v.encode(), rng_.next32()).serialize(); break;
        case ResolvedOwner::Kind::Party: {
            auto it = pks.find(owner.addr);
            if (it == pks.end()) throw interp::PolicyError("no public key registered for owner " + owner.addr.str());
            e.data = crypto::commit(it->second, v.encode(), rng_.next32()).serialize();
            break;
        }
    }
    return e;
}

namespace {

void sortByLayout(std::vector<CommitEntry>& es, const codegen::ContractPolicy& P) {
    auto idx = [&](const std::string& var) {
        for (std::size_t i = 0; i < P.states.size(); ++i)
            if (P.states[i].id == var) return i;
        return P.states.size();
    };
    std::stable_sort(es.begin(), es.end(), [&](const CommitEntry& a, const CommitEntry& b) {
        return std::make_pair(idx(a.var), a.key) < std::make_pair(idx(b.var), b.key);
    });
}

interp::RuntimeOwners stateOwners(const codegen::ContractPolicy& P, const interp::StateStore& s) {
    interp::RuntimeOwners out;
    for (const auto& d : P.states)
        if (d.type.data.kind == frontend::DataType::Kind::Address) out[d.id] = s.read(CellId::scalar(d.id), d.type.data).asAddress();
    return out;
}

}  // namespace

Address Enclave::deploy(const frontend::ContractAst& F, const codegen::ContractPolicy& P, const Transaction& deployTx,
                        const chain::ProofOfPublication& pop) {
    if (deployTx.kind != TxKind::Deploy || !deployTx.payload.contains("verifier"))
        throw EnclaveAbort(AbortReason::BindingMismatch, "not a verifier deployment");
    auto d = codegen::VerifierDescriptor::fromJson(deployTx.payload.at("verifier"));
    Address adrV = chain::verifierAddress(deployTx.id);
    Digest hF = codegen::hashPrivateContract(F), hP = codegen::hashPolicy(P);
    if (hF != d.hF) throw EnclaveAbort(AbortReason::BindingMismatch, "H_F differs from the verifier descriptor");
    if (hP != d.hP) throw EnclaveAbort(AbortReason::BindingMismatch, "H_P differs from the verifier descriptor");
    if (d.adrE != keys_.addr) throw EnclaveAbort(AbortReason::BindingMismatch, "verifier bound to another enclave");
    if (auto it = deployments_.find(adrV); it != deployments_.end()) return it->second.adrF;
    if (!chain::verifyPoP(bcp_, deployTx, pop)) throw EnclaveAbort(AbortReason::BadPoP, "deployment not published");
    bcp_ = pop.tip().hash;
    Bytes b = toBytes("contract");
    append(b, adrV.view());
    append(b, hF.view());
    auto h = crypto::hash(b);
    Address adrF(FixedBytes<20>::fromView(ByteView(h.bytes).subspan(12)));
    deployments_.emplace(adrV, Deployment{F, P, hF, hP, adrF});
    return adrF;
}

Transaction Enclave::initState(const Address& adrV, const interp::StateStore& s0, const std::map<Address, crypto::PublicKey>& registered) {
    const auto& dep = deployment(adrV);
    auto owners = stateOwners(dep.P, s0);
    std::vector<CommitEntry> cells;
    for (const auto& [cell, v] : s0.cells())
        cells.push_back(commitValue(cell.var, cellKeyBytes(cell), interp::cellOwner(dep.P.states, cell, owners), v, registered));
    sortByLayout(cells, dep.P);
    return sign(TxKind::Deploy, {{"state_init", {{"verifier", adrV.str()}, {"cells", chain::entriesToJson(cells)}}}});
}

SignedProposal Enclave::generateIDp(const Proposal& p) {
    deployment(p.adrV);
    SignedProposal sp;
    sp.idp = Digest(rng_.next32());
    sp.p = p;
    sp.sig = crypto::sign(keys_, sp.signedBytes());
    Session s;
    s.p = p;
    sessions_.emplace(sp.idp, std::move(s));
    return sp;
}

Transaction Enclave::settleProposal(const Digest& idp, const std::vector<Ack>& acks, const std::map<Address, crypto::PublicKey>& registered,
                                    std::uint64_t now) {
    auto& s = session(idp);
    if (s.status != SessionStatus::GenerateIdp) throw EnclaveAbort(AbortReason::BadStatus, std::string(sessionStatusName(s.status)));
    if (now > s.p.tN) throw EnclaveAbort(AbortReason::Timeout, "settlement at " + std::to_string(now) + " after t_n " + std::to_string(s.p.tN));
    const auto& dep = deployment(s.p.adrV);
    const auto* fp = dep.P.function(s.p.f);
    if (!fp) throw EnclaveAbort(AbortReason::PolicyUnmet, "unknown function " + s.p.f);
    auto allowed = suppliableParams(*fp);

    std::vector<const Ack*> valid;
    for (const auto& a : acks) {
        if (a.idp != idp || !verifyAck(a)) continue;
        auto reg = registered.find(a.party);
        if (reg == registered.end() || reg->second != a.pk) continue;
        bool known = std::all_of(a.supplies.begin(), a.supplies.end(),
                                 [&](const std::string& n) { return std::find(allowed.begin(), allowed.end(), n) != allowed.end(); });
        if (!known) continue;
        if (std::any_of(valid.begin(), valid.end(), [&](const Ack* v) { return v->party == a.party; })) continue;
        valid.push_back(&a);
    }
    if (valid.empty() && !acks.empty()) throw EnclaveAbort(AbortReason::BadAckSignature, "no acknowledgement verifies");
    if (valid.size() < s.p.meet.minParties)
        throw EnclaveAbort(AbortReason::PolicyUnmet, std::to_string(valid.size()) + " parties, " + std::to_string(s.p.meet.minParties) + " required");
    if (std::none_of(valid.begin(), valid.end(), [&](const Ack* v) { return v->party == s.p.proposer; }))
        throw EnclaveAbort(AbortReason::PolicyUnmet, "proposer did not acknowledge");
    if (s.p.meet.requireAllInputs)
        for (const auto& name : allowed)
            if (std::none_of(valid.begin(), valid.end(), [&](const Ack* v) {
                    return std::find(v->supplies.begin(), v->supplies.end(), name) != v->supplies.end();
                }))
                throw EnclaveAbort(AbortReason::PolicyUnmet, "no party supplies '" + name + "'");

    s.settled = {s.p.adrV, s.p.f, {}, {}, s.p.q};
    for (const auto* a : valid) {
        s.settled.parties.push_back(a->party);
        s.settled.hCx.push_back(commitmentDigest(a->cx));
        s.pks.push_back(a->pk);
        s.supplies.push_back(a->supplies);
    }
    s.registered = registered;
    auto tx = sign(TxKind::Propose, {{"id_p", idp.hex()}, {"proposal", s.settled.toJson()}, {"tau_res", tauRes_}, {"tau_com", tauCom_}});
    s.txP = tx.id;
    setStatus(s, SessionStatus::Settle);
    return tx;
}

std::optional<PartyInput> Enclave::openInput(const Session& s, const Digest& idp, const Envelope& e) const {
    if (e.kind != "inputs" || e.session != idp) return std::nullopt;
    if (std::find(s.settled.parties.begin(), s.settled.parties.end(), e.from) == s.settled.parties.end()) return std::nullopt;
    try {
        return PartyInput::decode(unseal(keys_, e));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

bool Enclave::inputConsistent(const Session& s, std::size_t i, const PartyInput& in) const {
    if (commitmentDigest(inputCommitment(s.pks[i], in)) != s.settled.hCx[i]) return false;
    std::vector<std::string> given;
    for (const auto& [k, v] : in.params.items()) given.push_back(k);
    auto declared = s.supplies[i];
    std::sort(declared.begin(), declared.end());
    if (given != declared) return false;

    const auto* fp = deployment(s.p.adrV).P.function(s.p.f);
    std::string owner = s.settled.parties[i].str();
    for (const auto& e : s.cS) {
        if (e.owner != owner || !(fp->readsVar(e.var) || fp->mutatesVar(e.var))) continue;
        CellId cell = cellFromEntry(e);
        auto it = std::find_if(in.states.begin(), in.states.end(), [&](const StateOpening& o) { return o.cell == cell; });
        if (it == in.states.end()) return false;
        try {
            if (!crypto::checkOpening(s.pks[i], it->value.encode(), it->r, crypto::Ciphertext::deserialize(e.data))) return false;
        } catch (const std::exception&) {
            return false;
        }
    }
    return true;
}

ExecOutcome Enclave::executeMpt(const Digest& idp, const std::vector<Envelope>& inputs, const Transaction& txP,
                                const chain::ProofOfPublication& popP, const std::vector<CommitEntry>& onChainCs) {
    auto& s = session(idp);
    if (s.status != SessionStatus::Settle || s.hCp) throw EnclaveAbort(AbortReason::BadStatus, std::string(sessionStatusName(s.status)));
    if (txP.id != s.txP || !chain::verifyPoP(bcp_, txP, popP)) throw EnclaveAbort(AbortReason::BadPoP, "TX_p not published from the checkpoint");
    s.hCp = chain::inclusionHeight(popP, txP.id);
    s.cS = onChainCs;
    for (const auto& e : inputs)
        if (auto in = openInput(s, idp, e); in && !s.collected.count(e.from)) s.collected.emplace(e.from, std::move(*in));

    std::vector<Address> bad;
    for (std::size_t i = 0; i < s.settled.parties.size(); ++i) {
        const auto& a = s.settled.parties[i];
        auto it = s.collected.find(a);
        if (it == s.collected.end() || !inputConsistent(s, i, it->second)) {
            bad.push_back(a);
            s.collected.erase(a);
        }
    }
    if (!bad.empty()) {
        s.malicious = bad;
        return {false, bad, std::nullopt};
    }
    bcp_ = popP.tip().hash;
    run(s);
    return {s.status == SessionStatus::Execute, {}, s.failure};
}

void Enclave::run(Session& s) {
    const auto& dep = deployment(s.p.adrV);
    const auto* fp = dep.P.function(s.p.f);
    const frontend::FunctionDecl* fdecl = nullptr;
    for (const auto& f : dep.F.functions)
        if (f.name == s.p.f) fdecl = &f;
    if (!fp || !fdecl) {
        s.failure = "function " + s.p.f + " is not in the private contract";
        return;
    }

    std::vector<std::pair<Address, json>> xs;
    for (const auto& a : s.settled.parties) xs.emplace_back(a, s.collected.at(a).params);
    std::map<std::string, Value> params;
    try {
        params = mergeParams(*fp, xs);
    } catch (const MergeError& e) {
        s.failure = std::string("inconsistent inputs: ") + e.what();
        return;
    }

    interp::StateStore st;
    std::set<CellId> unavailable;
    for (const auto& e : s.cS) {
        CellId cell = cellFromEntry(e);
        if (e.owner == "all") {
            st.write(cell, Value::decode(e.data));
        } else if (e.owner == "tee") {
            st.write(cell, Value::decode(crypto::open(keys_, crypto::Ciphertext::deserialize(e.data)).plaintext));
        } else {
            auto it = s.collected.find(Address::parse(e.owner));
            const StateOpening* o = nullptr;
            if (it != s.collected.end())
                for (const auto& so : it->second.states)
                    if (so.cell == cell) o = &so;
            if (o) st.write(cell, o->value);
            else unavailable.insert(cell);
        }
    }

    interp::ExecOptions opts;
    opts.unavailable = &unavailable;
    auto r = interp::execFunction(dep.F, *fdecl, st, params, s.p.proposer, opts);
    if (!r.ok()) {
        s.failure = std::string(interp::abortReasonName(r.abort->reason)) + ": " + r.abort->message;
        return;
    }

    std::map<Address, crypto::PublicKey> pks = s.registered;
    for (std::size_t i = 0; i < s.pks.size(); ++i) pks[s.settled.parties[i]] = s.pks[i];
    try {
        auto owners = interp::collectRuntimeOwners(*fp, dep.P.states, params, r.returns, r.newState, s.p.proposer);
        s.cNew.clear();
        for (const auto& cell : r.written)
            s.cNew.push_back(commitValue(cell.var, cellKeyBytes(cell), interp::cellOwner(dep.P.states, cell, owners), *r.newState.find(cell), pks));
        sortByLayout(s.cNew, dep.P);
        s.cR.clear();
        for (std::size_t i = 0; i < fp->returns.size(); ++i) {
            codegen::DataPolicy named{r.returnOrder.at(i), fp->returns[i].type};
            s.cR.push_back(commitValue(named.id, {}, interp::returnOwner(named, owners), r.returns.at(named.id), pks));
        }
    } catch (const interp::PolicyError& e) {
        s.failure = std::string("PolicyError: ") + e.what();
        s.cNew.clear();
        s.cR.clear();
        return;
    }
    setStatus(s, SessionStatus::Execute);
}

std::optional<Transaction> Enclave::challengeParties(const Digest& idp, const std::vector<Address>& malicious) {
    auto& s = session(idp);
    if (s.status != SessionStatus::Settle) throw EnclaveAbort(AbortReason::BadStatus, std::string(sessionStatusName(s.status)));
    if (malicious.empty()) return std::nullopt;
    return sign(TxKind::Challenge, {{"id_p", idp.hex()}, {"parties", addressList(malicious)}});
}

Adjudication Enclave::adjudicate(const Digest& idp, const Transaction& txCha, const std::vector<Transaction>& responses,
                                 const chain::ProofOfPublication& pop) {
    auto& s = session(idp);
    if (s.status != SessionStatus::Settle || !s.hCp) throw EnclaveAbort(AbortReason::BadStatus, std::string(sessionStatusName(s.status)));
    if (txCha.kind != TxKind::Challenge || txCha.sender != keys_.addr || txCha.payload.value("id_p", "") != idp.hex() ||
        !chain::verifyPoP(bcp_, txCha, pop))
        throw EnclaveAbort(AbortReason::BadPoP, "challenge not published from the checkpoint");
    std::uint64_t deadline = *s.hCp + tauRes_;
    if (pop.tip().height <= deadline) throw EnclaveAbort(AbortReason::BadPoP, "response window still open");

    std::vector<Address> remaining = s.malicious;
    for (const auto& tx : responses) {
        if (tx.kind != TxKind::Response || !chain::checkTx(tx) || !pop.find(tx.id)) continue;
        if (chain::inclusionHeight(pop, tx.id) > deadline) continue;
        if (tx.payload.value("id_p", "") != idp.hex()) continue;
        auto pos = std::find(remaining.begin(), remaining.end(), tx.sender);
        if (pos == remaining.end()) continue;
        std::optional<PartyInput> in;
        try {
            auto env = Envelope::fromJson(tx.payload.at("inputs"));
            if (env.from != tx.sender) continue;
            in = openInput(s, idp, env);
        } catch (const std::exception&) {
            continue;
        }
        if (!in) continue;
        std::size_t i = static_cast<std::size_t>(std::find(s.settled.parties.begin(), s.settled.parties.end(), tx.sender) - s.settled.parties.begin());
        if (!inputConsistent(s, i, *in)) continue;
        s.collected[tx.sender] = std::move(*in);
        remaining.erase(pos);
    }
    bcp_ = pop.tip().hash;

    Adjudication out;
    if (remaining.empty()) {
        s.malicious.clear();
        run(s);
        out.resumed = s.status == SessionStatus::Execute;
        out.failure = s.failure;
        return out;
    }
    s.malicious = remaining;
    out.malicious = remaining;
    out.punish = sign(TxKind::Punish, {{"id_p", idp.hex()}, {"malicious", addressList(remaining)}});
    setStatus(s, SessionStatus::Abort);
    return out;
}

Transaction Enclave::emitComplete(const Digest& idp) {
    auto& s = session(idp);
    if (s.status != SessionStatus::Execute) throw EnclaveAbort(AbortReason::BadStatus, std::string(sessionStatusName(s.status)));
    const auto& dep = deployment(s.p.adrV);
    chain::Proof proof{dep.hF, dep.hP, crypto::hashList(s.settled.hCx), chain::entriesDigest(s.cS), chain::entriesDigest(s.cNew),
                       chain::entriesDigest(s.cR)};
    auto tx = sign(TxKind::Complete, {{"id_p", idp.hex()},
                                      {"proof", proof.toJson()},
                                      {"c_s", chain::entriesToJson(s.cS)},
                                      {"c_s_new", chain::entriesToJson(s.cNew)},
                                      {"c_r", chain::entriesToJson(s.cR)}});
    setStatus(s, SessionStatus::Complete);
    return tx;
}

Transaction Enclave::emitAbort(const Digest& idp) {
    auto& s = session(idp);
    if (s.status != SessionStatus::Settle || !s.failure) throw EnclaveAbort(AbortReason::BadStatus, std::string(sessionStatusName(s.status)));
    auto tx = sign(TxKind::Punish, {{"id_p", idp.hex()}, {"malicious", json::array()}});
    setStatus(s, SessionStatus::Abort);
    return tx;
}

}  // namespace cloak::enclave
