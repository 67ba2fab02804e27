#include "cloak/protocol/runner.hpp"

#include <algorithm>
#include <fstream>
#include <ranges>
#include <sstream>

#include "cloak/codegen/verifier.hpp"
#include "cloak/frontend/parser.hpp"
#include "cloak/protocol/metrics.hpp"
#include "cloak/protocol/party.hpp"

namespace cloak::protocol {

using chain::Transaction;
using chain::TxKind;
using enclave::Enclave;
using interp::CellId;
using interp::Value;

std::string_view outcomeName(Outcome o) {
    switch (o) {
        case Outcome::Complete: return "COMPLETE";
        case Outcome::Abort: return "ABORT";
        case Outcome::Timeout: return "TIMEOUT";
        case Outcome::NotSettled: return "NOT_SETTLED";
        case Outcome::Stalled: return "STALLED";
    }
    return "?";
}

int exitCodeFor(Outcome o) {
    switch (o) {
        case Outcome::Complete: return 0;
        case Outcome::Abort: return 3;
        case Outcome::Timeout: return 4;
        case Outcome::NotSettled: return 5;
        case Outcome::Stalled: return 6;
    }
    return 1;
}

json RoundReport::toJson() const {
    json j{{"id_p", idp.hex()},
           {"outcome", outcomeName(outcome)},
           {"parties", parties},
           {"h_cp", hCp},
           {"tx_count", {{"setup", setupTxs}, {"mpt", mptTxs}, {"by_kind", txCount}}},
           {"malicious", malicious},
           {"coins_before", coinsBefore},
           {"coins_after", coinsAfter},
           {"outputs", outputs}};
    if (failure) j["failure"] = *failure;
    return j;
}

json RunReport::toJson() const {
    json addrs = json::object();
    for (const auto& [n, a] : addresses) addrs[n] = a.str();
    std::size_t mpt = 0;
    std::map<std::string, std::size_t> byKind;
    json rs = json::array();
    for (const auto& r : rounds) {
        mpt += r.mptTxs;
        for (const auto& [k, n] : r.txCount) byKind[k] += n;
        rs.push_back(r.toJson());
    }
    return {{"scenario", scenario},
            {"seed", seed},
            {"outcome", outcomeName(outcome)},
            {"addresses", addrs},
            {"tau", {{"res", tauRes}, {"com", tauCom}}},
            {"tx_count", {{"setup", setupTxs}, {"mpt", mpt}, {"by_kind", byKind}}},
            {"rounds", rs},
            {"coins", {{"deposits", deposits}, {"final", finalCoins}}},
            {"conserved", conserved},
            {"warnings", warnings}};
}

crypto::KeyPair partyKeys(const PartyConfig& p) { return crypto::keygen(crypto::seedFromLabel("party " + p.seed)); }
crypto::KeyPair executorKeys() { return crypto::keygen(crypto::seedFromLabel("executor host")); }

namespace {

std::string readSource(const ScenarioConfig& cfg) {
    if (cfg.source) return *cfg.source;
    std::ifstream in(cfg.contract);
    if (!in) throw ScenarioError("cannot open contract " + cfg.contract);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

codegen::Artifacts compileContract(const ScenarioConfig& cfg) {
    codegen::Artifacts a;
    try {
        a = codegen::compile(frontend::parseSource(readSource(cfg)));
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError(std::string("contract: ") + e.what());
    }
    if (!a.ok()) throw ScenarioError("contract does not type-check");
    if (!a.policy.function(cfg.function)) throw ScenarioError("scenario.function: no function '" + cfg.function + "'");
    return a;
}

class Runner {
  public:
    explicit Runner(const ScenarioConfig& cfg)
        : cfg_(cfg),
          art_(compileContract(cfg)),
          chain_(std::make_shared<chain::Chain>()),
          exec_(executorKeys()),
          E_(crypto::seedFromLabel("enclave key"), crypto::seedFromLabel("enclave rng " + std::to_string(cfg.seed)), chain_->genesisHash()) {
        for (const auto& p : cfg_.parties) names_[p.name] = partyKeys(p).addr;
        names_["exec"] = exec_.addr;
        auto rngSeed = crypto::seedFromLabel("party rng " + std::to_string(cfg.seed));
        for (const auto& p : cfg_.parties) parties_.emplace_back(p, rngSeed, names_);
        if (std::set<Address>(std::views::values(names_).begin(), std::views::values(names_).end()).size() != names_.size())
            throw ScenarioError("scenario.parties: two parties share a key seed");
        out_.report.scenario = cfg.name;
        out_.report.seed = cfg.seed;
        out_.report.addresses = names_;
        out_.report.tauRes = E_.tauRes();
        out_.report.tauCom = E_.tauCom();
    }

    RunResult run() {
        setup();
        for (std::size_t r = 0; r < cfg_.rounds; ++r) round();
        auto& rep = out_.report;
        rep.outcome = Outcome::Complete;
        for (const auto& r : rep.rounds)
            if (r.outcome != Outcome::Complete) {
                rep.outcome = r.outcome;
                break;
            }
        rep.finalCoins = coins();
        rep.conserved = conserved(chain_->world(), deposited_);
        rep.warnings.insert(rep.warnings.end(), chain_->world().warnings.begin(), chain_->world().warnings.end());
        out_.chain = chain_;
        return std::move(out_);
    }

  private:
    std::string nameOf(const Address& a) const {
        for (const auto& [n, v] : names_)
            if (v == a) return n;
        return a.str();
    }

    void log(std::string from, std::string to, std::string kind, json body) {
        out_.messages.push_back({std::move(from), std::move(to), std::move(kind), std::move(body)});
    }

    Digest submit(const std::string& from, Transaction tx) {
        log(from, "chain", std::string(chain::txKindName(tx.kind)), tx.toJson());
        return chain_->submit(std::move(tx));
    }

    Transaction execTx(TxKind kind, json payload) { return chain::makeTx(exec_, kind, std::move(payload), execNonce_++); }

    void mine() { chain_->mineBlock(); }
    void mineUntil(std::uint64_t h) {
        while (chain_->height() < h) mine();
    }

    std::map<std::string, chain::Coins> coins() const {
        std::map<std::string, chain::Coins> out;
        for (const auto& [n, a] : names_) out[n] = chain_->world().coinsOf(a);
        return out;
    }

    const chain::VerifierState& verifier() const { return *chain_->world().verifier(adrV_); }

    interp::StateStore initialState() const {
        interp::StateStore s;
        for (const auto& [var, vj] : cfg_.initialState.items()) {
            const auto* st = art_.policy.state(var);
            if (!st) throw ScenarioError("scenario.state: no state variable '" + var + "'");
            const auto& t = st->type.data;
            try {
                if (t.isMapping()) {
                    if (!vj.is_object()) throw ScenarioError("scenario.state." + var + ": expected an object");
                    auto keyType = t.kind == frontend::DataType::Kind::Mapping ? *t.key : frontend::DataType::scalar(frontend::DataType::Kind::Address);
                    for (const auto& [k, v] : vj.items())
                        s.write(CellId::entry(var, interp::valueFromJson(resolveRefs(json(k), names_), keyType)),
                                interp::valueFromJson(resolveRefs(v, names_), t.value->data));
                } else {
                    s.write(CellId::scalar(var), interp::valueFromJson(resolveRefs(vj, names_), t));
                }
            } catch (const ScenarioError&) {
                throw;
            } catch (const std::exception& e) {
                throw ScenarioError("scenario.state." + var + ": " + e.what());
            }
        }
        return s;
    }

    void setup() {
        auto before = chain_->height();
        if (!enclave::verifyReport(E_.report())) out_.report.warnings.push_back("attestation report does not verify");
        submit("exec", execTx(TxKind::Deploy, {{"service", {{"pk_e", E_.pk().hex()}, {"adr_exec", exec_.addr.str()}}}}));
        submit("exec", execTx(TxKind::Register, {{"pk", exec_.pk.hex()}}));
        submit("exec", execTx(TxKind::Deposit, {{"amount", cfg_.executorDeposit}}));
        auto desc = codegen::generateVerifier(art_.checked, art_.policy, art_.privateContract, E_.address());
        auto deployTx = submit("exec", execTx(TxKind::Deploy, {{"verifier", desc.toJson()}}));
        for (auto& p : parties_) {
            submit(p.name(), p.tx(TxKind::Register, {{"pk", p.keys().pk.hex()}}));
            submit(p.name(), p.tx(TxKind::Deposit, {{"amount", p.config().deposit}}));
        }
        mine();
        deposited_ = cfg_.executorDeposit;
        out_.report.deposits["exec"] = cfg_.executorDeposit;
        for (const auto& p : parties_) {
            deposited_ += p.config().deposit;
            out_.report.deposits[p.name()] = p.config().deposit;
        }
        adrV_ = chain::verifierAddress(deployTx);
        E_.deploy(art_.privateContract, art_.policy, *chain_->findTx(deployTx), chain_->buildPoP(E_.checkpoint(), {deployTx}));
        auto init = E_.initState(adrV_, initialState(), chain_->world().parPks);
        submit("enclave", init);
        mine();
        if (!chain_->receipt(init.id)->ok) throw ScenarioError("initial state rejected: " + chain_->receipt(init.id)->status);
        if (chain_->world().pkE != E_.pk()) out_.report.warnings.push_back("service key differs from the attested enclave key");
        for (auto& p : parties_) p.refreshOpenings(verifier());
        out_.report.setupTxs = countTxs(*chain_, before, chain_->height()).setup;
    }

    void round() {
        RoundReport rr;
        auto h0 = chain_->height();
        rr.coinsBefore = coins();
        negotiate(rr, h0);
        auto counts = countTxs(*chain_, h0, chain_->height(), rr.idp);
        rr.txCount = counts.byKind;
        rr.mptTxs = counts.mpt;
        rr.setupTxs = counts.setup;
        rr.coinsAfter = coins();
        for (auto& p : parties_) p.refreshOpenings(verifier());
        out_.report.rounds.push_back(std::move(rr));
    }

    void negotiate(RoundReport& rr, std::uint64_t h0) {
        auto& proposer = parties_[cfg_.proposer];
        enclave::Proposal p{cfg_.function, cfg_.q, h0 + cfg_.tN, proposer.address(), adrV_, {cfg_.requireAllInputs, cfg_.minParties}};
        auto sp = E_.generateIDp(p);
        rr.idp = sp.idp;
        log(proposer.name(), "enclave", "proposal", p.toJson());
        log("enclave", "all", "signed_proposal", {{"id_p", sp.idp.hex()}, {"proposal", sp.p.toJson()}, {"sig", sp.sig.hex()}});

        // Acks arrive after their delay; those later than t_n are left out.
        std::vector<std::pair<std::uint64_t, std::size_t>> arrivals;
        for (std::size_t i = 0; i < parties_.size(); ++i) {
            if (!enclave::verifySignedProposal(E_.pk(), sp)) continue;
            parties_[i].prepare(sp.idp);
            auto at = h0 + parties_[i].config().delays.ack;
            if (at <= p.tN) arrivals.emplace_back(at, i);
        }
        std::stable_sort(arrivals.begin(), arrivals.end());
        std::vector<enclave::Ack> acks;
        for (auto [at, i] : arrivals) {
            acks.push_back(parties_[i].ack(E_.pk()));
            log(parties_[i].name(), "enclave", "ack", acks.back().toJson());
        }
        mineUntil(arrivals.empty() ? h0 : arrivals.back().first);

        Transaction txP;
        try {
            txP = E_.settleProposal(sp.idp, acks, chain_->world().parPks, chain_->height());
        } catch (const enclave::EnclaveAbort& e) {
            rr.outcome = Outcome::NotSettled;
            rr.failure = e.what();
            return;
        }
        submit("exec", txP);
        mine();
        const auto* rc = chain_->receipt(txP.id);
        if (!rc->ok) {
            rr.outcome = Outcome::NotSettled;
            rr.failure = rc->status;
            return;
        }
        rr.hCp = rc->height;
        auto settled = chain::SettledProposal::fromJson(txP.payload.at("proposal"));
        for (const auto& a : settled.parties) {
            rr.parties.push_back(nameOf(a));
            settledIdx_.push_back(*cfg_.partyIndex(nameOf(a)));
        }
        execute(rr, txP);
        distribute(rr);
    }

    PartyClient& settledParty(const Address& a) {
        for (auto i : settledIdx_)
            if (parties_[i].address() == a) return parties_[i];
        throw std::logic_error("not a settled party");
    }

    void execute(RoundReport& rr, const Transaction& txP) {
        if (cfg_.executor == ExecutorBehavior::CrashAfterSettle) return;
        // Inputs later than the window count as missing.
        std::uint64_t window = std::min(cfg_.tE, E_.tauRes() / 2);
        std::vector<std::pair<std::uint64_t, std::size_t>> arrivals;
        bool missing = false;
        for (auto i : settledIdx_) {
            auto b = parties_[i].behavior();
            auto d = parties_[i].config().delays.input;
            if (b == Behavior::SilentAfterAck || b == Behavior::NeverRespond || b == Behavior::RespondToChallenge || d > window) missing = true;
            else arrivals.emplace_back(rr.hCp + d, i);
        }
        std::stable_sort(arrivals.begin(), arrivals.end());
        std::vector<enclave::Envelope> envs;
        for (auto [at, i] : arrivals) {
            envs.push_back(parties_[i].inputEnvelope(E_.pk()));
            log(parties_[i].name(), "enclave", "inputs", envs.back().toJson());
        }
        mineUntil(missing ? rr.hCp + window : (arrivals.empty() ? rr.hCp : arrivals.back().first));

        auto outcome = E_.executeMpt(rr.idp, envs, txP, chain_->buildPoP(E_.checkpoint(), {txP.id}), verifier().oldStates());
        if (outcome.executed) return complete(rr);
        if (outcome.malicious.empty()) return abortFailed(rr, outcome.failure);

        auto cha = *E_.challengeParties(rr.idp, outcome.malicious);
        submit("exec", cha);
        mine();
        auto hCha = chain_->height();
        auto deadline = rr.hCp + E_.tauRes();
        std::vector<std::pair<std::uint64_t, Address>> due;
        for (const auto& a : outcome.malicious) {
            auto& p = settledParty(a);
            auto b = p.behavior();
            if (b == Behavior::SilentAfterAck || b == Behavior::NeverRespond) continue;
            due.emplace_back(hCha + p.config().delays.response, a);
        }
        std::vector<Digest> responses{cha.id};
        std::vector<Transaction> responseTxs;
        while (chain_->height() <= deadline) {
            for (const auto& [at, a] : due)
                if (at == chain_->height()) {
                    auto& p = settledParty(a);
                    auto env = p.inputEnvelope(E_.pk());
                    auto tx = p.tx(TxKind::Response, {{"id_p", rr.idp.hex()}, {"inputs", env.toJson()}});
                    responses.push_back(submit(p.name(), tx));
                    responseTxs.push_back(tx);
                }
            mine();
        }
        auto adj = E_.adjudicate(rr.idp, cha, responseTxs, chain_->buildPoP(E_.checkpoint(), responses));
        if (adj.resumed) return complete(rr);
        if (adj.punish) {
            for (const auto& a : adj.malicious) rr.malicious.push_back(nameOf(a));
            submit("exec", *adj.punish);
            mine();
            return;
        }
        abortFailed(rr, adj.failure);
    }

    void abortFailed(RoundReport& rr, const std::optional<std::string>& failure) {
        rr.failure = failure;
        mineUntil(rr.hCp + E_.tauRes());
        submit("exec", E_.emitAbort(rr.idp));
        mine();
    }

    void complete(RoundReport& rr) {
        auto com = E_.emitComplete(rr.idp);
        switch (cfg_.executor) {
            case ExecutorBehavior::Honest:
            case ExecutorBehavior::CrashAfterSettle:
                submit("exec", com);
                mine();
                if (chain_->receipt(com.id)->ok)
                    for (auto i : settledIdx_) rr.outputs[parties_[i].name()] = parties_[i].decryptOutputs(com.payload);
                break;
            case ExecutorBehavior::DropTxCom: break;
            case ExecutorBehavior::DelayBeyondTauCom: held_ = com; break;
        }
    }

    void distribute(RoundReport& rr) {
        const auto n = settledIdx_.size();
        auto status = [&] { return chain_->world().proposal(rr.idp)->status; };
        auto limit = rr.hCp + E_.tauCom() + n + 5;
        auto release = rr.hCp + E_.tauCom() + n + 1;
        std::set<std::size_t> claimed;
        while (status() == chain::ProposalStatus::Settle && chain_->height() < limit) {
            auto next = chain_->height() + 1;
            for (std::size_t k = 0; k < n; ++k) {
                auto& p = parties_[settledIdx_[k]];
                if (p.behavior() == Behavior::SilentAfterAck || claimed.count(k) || next <= rr.hCp + E_.tauCom() + k) continue;
                claimed.insert(k);
                submit(p.name(), p.tx(TxKind::Timeout, {{"id_p", rr.idp.hex()}}));
                break;
            }
            if (held_ && next > release) {
                submit("exec", *held_);
                held_.reset();
            }
            mine();
        }
        if (held_) {
            submit("exec", *held_);
            held_.reset();
            mine();
        }
        switch (status()) {
            case chain::ProposalStatus::Complete: rr.outcome = Outcome::Complete; break;
            case chain::ProposalStatus::Abort: rr.outcome = Outcome::Abort; break;
            case chain::ProposalStatus::Timeout: rr.outcome = Outcome::Timeout; break;
            case chain::ProposalStatus::Settle: rr.outcome = Outcome::Stalled; break;
        }
        settledIdx_.clear();
    }

    const ScenarioConfig& cfg_;
    codegen::Artifacts art_;
    std::shared_ptr<chain::Chain> chain_;
    crypto::KeyPair exec_;
    std::uint64_t execNonce_ = 0;
    Enclave E_;
    std::map<std::string, Address> names_;
    std::vector<PartyClient> parties_;
    Address adrV_;
    chain::Coins deposited_ = 0;
    std::vector<std::size_t> settledIdx_;
    std::optional<Transaction> held_;
    RunResult out_;
};

}  // namespace

RunResult runScenario(const ScenarioConfig& cfg) {
    if (cfg.parties.empty()) throw ScenarioError("scenario.parties: empty");
    if (cfg.proposer >= cfg.parties.size()) throw ScenarioError("scenario.proposer: out of range");
    return Runner(cfg).run();
}

}  // namespace cloak::protocol
