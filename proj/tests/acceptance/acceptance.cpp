// Acceptance run: one PASS/FAIL line per criterion, with timings.
#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "cloak/codegen/verifier.hpp"
#include "cloak/frontend/parser.hpp"
#include "cloak/interp/interpreter.hpp"
#include "cloak/protocol/audit.hpp"
#include "cloak/protocol/party.hpp"
#include "cloak/protocol/runner.hpp"

using namespace cloak;
using namespace cloak::protocol;
using json = nlohmann::json;
using chain::TxKind;
using interp::Value;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kContract = "contracts/supply_chain.cloak";

/// Tenderer T plus one supplier per bid.
ScenarioConfig tender(const std::vector<std::uint64_t>& bids, std::uint64_t seed = 1) {
    ScenarioConfig c;
    c.name = "tender";
    c.contract = kContract;
    c.function = "biddingProcure";
    c.q = 90;
    c.tN = 5;
    c.tE = 3;
    c.seed = seed;
    c.parties.push_back({"T", "T", {{"tenderer", "@T"}}, Behavior::Honest, {}, 1000});
    for (std::size_t i = 0; i < bids.size(); ++i) {
        auto name = "S" + std::to_string(i);
        c.parties.push_back({name, name, {{"tenderer", "@T"}, {"bids", bids[i]}}, Behavior::Honest, {}, 1000});
    }
    c.initialState = {{"balances", {{"@T", std::uint64_t(1) << 40}}}, {"mPrice", 0}};
    return c;
}

struct MatrixCase {
    ScenarioConfig cfg;
    std::size_t bad = 0;  // index of the misbehaving party
};

const std::vector<std::uint64_t> kSentinels{271828182, 314159265, 161803398, 141421356, 173205080};

/// {behaviour} x {executor behaviour} x n in {2, 3} x {last supplier, proposer}.
std::vector<MatrixCase> matrix() {
    std::vector<MatrixCase> out;
    for (std::size_t n : {2, 3})
        for (auto b : kAllBehaviors)
            for (auto e : kAllExecutorBehaviors)
                for (bool proposer : {false, true}) {
                    std::vector<std::uint64_t> bids(kSentinels.begin(), kSentinels.begin() + static_cast<std::ptrdiff_t>(n - 1));
                    MatrixCase m{tender(bids, 100 + out.size()), proposer ? 0 : n - 1};
                    m.cfg.name = std::string(behaviorName(b)) + "/" + std::string(executorBehaviorName(e)) + "/n" + std::to_string(n) +
                                 (proposer ? "/proposer" : "");
                    m.cfg.parties[m.bad].behavior = b;
                    m.cfg.executor = e;
                    out.push_back(std::move(m));
                }
    return out;
}

const std::vector<std::pair<MatrixCase, RunResult>>& matrixRuns() {
    static const auto runs = [] {
        std::vector<std::pair<MatrixCase, RunResult>> out;
        for (auto& m : matrix()) {
            auto r = runScenario(m.cfg);
            out.emplace_back(std::move(m), std::move(r));
        }
        return out;
    }();
    return runs;
}

// 1 ------------------------------------------------------------------------

Verdict compilerFidelity() {
    auto a = codegen::compile(frontend::parseSource(readFile(kContract)));
    if (!a.ok()) return {false, "Listing 1 does not type-check"};
    auto golden = readFile("tests/acceptance/golden/supply_chain.policy.json");
    bool exact = a.policyJson + "\n" == golden;
    const auto* f = a.policy.function("biddingProcure");
    const auto* m = a.policy.state("mPrice");
    const auto* b = a.policy.state("balances");
    bool mpt = f && f->kind == typecheck::FunctionKind::MPT;
    bool pub = m && m->type.owner == frontend::OwnerAtom::all();
    bool keyed = b && b->type.data.kind == frontend::DataType::Kind::NamedMapping && b->type.data.value->owner.kind == frontend::OwnerAtom::Kind::Named &&
                 b->type.data.value->owner.name == b->type.data.tag;
    std::ostringstream d;
    d << "golden " << (exact ? "match" : "MISMATCH") << ", biddingProcure " << (mpt ? "MPT" : "not MPT") << ", mPrice " << (pub ? "public" : "not public")
      << ", balances values " << (keyed ? "owned by their key" : "not key-owned");
    return {exact && mpt && pub && keyed, d.str()};
}

// 2 ------------------------------------------------------------------------

std::string renameIdents(std::string src, const json& names) {
    for (const auto& [from, to] : names.items()) src = std::regex_replace(src, std::regex("\\b" + from + "\\b"), to.get<std::string>());
    return src;
}

json kindsOf(const json& fx) {
    return fx.contains("kinds") && fx["kinds"].is_object() ? fx["kinds"] : json::object();
}

Verdict typingRules() {
    auto fixtures = json::parse(readFile("tests/acceptance/typing_fixtures.json")).at("fixtures");
    std::size_t ok = 0, renamedOk = 0;
    std::set<std::string> rules, branches;
    std::vector<std::string> bad;
    auto judge = [&](const json& fx, const std::string& src) {
        auto c = typecheck::checkContract(frontend::parseSource(src));
        if (c.ok() != fx.at("accept").get<bool>()) return false;
        if (fx.contains("code") && fx["code"].is_string()) {
            bool found = std::any_of(c.diagnostics.begin(), c.diagnostics.end(), [&](const auto& d) { return d.isError() && d.code == fx.at("code"); });
            if (!found) return false;
        }
        auto kinds = kindsOf(fx);
        for (const auto& [fn, kind] : kinds.items())
            if (!c.function(fn) || typecheck::kindName(c.kindOf(fn)) != kind.get<std::string>()) return false;
        return true;
    };
    for (const auto& fx : fixtures) {
        rules.insert(fx.at("rule").get<std::string>());
        auto kinds = kindsOf(fx);
        for (const auto& [fn, kind] : kinds.items()) {
            auto k = kind.get<std::string>();
            if (k == "MPT" && fx.at("source").get<std::string>().find("@tee") != std::string::npos) branches.insert("MPT(tee)");
            else branches.insert(k);
        }
        auto src = fx.at("source").get<std::string>();
        if (judge(fx, src)) ++ok;
        else bad.push_back(fx.at("name"));
        auto renamed = renameIdents(src, fx.at("rename"));
        if (renamed != src && judge(fx, renamed)) ++renamedOk;
        else bad.push_back(fx.at("name").get<std::string>() + " (renamed)");
    }
    bool coverage = fixtures.size() >= 12 && rules.count("reduce") && rules.count("assign") && rules.count("reveal") && branches.count("PUT") &&
                    branches.count("PRT") && branches.count("MPT") && branches.count("MPT(tee)");
    std::ostringstream d;
    d << ok << "/" << fixtures.size() << " fixtures as the rules dictate, " << renamedOk << "/" << fixtures.size() << " alpha-renamed invariant";
    if (!coverage) d << ", rule coverage incomplete";
    for (const auto& b : bad) d << "; failed " << b;
    return {ok == fixtures.size() && renamedOk == fixtures.size() && coverage, d.str()};
}

// 3 ------------------------------------------------------------------------

Verdict honestTxCount() {
    std::ostringstream d;
    bool pass = true;
    for (std::size_t n : {2, 3, 6}) {
        std::vector<std::uint64_t> bids;
        for (std::size_t i = 1; i < n; ++i) bids.push_back(10 + 7 * i % 5 + i);
        auto cfg = tender(bids);
        cfg.rounds = 2;
        auto t0 = std::chrono::steady_clock::now();
        auto r = runScenario(cfg).report;
        auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        const auto& a = r.rounds.at(0);
        const auto& b = r.rounds.at(1);
        std::map<std::string, std::size_t> two{{"TX_p", 1}, {"TX_com", 1}};
        bool ok = a.outcome == Outcome::Complete && b.outcome == Outcome::Complete && a.txCount == two && b.txCount == two && a.setupTxs == 0 &&
                  b.setupTxs == 0 && r.setupTxs == 5 + 2 * n && ms < 5000;
        pass = pass && ok;
        d << (d.tellp() ? "; " : "") << "n=" << n << ": " << a.mptTxs << "+" << b.mptTxs << " per-MPT txs, setup " << r.setupTxs << " then "
          << b.setupTxs << " (" << static_cast<int>(ms) << " ms)";
    }
    return {pass, d.str()};
}

// 4 ------------------------------------------------------------------------

struct Oracle {
    std::size_t winner;
    std::uint64_t second;
};

/// Sort, argmin, second minimum.
Oracle bruteForce(const std::vector<std::uint64_t>& bids) {
    auto sorted = bids;
    std::sort(sorted.begin(), sorted.end());
    auto winner = static_cast<std::size_t>(std::min_element(bids.begin(), bids.end()) - bids.begin());
    return {winner, sorted.size() > 1 ? sorted[1] : sorted[0]};
}

/// Line-by-line transcription of the contract body.
Oracle transcription(const std::vector<std::uint64_t>& bids) {
    std::size_t winner = 0;
    std::uint64_t mPrice = bids[0], sPrice = bids[0];
    for (std::size_t i = 1; i < bids.size(); ++i) {
        if (bids[i] < mPrice) {
            winner = i;
            sPrice = mPrice;
            mPrice = bids[i];
        } else if (bids[i] < sPrice) {
            sPrice = bids[i];
        }
    }
    return {winner, sPrice};
}

std::string bidSummary(const std::vector<std::uint64_t>& b) {
    std::string s = "[";
    for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + std::to_string(b[i]);
    return s + "]";
}

Verdict mptResult(std::vector<std::string>& info) {
    auto art = codegen::compile(frontend::parseSource(readFile(kContract)));
    const auto& fn = art.privateContract.functions.at(0);
    crypto::DetRng rng(crypto::seedFromLabel("criterion 4 bids"));
    std::vector<Address> addrs;
    for (int i = 0; i < 9; ++i) addrs.push_back(crypto::keygen(crypto::seedFromLabel("bidder " + std::to_string(i))).addr);
    const Address& T = addrs[8];

    std::size_t winners = 0, seconds = 0, conserved = 0, transcribed = 0, firstIsMin = 0, mismatchFirstIsMin = 0;
    std::string example;
    const std::size_t N = 100;
    for (std::size_t k = 0; k < N; ++k) {
        auto n = static_cast<std::size_t>(rng.range(2, 8));
        std::vector<std::uint64_t> bids;
        for (std::size_t i = 0; i < n; ++i) bids.push_back(rng.range(0, (std::uint64_t(1) << 32) - 1));
        interp::ArrayV ps, bs;
        for (std::size_t i = 0; i < n; ++i) {
            ps.items.emplace_back(addrs[i]);
            bs.items.push_back(Value::u(bids[i]));
        }
        interp::StateStore s;
        s.write(interp::CellId::entry("balances", Value(T)), Value::u(std::uint64_t(1) << 40));
        for (std::size_t i = 0; i < n; ++i) s.write(interp::CellId::entry("balances", Value(addrs[i])), Value::u(rng.range(0, 1000)));
        auto r = interp::execFunction(art.privateContract, fn, s, {{"parties", Value(ps)}, {"bids", Value(bs)}, {"tenderer", Value(T)}}, T);
        if (!r.ok()) continue;

        auto oracle = bruteForce(bids);
        auto line = transcription(bids);
        Value w = r.returns.at("winner"), p = r.returns.at("sPrice");
        bool wOk = w == Value(addrs[oracle.winner]);
        bool pOk = p == Value::u(oracle.second);
        winners += wOk;
        seconds += pOk;
        transcribed += (w == Value(addrs[line.winner]) && p == Value::u(line.second));
        bool strictMinFirst = std::count(bids.begin(), bids.end(), bids[0]) == 1 && oracle.winner == 0;
        firstIsMin += strictMinFirst;
        if (!pOk) {
            mismatchFirstIsMin += strictMinFirst;
            if (example.empty()) example = bidSummary(bids) + " gives sPrice " + p.str() + ", second minimum " + std::to_string(oracle.second);
        }

        interp::U256 before = 0, after = 0;
        for (const auto& [cell, v] : s.cells()) before += v.asU256();
        for (const auto& [cell, v] : r.newState.cells()) after += v.asU256();
        conserved += before == after;
    }
    info.push_back("criterion 4: interpreter equals a line-by-line transcription of the contract on " + std::to_string(transcribed) + "/" +
                   std::to_string(N) + " vectors");
    info.push_back("criterion 4: second-price mismatches occur exactly when bids[0] is the strict minimum: " + std::to_string(mismatchFirstIsMin) +
                   " of " + std::to_string(N - seconds) + " mismatches, " + std::to_string(firstIsMin) + " such vectors");
    std::ostringstream d;
    d << "winner " << winners << "/" << N << ", second price " << seconds << "/" << N << ", balance sum conserved " << conserved << "/" << N;
    if (!example.empty()) d << "; e.g. " << example;
    return {winners == N && seconds == N && conserved == N, d.str()};
}

// 5 ------------------------------------------------------------------------

Verdict refunds() {
    std::vector<std::string> bad;
    auto eq = [](chain::Rational r, chain::Coins v) { return r.num == v * r.den; };
    if (!eq(chain::punishRefund(90, 3, 1), 120)) bad.push_back("punish(90,3,1)");
    if (!eq(chain::timeoutRefund(100, 2), 150)) bad.push_back("timeout(100,2)");

    // Floor-remainder rule and exact totals over a sweep.
    std::vector<Address> rs;
    for (int i = 0; i < 10; ++i) rs.push_back(crypto::keygen(crypto::seedFromLabel("recipient " + std::to_string(i))).addr);
    std::size_t sweeps = 0;
    for (chain::Coins q = 1; q <= 120; ++q)
        for (std::size_t n = 1; n <= 8; ++n)
            for (std::size_t m = 0; m <= n; ++m) {
                std::vector<Address> honest(rs.begin(), rs.begin() + static_cast<std::ptrdiff_t>(n - m + 1));
                auto split = chain::splitRefund(q * (n + 1), honest);
                chain::Coins total = 0;
                auto share = chain::punishRefund(q, n, m);
                for (std::size_t i = 0; i < split.size(); ++i) {
                    total += split[i].second;
                    chain::Coins floor = share.num / share.den;
                    if (i > 0 && split[i].second != floor) bad.push_back("floor share");
                }
                if (total != q * (n + 1)) bad.push_back("punish total");
                auto t = chain::splitRefund(q * (n + 1), std::vector<Address>(rs.begin(), rs.begin() + static_cast<std::ptrdiff_t>(n)));
                chain::Coins tt = 0;
                for (const auto& [a, v] : t) tt += v;
                if (tt != q * (n + 1)) bad.push_back("timeout total");
                ++sweeps;
            }

    // Redistribution in every terminal status of the scenario matrix.
    std::map<Outcome, std::size_t> seen;
    for (const auto& [m, r] : matrixRuns())
        for (const auto& rr : r.report.rounds) {
            if (rr.outcome != Outcome::Complete && rr.outcome != Outcome::Abort && rr.outcome != Outcome::Timeout) continue;
            ++seen[rr.outcome];
            chain::Coins credited = 0;
            for (const auto& name : rr.parties) credited += rr.coinsAfter.at(name) - (rr.coinsBefore.at(name) - m.cfg.q);
            credited += rr.coinsAfter.at("exec") - (rr.coinsBefore.at("exec") - m.cfg.q);
            if (credited != m.cfg.q * (rr.parties.size() + 1)) bad.push_back("redistribution in " + m.cfg.name);
        }
    std::ostringstream d;
    d << "punish(90,3,1) = " << chain::punishRefund(90, 3, 1).num / chain::punishRefund(90, 3, 1).den << ", timeout(100,2) = "
      << chain::timeoutRefund(100, 2).num / chain::timeoutRefund(100, 2).den << ", " << sweeps << " split sweeps, (n+1)q redistributed in "
      << seen[Outcome::Complete] << " COMPLETE / " << seen[Outcome::Abort] << " ABORT / " << seen[Outcome::Timeout] << " TIMEOUT rounds";
    if (!bad.empty()) d << "; first failure: " << bad.front() << " (" << bad.size() << " total)";
    return {bad.empty() && seen.size() == 3, d.str()};
}

// 6 ------------------------------------------------------------------------

Verdict fairness() {
    std::size_t checked = 0, punishedTraces = 0;
    std::vector<std::string> bad;
    for (const auto& [m, r] : matrixRuns()) {
        const auto& rr = r.report.rounds.at(0);
        std::set<std::string> dishonest;
        if (m.cfg.parties[m.bad].behavior != Behavior::Honest) dishonest.insert(m.cfg.parties[m.bad].name);
        if (m.cfg.executor != ExecutorBehavior::Honest) dishonest.insert("exec");
        for (const auto& [name, before] : rr.coinsBefore)
            if (!dishonest.count(name) && rr.coinsAfter.at(name) < before) bad.push_back(m.cfg.name + ": " + name + " lost coins");
        if (rr.outcome == Outcome::Abort || rr.outcome == Outcome::Timeout) {
            ++punishedTraces;
            bool hit = std::any_of(dishonest.begin(), dishonest.end(), [&](const auto& n) { return rr.coinsAfter.at(n) < rr.coinsBefore.at(n); });
            if (!hit) bad.push_back(m.cfg.name + ": no dishonest participant lost coins");
        }
        if (rr.outcome == Outcome::Stalled || rr.outcome == Outcome::NotSettled) bad.push_back(m.cfg.name + ": " + std::string(outcomeName(rr.outcome)));
        ++checked;
    }
    std::ostringstream d;
    d << checked << " traces, " << punishedTraces << " ABORT/TIMEOUT";
    if (!bad.empty()) d << "; " << bad.front() << " (" << bad.size() << " violations)";
    return {bad.empty() && checked == 80, d.str()};
}

// 7 ------------------------------------------------------------------------

std::vector<json::json_pointer> leaves(const json& j, const json::json_pointer& at = {}) {
    std::vector<json::json_pointer> out;
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            for (auto& p : leaves(v, at / k)) out.push_back(std::move(p));
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            for (auto& p : leaves(j[i], at / i)) out.push_back(std::move(p));
    } else {
        out.push_back(at);
    }
    return out;
}

json mutate(json payload, crypto::DetRng& rng) {
    auto ls = leaves(payload);
    auto& leaf = payload[ls[rng.range(0, ls.size() - 1)]];
    if (leaf.is_string()) {
        auto s = leaf.get<std::string>();
        if (s.empty()) {
            s = "00";
        } else {
            auto i = rng.range(0, s.size() - 1);
            const std::string hex = "0123456789abcdef";
            auto pos = hex.find(s[i]);
            s[i] = pos == std::string::npos ? 'z' : hex[(pos + 1 + rng.range(0, 14)) % 16];
        }
        leaf = s;
    } else if (leaf.is_number()) {
        leaf = leaf.get<std::uint64_t>() + 1 + rng.range(0, 9);
    } else {
        leaf = "mutated";
    }
    return payload;
}

/// The chain's own verdict: parse as the service does, then run its checks.
bool chainAccepts(const chain::World& w, const Address& sender, const json& p) {
    try {
        auto idp = Digest::fromHexString(p.at("id_p").get<std::string>());
        return !w.checkComplete(sender, idp, chain::Proof::fromJson(p.at("proof")), chain::entriesFromJson(p.at("c_s")),
                                chain::entriesFromJson(p.at("c_s_new")), chain::entriesFromJson(p.at("c_r")));
    } catch (const std::exception&) {
        return false;
    }
}

Verdict publicVerifiability() {
    std::size_t completes = 0, audited = 0;
    bool consistent = true;
    struct Valid {
        chain::World before;
        const chain::Transaction* tx;
    };
    std::vector<Valid> valid;
    for (const auto& [m, r] : matrixRuns()) {
        auto a = auditChain(*r.chain);
        consistent = consistent && a.consistent();
        for (const auto& e : a.completions) {
            audited += e.accepted;
            completes += e.chainOk;
            if (e.chainOk && valid.size() < 8) valid.push_back({worldBefore(*r.chain, e.txId), r.chain->findTx(e.txId)});
        }
    }
    if (valid.empty()) return {false, "no completed run to mutate"};

    crypto::DetRng rng(crypto::seedFromLabel("criterion 7 mutations"));
    std::size_t rejectedChain = 0, rejectedAudit = 0, validStillOk = 0;
    const std::size_t M = 1000;
    for (std::size_t k = 0; k < M; ++k) {
        const auto& v = valid[k % valid.size()];
        auto p = mutate(v.tx->payload, rng);
        rejectedChain += !chainAccepts(v.before, v.tx->sender, p);
        rejectedAudit += !acceptsCompletion(v.before, v.tx->sender, p);
    }
    for (const auto& v : valid) validStillOk += chainAccepts(v.before, v.tx->sender, v.tx->payload);

    // Replay of round 1's TX_com against the state advanced by round 1.
    auto cfg = tender({5, 3, 7});
    cfg.rounds = 2;
    auto two = runScenario(cfg);
    std::vector<const chain::Transaction*> coms;
    for (const auto* tx : two.chain->transactions())
        if (tx->kind == TxKind::Complete) coms.push_back(tx);
    bool replayRejected = false;
    if (coms.size() == 2) {
        auto w = worldBefore(*two.chain, coms[1]->id);
        auto replay = coms[0]->payload;
        replay["id_p"] = coms[1]->payload["id_p"];
        auto idp = Digest::fromHexString(replay["id_p"].get<std::string>());
        auto why = w.checkComplete(coms[1]->sender, idp, chain::Proof::fromJson(replay["proof"]), chain::entriesFromJson(replay["c_s"]),
                                   chain::entriesFromJson(replay["c_s_new"]), chain::entriesFromJson(replay["c_r"]));
        const auto* rec = w.proposal(idp);
        bool hCsDiffers = chain::Proof::fromJson(replay["proof"]).hCs != w.verifier(rec->V)->stateDigest();
        replayRejected = why == chain::RevertReason::ProofRejected && hCsDiffers && !acceptsCompletion(w, coms[1]->sender, replay) &&
                         !chainAccepts(two.chain->world(), coms[0]->sender, coms[0]->payload);
    }
    std::ostringstream d;
    d << "auditor agrees with chain on all runs: " << (consistent ? "yes" : "NO") << ", " << audited << "/" << completes
      << " COMPLETE transitions accepted; " << rejectedChain << "/" << M << " mutations rejected by the verifier, " << rejectedAudit << "/" << M
      << " by the auditor; replay rejected (stale state digest): " << (replayRejected ? "yes" : "NO");
    return {consistent && completes > 0 && audited == completes && rejectedChain == M && rejectedAudit == M && validStillOk == valid.size() &&
                replayRejected,
            d.str()};
}

// 8 ------------------------------------------------------------------------

std::vector<std::string> sentinelForms(std::uint64_t v) {
    auto be = interp::toBigEndian(interp::U256(v));
    std::ostringstream h;
    h << std::hex << v;
    return {std::to_string(v), toHex(ByteView(be.data(), be.size())), h.str()};
}

Verdict confidentiality() {
    std::vector<std::string> forms;
    for (auto s : kSentinels)
        for (auto& f : sentinelForms(s)) forms.push_back(f);
    std::size_t payloads = 0, messages = 0, ciphertexts = 0;
    std::vector<std::string> leaks;
    auto scan = [&](const std::string& where, const std::string& text) {
        for (const auto& f : forms)
            if (text.find(f) != std::string::npos) leaks.push_back(where + " contains " + f);
    };
    // The scanner must see the plaintext inputs themselves.
    std::size_t control = 0;
    for (auto sv : kSentinels) {
        auto before = leaks.size();
        auto be = interp::toBigEndian(interp::U256(sv));
        scan("control", json{{"bids", sv}}.dump() + toHex(ByteView(be.data(), be.size())));
        control += leaks.size() - before;
        leaks.resize(before);
    }
    for (const auto& [m, r] : matrixRuns()) {
        std::vector<crypto::KeyPair> keys{executorKeys()};
        for (const auto& p : m.cfg.parties) keys.push_back(partyKeys(p));
        auto nonOwnersFail = [&](const std::string& where, const std::string& owner, const crypto::Ciphertext& c) {
            ++ciphertexts;
            for (const auto& k : keys) {
                if (k.addr.str() == owner) continue;
                try {
                    crypto::open(k, c);
                    leaks.push_back(where + ": opened by a non-owner");
                } catch (const crypto::DecryptError&) {
                }
            }
        };
        for (const auto* tx : r.chain->transactions()) {
            ++payloads;
            scan(m.cfg.name + " " + std::string(chain::txKindName(tx->kind)), tx->toJson().dump());
            std::vector<chain::CommitEntry> es;
            const auto& p = tx->payload;
            if (p.contains("state_init")) es = chain::entriesFromJson(p["state_init"]["cells"]);
            for (const char* k : {"c_s", "c_s_new", "c_r"})
                if (p.contains(k))
                    for (auto& e : chain::entriesFromJson(p[k])) es.push_back(e);
            for (const auto& e : es)
                if (e.owner != "all") nonOwnersFail(m.cfg.name + " " + e.var, e.owner, crypto::Ciphertext::deserialize(e.data));
            if (tx->kind == TxKind::Response) {
                auto env = enclave::Envelope::fromJson(p["inputs"]);
                for (const auto& k : keys)
                    try {
                        enclave::unseal(k, env);
                        leaks.push_back(m.cfg.name + " TX_res: opened by a non-recipient");
                    } catch (const std::exception&) {
                    }
            }
        }
        for (const auto& msg : r.messages) {
            ++messages;
            scan(m.cfg.name + " message " + msg.kind, msg.body.dump());
            if (msg.kind == "inputs") {
                auto env = enclave::Envelope::fromJson(msg.body);
                for (const auto& k : keys)
                    try {
                        enclave::unseal(k, env);
                        leaks.push_back(m.cfg.name + " inputs: opened by a non-recipient");
                    } catch (const std::exception&) {
                    }
            }
        }
    }
    std::ostringstream d;
    d << payloads << " on-chain payloads and " << messages << " messages scanned for " << kSentinels.size() << " sentinels, " << ciphertexts
      << " owned ciphertexts tried with every non-owner key";
    if (!leaks.empty()) d << "; " << leaks.front() << " (" << leaks.size() << " leaks)";
    if (control < 2 * kSentinels.size()) d << "; scanner self-check failed";
    return {leaks.empty() && payloads > 0 && control >= 2 * kSentinels.size(), d.str()};
}

// 9 ------------------------------------------------------------------------

Verdict determinism() {
    std::size_t identical = 0, shapeEqual = 0, total = 0, honestHeightsEqual = 0, honest = 0;
    std::vector<std::string> bad;
    for (const auto& [m, r] : matrixRuns()) {
        ++total;
        auto again = runScenario(m.cfg);
        if (again.traceJsonl() == r.traceJsonl() && again.report.toJson() == r.report.toJson()) ++identical;
        else bad.push_back(m.cfg.name + ": equal seeds differ");

        auto other = m.cfg;
        other.seed += 1000;
        auto o = runScenario(other);
        const auto &a = r.chain->trace(), &b = o.chain->trace();
        bool shape = a.size() == b.size();
        bool heights = shape;
        for (std::size_t i = 0; shape && i < a.size(); ++i) {
            shape = a[i].kind == b[i].kind && a[i].sender == b[i].sender && a[i].status == b[i].status;
            heights = heights && a[i].height == b[i].height;
        }
        const auto &ra = r.report.rounds.at(0), &rb = o.report.rounds.at(0);
        shape = shape && ra.outcome == rb.outcome && ra.txCount == rb.txCount && ra.coinsAfter == rb.coinsAfter && ra.malicious == rb.malicious &&
                ra.idp != rb.idp && r.traceJsonl() != o.traceJsonl();
        shapeEqual += shape;
        if (!shape) bad.push_back(m.cfg.name + ": a different seed changed more than randomness-derived fields");
        if (m.cfg.parties[m.bad].behavior == Behavior::Honest && m.cfg.executor == ExecutorBehavior::Honest) {
            ++honest;
            honestHeightsEqual += heights;
        }
    }
    std::ostringstream d;
    d << identical << "/" << total << " byte-identical reruns; with another seed " << shapeEqual << "/" << total
      << " differ only in id_p, randomness and deadline-driven heights (honest runs keep every height: " << honestHeightsEqual << "/" << honest << ")";
    if (!bad.empty()) d << "; " << bad.front();
    return {identical == total && shapeEqual == total && honestHeightsEqual == honest, d.str()};
}

struct Criterion {
    int id;
    const char* name;
    double limitMs;
    std::function<Verdict(std::vector<std::string>&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    auto plain = [](Verdict (*f)()) { return [f](std::vector<std::string>&) { return f(); }; };
    std::vector<Criterion> all{
        {1, "compiler fidelity", 1000, plain(compilerFidelity)},
        {2, "typing rules", 1000, plain(typingRules)},
        {3, "honest-path transaction count", 15000, plain(honestTxCount)},
        {4, "MPT result against brute force", 10000, mptResult},
        {5, "refund formulas", 1000, plain(refunds)},
        {6, "financial fairness", 30000, plain(fairness)},
        {7, "public verifiability", 10000, plain(publicVerifiability)},
        {8, "confidentiality scan", 10000, plain(confidentiality)},
        {9, "determinism", 5000, plain(determinism)},
    };

    double matrixMs = 0;
    bool ok = true;
    for (const auto& c : all) {
        if (only && c.id != only) continue;
        // The shared scenario matrix is run once and billed to criterion 6.
        if (c.id >= 5 && matrixMs == 0) {
            auto m0 = std::chrono::steady_clock::now();
            matrixRuns();
            matrixMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - m0).count();
        }
        std::vector<std::string> info;
        auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run(info);
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (c.id == 6) ms += matrixMs;
        bool inTime = ms <= c.limitMs;
        bool pass = v.pass && inTime;
        ok = ok && pass;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << v.detail << " [" << static_cast<long>(ms) << " ms, limit "
                  << static_cast<long>(c.limitMs) << " ms" << (inTime ? "" : ", OVER LIMIT") << "]\n";
        for (const auto& i : info) std::cout << "INFO " << i << "\n";
    }
    if (!only)
        std::cout << "NOTE criterion 10 (gas costs and wall-clock latencies): not reproducible at desk scale; covered instead by criteria 3 and 5-8\n";
    return ok ? 0 : 1;
}
