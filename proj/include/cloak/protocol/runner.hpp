// Deterministic scheduler for one scenario: global setup, then per round
// negotiation, execution with challenge-response, and distribution. One tick
// is one mined block.
#pragma once

#include "cloak/chain/chain.hpp"
#include "cloak/enclave/enclave.hpp"
#include "cloak/protocol/scenario.hpp"

namespace cloak::protocol {

enum class Outcome { Complete, Abort, Timeout, NotSettled, Stalled };
std::string_view outcomeName(Outcome o);
/// Process exit code of `cloakc run` for an outcome.
int exitCodeFor(Outcome o);

struct RoundReport {
    Digest idp;
    Outcome outcome = Outcome::NotSettled;
    std::vector<std::string> parties;  // settled party names, in order
    std::map<std::string, std::size_t> txCount;  // per-MPT txs by kind
    std::size_t mptTxs = 0;
    std::size_t setupTxs = 0;  // setup txs mined during this round
    std::vector<std::string> malicious;
    std::optional<std::string> failure;
    std::uint64_t hCp = 0;
    std::map<std::string, chain::Coins> coinsBefore, coinsAfter;
    /// Per party: return values it can read, by name.
    std::map<std::string, json> outputs;

    json toJson() const;
};

/// A message between actors, kept for the confidentiality scan.
struct Message {
    std::string from;
    std::string to;
    std::string kind;
    json body;
};

struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::Complete;
    std::map<std::string, Address> addresses;  // party names plus "exec"
    std::uint64_t tauRes = 0, tauCom = 0;
    std::size_t setupTxs = 0;
    std::vector<RoundReport> rounds;
    std::map<std::string, chain::Coins> deposits, finalCoins;
    bool conserved = false;
    std::vector<std::string> warnings;

    json toJson() const;
};

/// Everything a run produced: the report plus the chain and message log.
struct RunResult {
    RunReport report;
    std::shared_ptr<const chain::Chain> chain;
    std::vector<Message> messages;
    std::string traceJsonl() const { return chain->traceJsonl(); }
};

/// Throws ScenarioError when the contract does not compile or the
/// configuration does not fit it.
RunResult runScenario(const ScenarioConfig& cfg);

/// The key pairs a scenario uses; they depend on labels only, not the seed.
crypto::KeyPair partyKeys(const PartyConfig& p);
crypto::KeyPair executorKeys();

}  // namespace cloak::protocol
