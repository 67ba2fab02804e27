// Scenario files: who takes part, what each party supplies and how it
// behaves, the executor host's behaviour and the run parameters.
#pragma once

#include <map>
#include <set>
#include <optional>
#include <stdexcept>

#include "cloak/chain/service.hpp"
#include "json.hpp"

namespace cloak::protocol {

using json = nlohmann::json;

class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Behavior { Honest, SilentAfterAck, MismatchedInputs, RespondToChallenge, NeverRespond };
enum class ExecutorBehavior { Honest, DropTxCom, CrashAfterSettle, DelayBeyondTauCom };

std::string_view behaviorName(Behavior b);
std::optional<Behavior> behaviorFromName(std::string_view s);
std::string_view executorBehaviorName(ExecutorBehavior b);
std::optional<ExecutorBehavior> executorBehaviorFromName(std::string_view s);

inline constexpr Behavior kAllBehaviors[] = {Behavior::Honest, Behavior::SilentAfterAck, Behavior::MismatchedInputs, Behavior::RespondToChallenge,
                                             Behavior::NeverRespond};
inline constexpr ExecutorBehavior kAllExecutorBehaviors[] = {ExecutorBehavior::Honest, ExecutorBehavior::DropTxCom, ExecutorBehavior::CrashAfterSettle,
                                                             ExecutorBehavior::DelayBeyondTauCom};

/// Ticks (blocks) a party waits before each of its actions.
struct Delays {
    std::uint64_t ack = 0;
    std::uint64_t input = 0;
    std::uint64_t response = 0;
};

struct PartyConfig {
    std::string name;
    std::string seed;  // key label; defaults to the name
    json params = json::object();
    Behavior behavior = Behavior::Honest;
    Delays delays;
    chain::Coins deposit = 1000;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::string contract;                 // path, relative to the working directory
    std::optional<std::string> source;    // inline source instead of a path
    std::string function;
    std::vector<PartyConfig> parties;
    std::size_t proposer = 0;
    chain::Coins q = 10;
    std::uint64_t tN = 5;
    std::uint64_t tE = 5;
    ExecutorBehavior executor = ExecutorBehavior::Honest;
    chain::Coins executorDeposit = 1000;
    std::uint64_t seed = 0;
    json initialState = json::object();
    std::size_t rounds = 1;
    std::size_t minParties = 1;
    bool requireAllInputs = true;

    json toJson() const;
    /// Throws ScenarioError naming the offending field.
    static ScenarioConfig fromJson(const json& j);
    std::optional<std::size_t> partyIndex(std::string_view name) const;
};

ScenarioConfig loadScenario(const std::string& path);

/// Replaces every "@name" string with that party's address.
json resolveRefs(const json& j, const std::map<std::string, Address>& names);

}  // namespace cloak::protocol
