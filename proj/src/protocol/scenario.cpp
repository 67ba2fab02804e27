#include "cloak/protocol/scenario.hpp"

#include <fstream>

namespace cloak::protocol {

namespace {

constexpr std::pair<Behavior, std::string_view> kBehaviorNames[] = {
    {Behavior::Honest, "Honest"},
    {Behavior::SilentAfterAck, "SilentAfterAck"},
    {Behavior::MismatchedInputs, "MismatchedInputs"},
    {Behavior::RespondToChallenge, "RespondToChallenge"},
    {Behavior::NeverRespond, "NeverRespond"},
};
constexpr std::pair<ExecutorBehavior, std::string_view> kExecutorNames[] = {
    {ExecutorBehavior::Honest, "Honest"},
    {ExecutorBehavior::DropTxCom, "DropTxCom"},
    {ExecutorBehavior::CrashAfterSettle, "CrashAfterSettle"},
    {ExecutorBehavior::DelayBeyondTauCom, "DelayBeyondTauCom"},
};

template <class T>
T field(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ScenarioError(where + "." + key + ": wrong type");
    }
}

std::uint64_t count(const json& j, const char* key, std::uint64_t fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_unsigned()) throw ScenarioError(where + "." + key + ": expected a non-negative integer");
    return j.at(key).get<std::uint64_t>();
}

const std::set<std::string> kTopKeys{"name",     "contract", "source", "function", "parties",     "proposer",  "q",           "t_n", "t_e",
                                     "executor", "seed",     "state",  "rounds",   "min_parties", "require_all_inputs"};
const std::set<std::string> kPartyKeys{"name", "seed", "params", "behavior", "delays", "deposit"};

void rejectUnknown(const json& j, const std::set<std::string>& keys, const std::string& where) {
    for (const auto& [k, v] : j.items())
        if (!keys.count(k)) throw ScenarioError(where + ": unknown field '" + k + "'");
}

}  // namespace

std::string_view behaviorName(Behavior b) {
    for (const auto& [v, n] : kBehaviorNames)
        if (v == b) return n;
    return "?";
}

std::optional<Behavior> behaviorFromName(std::string_view s) {
    for (const auto& [v, n] : kBehaviorNames)
        if (n == s) return v;
    return std::nullopt;
}

std::string_view executorBehaviorName(ExecutorBehavior b) {
    for (const auto& [v, n] : kExecutorNames)
        if (v == b) return n;
    return "?";
}

std::optional<ExecutorBehavior> executorBehaviorFromName(std::string_view s) {
    for (const auto& [v, n] : kExecutorNames)
        if (n == s) return v;
    return std::nullopt;
}

json ScenarioConfig::toJson() const {
    json ps = json::array();
    for (const auto& p : parties)
        ps.push_back({{"name", p.name},
                      {"seed", p.seed},
                      {"params", p.params},
                      {"behavior", behaviorName(p.behavior)},
                      {"delays", {{"ack", p.delays.ack}, {"input", p.delays.input}, {"response", p.delays.response}}},
                      {"deposit", p.deposit}});
    json j{{"name", name},
           {"function", function},
           {"parties", ps},
           {"proposer", parties.empty() ? "" : parties.at(proposer).name},
           {"q", q},
           {"t_n", tN},
           {"t_e", tE},
           {"executor", {{"behavior", executorBehaviorName(executor)}, {"deposit", executorDeposit}}},
           {"seed", seed},
           {"state", initialState},
           {"rounds", rounds},
           {"min_parties", minParties},
           {"require_all_inputs", requireAllInputs}};
    if (source) j["source"] = *source;
    else j["contract"] = contract;
    return j;
}

ScenarioConfig ScenarioConfig::fromJson(const json& j) {
    if (!j.is_object()) throw ScenarioError("scenario: expected an object");
    rejectUnknown(j, kTopKeys, "scenario");
    ScenarioConfig c;
    c.name = field<std::string>(j, "name", c.name, "scenario");
    if (j.contains("source")) c.source = field<std::string>(j, "source", "", "scenario");
    c.contract = field<std::string>(j, "contract", "", "scenario");
    if (c.contract.empty() && !c.source) throw ScenarioError("scenario.contract: required");
    c.function = field<std::string>(j, "function", "", "scenario");
    if (c.function.empty()) throw ScenarioError("scenario.function: required");

    if (!j.contains("parties") || !j.at("parties").is_array() || j.at("parties").empty())
        throw ScenarioError("scenario.parties: expected a non-empty array");
    std::size_t idx = 0;
    for (const auto& pj : j.at("parties")) {
        std::string where = "scenario.parties[" + std::to_string(idx++) + "]";
        if (!pj.is_object()) throw ScenarioError(where + ": expected an object");
        rejectUnknown(pj, kPartyKeys, where);
        PartyConfig p;
        p.name = field<std::string>(pj, "name", "", where);
        if (p.name.empty()) throw ScenarioError(where + ".name: required");
        if (c.partyIndex(p.name)) throw ScenarioError(where + ".name: duplicate '" + p.name + "'");
        if (p.name == "exec") throw ScenarioError(where + ".name: 'exec' is reserved");
        p.seed = field<std::string>(pj, "seed", p.name, where);
        p.params = pj.value("params", json::object());
        if (!p.params.is_object()) throw ScenarioError(where + ".params: expected an object");
        auto b = field<std::string>(pj, "behavior", "Honest", where);
        auto bv = behaviorFromName(b);
        if (!bv) throw ScenarioError(where + ".behavior: unknown '" + b + "'");
        p.behavior = *bv;
        if (pj.contains("delays")) {
            const auto& d = pj.at("delays");
            if (!d.is_object()) throw ScenarioError(where + ".delays: expected an object");
            rejectUnknown(d, {"ack", "input", "response"}, where + ".delays");
            p.delays = {count(d, "ack", 0, where + ".delays"), count(d, "input", 0, where + ".delays"), count(d, "response", 0, where + ".delays")};
        }
        p.deposit = count(pj, "deposit", p.deposit, where);
        c.parties.push_back(std::move(p));
    }

    if (j.contains("proposer")) {
        const auto& pr = j.at("proposer");
        if (pr.is_string()) {
            auto i = c.partyIndex(pr.get<std::string>());
            if (!i) throw ScenarioError("scenario.proposer: no party named '" + pr.get<std::string>() + "'");
            c.proposer = *i;
        } else if (pr.is_number_unsigned()) {
            c.proposer = pr.get<std::size_t>();
        } else {
            throw ScenarioError("scenario.proposer: expected a party name or index");
        }
        if (c.proposer >= c.parties.size()) throw ScenarioError("scenario.proposer: out of range");
    }
    c.q = count(j, "q", c.q, "scenario");
    c.tN = count(j, "t_n", c.tN, "scenario");
    c.tE = count(j, "t_e", c.tE, "scenario");
    if (j.contains("executor")) {
        const auto& e = j.at("executor");
        if (e.is_string()) {
            auto v = executorBehaviorFromName(e.get<std::string>());
            if (!v) throw ScenarioError("scenario.executor: unknown '" + e.get<std::string>() + "'");
            c.executor = *v;
        } else if (e.is_object()) {
            rejectUnknown(e, {"behavior", "deposit"}, "scenario.executor");
            auto name = field<std::string>(e, "behavior", "Honest", "scenario.executor");
            auto v = executorBehaviorFromName(name);
            if (!v) throw ScenarioError("scenario.executor.behavior: unknown '" + name + "'");
            c.executor = *v;
            c.executorDeposit = count(e, "deposit", c.executorDeposit, "scenario.executor");
        } else {
            throw ScenarioError("scenario.executor: expected a behavior name or an object");
        }
    }
    c.seed = count(j, "seed", c.seed, "scenario");
    c.initialState = j.value("state", json::object());
    if (!c.initialState.is_object()) throw ScenarioError("scenario.state: expected an object");
    c.rounds = count(j, "rounds", c.rounds, "scenario");
    if (c.rounds == 0) throw ScenarioError("scenario.rounds: must be at least 1");
    c.minParties = count(j, "min_parties", c.minParties, "scenario");
    c.requireAllInputs = field<bool>(j, "require_all_inputs", c.requireAllInputs, "scenario");
    return c;
}

std::optional<std::size_t> ScenarioConfig::partyIndex(std::string_view n) const {
    for (std::size_t i = 0; i < parties.size(); ++i)
        if (parties[i].name == n) return i;
    return std::nullopt;
}

ScenarioConfig loadScenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ScenarioError(path + ": " + e.what());
    }
    return ScenarioConfig::fromJson(j);
}

json resolveRefs(const json& j, const std::map<std::string, Address>& names) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s.starts_with("@")) {
            auto it = names.find(s.substr(1));
            if (it == names.end()) throw ScenarioError("unknown reference " + s);
            return it->second.str();
        }
        return j;
    }
    if (j.is_array() || j.is_object()) {
        json out = j;
        for (auto& [k, v] : out.items()) v = resolveRefs(v, names);
        return out;
    }
    return j;
}

}  // namespace cloak::protocol
