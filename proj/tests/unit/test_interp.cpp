#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "cloak/codegen/verifier.hpp"
#include "cloak/crypto/cryptobox.hpp"
#include "cloak/frontend/parser.hpp"
#include "cloak/interp/partition.hpp"
#include "doctest.h"

using namespace cloak;
using namespace cloak::interp;
using namespace cloak::frontend;

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Address addr(const std::string& label) { return crypto::keygen(crypto::seedFromLabel(label)).addr; }

struct Listing {
    codegen::Artifacts art;
    const FunctionDecl& fn() const { return art.privateContract.functions.at(0); }
    const codegen::FunctionPolicy& policy() const { return art.policy.functions.at(0); }
};

const Listing& listing() {
    static Listing l{codegen::compile(parseSource(readFile("contracts/supply_chain.cloak")))};
    return l;
}

std::map<std::string, Value> bidParams(const std::vector<Address>& parties, const std::vector<std::uint64_t>& bids, const Address& tenderer) {
    ArrayV ps, bs;
    for (const auto& p : parties) ps.items.emplace_back(p);
    for (auto b : bids) bs.items.push_back(Value::u(b));
    return {{"parties", Value(ps)}, {"bids", Value(bs)}, {"tenderer", Value(tenderer)}};
}

ExecResult runOne(const std::string& body, const std::string& state = "", StateStore s = {}, const ExecOptions& opts = {}) {
    auto ast = parseSource("contract T { " + state + " function f() returns (uint r) { " + body + " } }");
    return execFunction(ast, ast.functions[0], s, {}, addr("caller"), opts);
}

}  // namespace

TEST_CASE("value encoding round trip") {
    std::vector<Value> vs = {Value::u(0), Value(U256(std::numeric_limits<U256>::max())), Value(true), Value(addr("a")), Value(Bytes{1, 2, 3}),
                             Value(ArrayV{{Value::u(1), Value::u(2)}}), Value(MapV{{Value::u(1)}, {Value(false)}})};
    for (const auto& v : vs) {
        CAPTURE(v.str());
        CHECK(Value::decode(v.encode()) == v);
    }
    CHECK_THROWS(Value::decode(Bytes{'u', 1}));
    CHECK(Value::u(5).str() == "5");
    CHECK(toBigEndian(U256(258))[31] == 2);
    CHECK(toBigEndian(U256(258))[30] == 1);
}

TEST_CASE("values from JSON") {
    auto u = DataType::scalar(DataType::Kind::Uint256);
    CHECK(valueFromJson(7, u) == Value::u(7));
    CHECK(valueFromJson("115792089237316195423570985008687907853269984665640564039457584007913129639935", u).asU256() ==
          std::numeric_limits<U256>::max());
    CHECK_THROWS(valueFromJson("115792089237316195423570985008687907853269984665640564039457584007913129639936", u));
    CHECK_THROWS(valueFromJson(-1, u));
    CHECK_THROWS(valueFromJson("12a", u));
    auto arr = DataType::array({u, OwnerAtom::all()});
    CHECK(valueFromJson(nlohmann::json::array({1, 2}), arr) == Value(ArrayV{{Value::u(1), Value::u(2)}}));
    for (const auto& v : {Value::u(9), Value(true), Value(addr("x"))}) {
        DataType t = v.isU256() ? u : v.isBool() ? DataType::scalar(DataType::Kind::Bool) : DataType::scalar(DataType::Kind::Address);
        CHECK(valueFromJson(valueToJson(v), t) == v);
    }
}

TEST_CASE("supply chain run: parties A, B, C with bids 5, 3, 7") {
    const auto& l = listing();
    Address A = addr("A"), B = addr("B"), C = addr("C"), T = addr("T");
    StateStore s;
    s.write(CellId::entry("balances", Value(T)), Value::u(10));
    auto r = execFunction(l.art.privateContract, l.fn(), s, bidParams({A, B, C}, {5, 3, 7}, T), T);
    REQUIRE(r.ok());
    CHECK(r.returns.at("winner") == Value(B));
    CHECK(r.returns.at("sPrice") == Value::u(5));
    CHECK(r.newState.read(CellId::entry("balances", Value(T)), DataType::scalar(DataType::Kind::Uint256)) == Value::u(5));
    CHECK(r.newState.read(CellId::entry("balances", Value(B)), DataType::scalar(DataType::Kind::Uint256)) == Value::u(5));
    // The state variable mPrice is shadowed by the local and never written.
    CHECK_FALSE(r.newState.contains(CellId::scalar("mPrice")));
    CHECK(r.written == std::set<CellId>{CellId::entry("balances", Value(T)), CellId::entry("balances", Value(B))});
}

TEST_CASE("supply chain run: overflow on insufficient balance") {
    const auto& l = listing();
    Address A = addr("A"), B = addr("B"), C = addr("C"), T = addr("T");
    StateStore s;
    s.write(CellId::entry("balances", Value(T)), Value::u(3));
    auto r = execFunction(l.art.privateContract, l.fn(), s, bidParams({A, B, C}, {5, 3, 7}, T), T);
    REQUIRE_FALSE(r.ok());
    CHECK(r.abort->reason == AbortReason::Overflow);
    CHECK(r.newState == s);
    CHECK(r.returns.empty());
}

TEST_CASE("require(false) aborts without state change") {
    StateStore s;
    s.write(CellId::scalar("x"), Value::u(4));
    auto r = runOne("x = 9; require(false);", "uint x;", s);
    REQUIRE_FALSE(r.ok());
    CHECK(r.abort->reason == AbortReason::RequireFailed);
    CHECK(r.newState == s);
}

TEST_CASE("checked arithmetic") {
    CHECK(runOne("r = 0 - 1;").abort->reason == AbortReason::Overflow);
    CHECK(runOne("r = 115792089237316195423570985008687907853269984665640564039457584007913129639935 + 1;").abort->reason == AbortReason::Overflow);
    CHECK(runOne("r = 7 / 0;").abort->reason == AbortReason::Overflow);
    CHECK(runOne("r = 7 % 0;").abort->reason == AbortReason::Overflow);
    auto ok = runOne("r = (7 / 2) * 3 + 7 % 4 - 1;");
    REQUIRE(ok.ok());
    CHECK(ok.returns.at("r") == Value::u(11));
}

TEST_CASE("step budget") {
    ExecOptions opts;
    opts.stepBudget = 1000;
    auto r = runOne("while (true) { }", "", {}, opts);
    REQUIRE_FALSE(r.ok());
    CHECK(r.abort->reason == AbortReason::StepBudgetExceeded);
    auto fine = runOne("uint i; while (i < 10) { i++; } r = i;", "", {}, opts);
    REQUIRE(fine.ok());
    CHECK(fine.returns.at("r") == Value::u(10));
}

TEST_CASE("arrays, mappings and defaults") {
    auto r = runOne("r = m[3] + (b ? 1 : 0); m[3] = 4; xs = ys; r = r + m[3]; if (a == me) { r = 100; }",
                    "mapping(uint => uint) m; bool b; address a; uint[] xs; uint[] ys;");
    REQUIRE(r.ok());
    CHECK(r.returns.at("r") == Value::u(4));
    CHECK(r.newState.find(CellId::entry("m", Value::u(3)))->asU256() == 4);

    StateStore s;
    s.write(CellId::scalar("xs"), Value(ArrayV{{Value::u(1), Value::u(2)}}));
    auto e = runOne("xs[1] = 7; r = xs[1] + xs.length;", "uint[] xs;", s);
    REQUIRE(e.ok());
    CHECK(e.returns.at("r") == Value::u(9));
    CHECK(e.newState.find(CellId::scalar("xs"))->asArray().items[1] == Value::u(7));

    auto oob = runOne("r = xs[2];", "uint[] xs;", s);
    REQUIRE_FALSE(oob.ok());
    CHECK(oob.abort->reason == AbortReason::TypeMismatch);
}

TEST_CASE("nested mappings use one cell per key path") {
    auto r = runOne("m[1][me] = true; if (m[1][me]) { r = 1; }", "mapping(uint => mapping(address => bool)) m;");
    REQUIRE(r.ok());
    CHECK(r.returns.at("r") == Value::u(1));
    CHECK(r.written.size() == 1);
}

TEST_CASE("parameter type mismatch aborts before running") {
    const auto& l = listing();
    auto params = bidParams({addr("A")}, {1}, addr("T"));
    params["tenderer"] = Value::u(1);
    auto r = execFunction(l.art.privateContract, l.fn(), {}, params, addr("T"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.abort->reason == AbortReason::TypeMismatch);
    params.erase("tenderer");
    CHECK(execFunction(l.art.privateContract, l.fn(), {}, params, addr("T")).abort->reason == AbortReason::TypeMismatch);
}

TEST_CASE("determinism and frame isolation over random inputs") {
    const auto& l = listing();
    std::mt19937_64 gen(7);
    std::set<std::string> allowed;
    for (const auto& d : l.policy().reads) allowed.insert(d.id);
    for (const auto& d : l.policy().mutates) allowed.insert(d.id);
    for (int round = 0; round < 50; ++round) {
        std::size_t n = 1 + gen() % 8;
        std::vector<Address> ps;
        std::vector<std::uint64_t> bids;
        for (std::size_t i = 0; i < n; ++i) {
            ps.push_back(addr("p" + std::to_string(round) + "_" + std::to_string(i)));
            bids.push_back(gen() % 1000);
        }
        Address T = addr("T");
        StateStore s;
        s.write(CellId::entry("balances", Value(T)), Value::u(1'000'000));
        s.write(CellId::scalar("mPrice"), Value::u(77));
        s.write(CellId::entry("balances", Value(addr("bystander"))), Value::u(3));
        AccessLog log;
        ExecOptions opts;
        opts.log = &log;
        auto a = execFunction(l.art.privateContract, l.fn(), s, bidParams(ps, bids, T), T, opts);
        auto b = execFunction(l.art.privateContract, l.fn(), s, bidParams(ps, bids, T), T);
        REQUIRE(a.ok());
        CHECK(a.returns == b.returns);
        CHECK(a.newState == b.newState);
        for (const auto& c : log.reads) CHECK(allowed.count(c.var));
        for (const auto& c : log.writes) CHECK(l.policy().mutatesVar(c.var));
        // Untouched cells keep their values.
        CHECK(a.newState.find(CellId::scalar("mPrice"))->asU256() == 77);
        CHECK(a.newState.find(CellId::entry("balances", Value(addr("bystander"))))->asU256() == 3);
    }
}

TEST_CASE("partition of the supply chain run") {
    const auto& l = listing();
    Address A = addr("A"), B = addr("B"), C = addr("C"), T = addr("T");
    StateStore s;
    s.write(CellId::entry("balances", Value(T)), Value::u(10));
    auto params = bidParams({A, B, C}, {5, 3, 7}, T);
    auto r = execFunction(l.art.privateContract, l.fn(), s, params, T);
    REQUIRE(r.ok());
    auto owners = collectRuntimeOwners(l.policy(), l.art.policy.states, params, r.returns, r.newState, T);
    auto p = partitionOutputs(l.policy(), l.art.policy.states, r.newState, r.written, r.returns, owners);

    CHECK(p.publicSlice.state.empty());
    CHECK(p.publicSlice.returns == std::vector<std::pair<std::string, Value>>{{"winner", Value(B)}});
    CHECK(p.teeSlice.empty());
    REQUIRE(p.parties.size() == 2);
    CHECK(p.parties.at(B).state == std::vector<std::pair<CellId, Value>>{{CellId::entry("balances", Value(B)), Value::u(5)}});
    CHECK(p.parties.at(B).returns == std::vector<std::pair<std::string, Value>>{{"sPrice", Value::u(5)}});
    CHECK(p.parties.at(T).state == std::vector<std::pair<CellId, Value>>{{CellId::entry("balances", Value(T)), Value::u(5)}});
    CHECK(p.parties.at(T).returns.empty());

    // Exactness: every output lands in exactly one slice.
    std::size_t cells = p.publicSlice.state.size() + p.teeSlice.state.size(), rets = p.publicSlice.returns.size() + p.teeSlice.returns.size();
    for (const auto& [a, sl] : p.parties) {
        cells += sl.state.size();
        rets += sl.returns.size();
    }
    CHECK(cells == r.written.size());
    CHECK(rets == r.returns.size());
}

TEST_CASE("partition with only public outputs") {
    auto a = codegen::compile(parseSource("contract P { uint c; function f() returns (uint) { c = c + 1; return c; } }"));
    REQUIRE(a.ok());
    const auto& f = a.privateContract;
    // PUT functions are not in the private contract; run the original instead.
    CHECK(f.functions.empty());
    auto r = execFunction(a.checked.ast, a.checked.ast.functions[0], {}, {}, addr("x"));
    REQUIRE(r.ok());
    auto owners = collectRuntimeOwners(a.policy.functions[0], a.policy.states, {}, r.returns, r.newState, addr("x"));
    auto p = partitionOutputs(a.policy.functions[0], a.policy.states, r.newState, r.written, r.returns, owners);
    CHECK(p.parties.empty());
    CHECK(p.publicSlice.state.size() == 1);
    CHECK(p.publicSlice.returns.size() == 1);
}

TEST_CASE("partition rejects a zero-address owner") {
    const auto& l = listing();
    std::map<std::string, Value> returns{{"winner", Value(Address{})}, {"sPrice", Value::u(0)}};
    auto params = bidParams({}, {}, addr("T"));
    auto owners = collectRuntimeOwners(l.policy(), l.art.policy.states, params, returns, {}, addr("T"));
    CHECK_THROWS_AS(partitionOutputs(l.policy(), l.art.policy.states, {}, {}, returns, owners), PolicyError);
    // With empty parties the contract itself cannot even pick a winner.
    auto r = execFunction(l.art.privateContract, l.fn(), {}, params, addr("T"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.abort->reason == AbortReason::TypeMismatch);
}

TEST_CASE("cell owners") {
    const auto& l = listing();
    RuntimeOwners owners{{"me", addr("T")}};
    auto o = cellOwner(l.art.policy.states, CellId::entry("balances", Value(addr("Q"))), owners);
    CHECK(o.kind == ResolvedOwner::Kind::Party);
    CHECK(o.addr == addr("Q"));
    CHECK(cellOwner(l.art.policy.states, CellId::scalar("mPrice"), owners).kind == ResolvedOwner::Kind::Public);
    CHECK_THROWS_AS(cellOwner(l.art.policy.states, CellId::scalar("nope"), owners), PolicyError);
}

TEST_CASE("unavailable cells abort when read") {
    StateStore s;
    s.write(CellId::entry("m", Value::u(1)), Value::u(5));
    std::set<CellId> hidden{CellId::entry("m", Value::u(1))};
    ExecOptions opts;
    opts.unavailable = &hidden;
    auto r = runOne("r = m[1];", "mapping(uint => uint) m;", s, opts);
    REQUIRE_FALSE(r.ok());
    CHECK(r.abort->reason == AbortReason::UnavailableState);
    CHECK(runOne("r = m[2];", "mapping(uint => uint) m;", s, opts).ok());
    CHECK(runOne("m[1] = 3;", "mapping(uint => uint) m;", s, opts).ok());
}
