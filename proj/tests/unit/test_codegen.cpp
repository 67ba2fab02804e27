#include <fstream>
#include <sstream>

#include "cloak/codegen/private_contract.hpp"
#include "cloak/codegen/verifier.hpp"
#include "cloak/crypto/cryptobox.hpp"
#include "cloak/frontend/parser.hpp"
#include "cloak/frontend/printer.hpp"
#include "doctest.h"

using namespace cloak;
using namespace cloak::codegen;
using namespace cloak::frontend;
using typecheck::FunctionKind;

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Artifacts compileSource(const std::string& src) {
    auto a = compile(parseSource(src));
    REQUIRE(a.ok());
    return a;
}

std::vector<std::string> ids(const std::vector<DataPolicy>& ds) {
    std::vector<std::string> out;
    for (const auto& d : ds) out.push_back(d.id);
    return out;
}

const char* kMixed = R"(
contract Mixed {
    uint counter;
    mapping(address !k => uint @k) bal;
    function bump() { counter = counter + 1; }
    function pay(address to, uint @me v) { bal[me] -= v; bal[to] += reveal(v, to); }
}
)";

}  // namespace

TEST_CASE("supply chain policy") {
    auto a = compileSource(readFile("contracts/supply_chain.cloak"));
    const auto* f = a.policy.function("biddingProcure");
    REQUIRE(f);
    CHECK(f->kind == FunctionKind::MPT);
    // Hand-derived: the body reads and writes only `balances`; `mPrice` in the
    // body is a local that shadows the state variable.
    CHECK(ids(f->params) == std::vector<std::string>{"parties", "bids", "tenderer"});
    CHECK(ids(f->reads) == std::vector<std::string>{"balances"});
    CHECK(ids(f->mutates) == std::vector<std::string>{"balances"});
    CHECK(ids(f->returns) == std::vector<std::string>{"winner", "sPrice"});
    CHECK(f->returns[0].type.owner.isAll());
    CHECK(f->returns[1].type.owner == OwnerAtom::named("winner"));
    REQUIRE(f->reveals.size() == 2);
    CHECK(f->reveals[0] == RevealPolicy{"bids[0]", "all"});
    CHECK(f->reveals[1] == RevealPolicy{"bids[0]", "winner"});

    const auto* m = a.policy.state("mPrice");
    REQUIRE(m);
    CHECK(m->type.owner.isAll());
    const auto* b = a.policy.state("balances");
    REQUIRE(b);
    CHECK(b->type.data.value->owner == OwnerAtom::named(b->type.data.tag));
}

TEST_CASE("policy without state access") {
    auto a = compileSource("contract P { function f(uint x) returns (uint) { return x + 1; } }");
    const auto* f = a.policy.function("f");
    CHECK(f->kind == FunctionKind::PUT);
    CHECK(f->reads.empty());
    CHECK(f->mutates.empty());
}

TEST_CASE("access analysis") {
    auto ast = parseSource(R"(
contract A {
    uint x; uint y; uint z; mapping(uint => uint) m;
    function f(uint y) { x = 1; m[z] = y; m[1] += 2; if (true) { uint x; x = 3; } }
})");
    auto acc = analyzeAccess(ast, ast.functions[0]);
    CHECK(acc.reads == std::vector<std::string>{"z", "m"});
    CHECK(acc.mutates == std::vector<std::string>{"x", "m"});
}

TEST_CASE("policy completeness: every annotated identifier appears exactly once") {
    auto a = compileSource(readFile("contracts/supply_chain.cloak"));
    std::map<std::string, int> seen;
    for (const auto& s : a.policy.states) ++seen[s.id];
    for (const auto& f : a.policy.functions) {
        for (const auto& p : f.params) ++seen[p.id];
        for (const auto& r : f.returns) ++seen[r.id];
    }
    for (const auto& v : a.checked.ast.stateVars) CHECK(seen[v.name] == 1);
    for (const auto& f : a.checked.ast.functions)
        for (const auto* list : {&f.params, &f.returns})
            for (const auto& p : *list) CHECK(seen[p.name] == 1);
}

TEST_CASE("policy JSON round trip and canonical form") {
    auto a = compileSource(readFile("contracts/supply_chain.cloak"));
    auto j = json::parse(a.policyJson);
    CHECK(policyFromJson(j) == a.policy);
    CHECK(a.policyJson.find(' ') == std::string::npos);
    CHECK(a.policyJson.find('\n') == std::string::npos);
    CHECK(canonical(j) == a.policyJson);
    CHECK(j["functions"][0]["type"] == "MPT");
}

TEST_CASE("private contract generation") {
    auto a = compileSource(readFile("contracts/supply_chain.cloak"));
    const auto& F = a.privateContract;
    REQUIRE(F.functions.size() == 1);
    CHECK(F.stateVars[0].type.data.kind == DataType::Kind::Mapping);
    CHECK(F.stateVars[0].type.data.value->owner.isAll());
    CHECK(F.functions[0].returns[1].type.owner.isAll());
    CHECK(F.functions[0].params[1].type.data.value->owner.isAll());
    // Statements are carried over; only declared types lose their owners.
    CHECK(F.functions[0].body.stmts.size() == a.checked.ast.functions[0].body.stmts.size());
    CHECK(a.privateSource.find('@') == std::string::npos);
    CHECK(a.privateSource.find("reveal(bids[0], winner)") != std::string::npos);
    CHECK(parseSource(a.privateSource) == F);
}

TEST_CASE("private contract drops public functions") {
    auto a = compileSource(kMixed);
    CHECK(a.checked.kindOf("bump") == FunctionKind::PUT);
    CHECK(a.checked.kindOf("pay") == FunctionKind::MPT);
    REQUIRE(a.privateContract.functions.size() == 1);
    CHECK(a.privateContract.functions[0].name == "pay");

    auto onlyPublic = compileSource("contract P { uint c; function f() { c = c + 1; } function g() returns (uint) { return c; } }");
    CHECK(onlyPublic.privateContract.functions.empty());
    CHECK(onlyPublic.privateContract.stateVars.size() == 1);
}

TEST_CASE("private contract generation is idempotent") {
    for (const auto& src : {readFile("contracts/supply_chain.cloak"), std::string(kMixed)}) {
        auto a = compileSource(src);
        std::map<std::string, FunctionKind> kinds;
        for (const auto& f : a.checked.functions) kinds[f.name] = f.kind;
        CHECK(stripContract(a.privateContract, kinds) == a.privateContract);
    }
}

TEST_CASE("AST JSON round trip") {
    auto ast = parseSource(readFile("contracts/supply_chain.cloak"));
    CHECK(contractFromJson(contractToJson(ast)) == ast);
    auto mixed = parseSource(kMixed);
    CHECK(contractFromJson(json::parse(canonical(contractToJson(mixed)))) == mixed);
}

TEST_CASE("verifier descriptor") {
    auto a = compileSource(readFile("contracts/supply_chain.cloak"));
    Address adrE = crypto::keygen(crypto::seedFromLabel("enclave")).addr;
    auto v = generateVerifier(a.checked, a.policy, a.privateContract, adrE);
    CHECK(v.hF == a.hF);
    CHECK(v.hP == a.hP);
    CHECK(v.hP == crypto::hash(a.policyJson));
    CHECK(v.hF == crypto::hash(canonical(contractToJson(a.privateContract))));
    REQUIRE(v.stateLayout.size() == 2);
    CHECK(v.stateLayout[0] == LayoutEntry{"balances", LayoutEntry::Cells::Mapping});
    CHECK(v.stateLayout[1] == LayoutEntry{"mPrice", LayoutEntry::Cells::Scalar});
    CHECK(VerifierDescriptor::fromJson(v.toJson()) == v);
    CHECK(v.toJson()["h_f"].get<std::string>().size() == 64);
}

TEST_CASE("hashes are deterministic and sensitive to owners") {
    auto src = readFile("contracts/supply_chain.cloak");
    auto a = compileSource(src);
    auto b = compileSource(src);
    CHECK(a.hF == b.hF);
    CHECK(a.hP == b.hP);
    CHECK(a.policyJson == b.policyJson);

    // Changing one owner annotation changes H_P but not H_F (owners are erased from F).
    auto mutated = src;
    auto pos = mutated.find("uint @all mPrice");
    REQUIRE(pos != std::string::npos);
    mutated.replace(pos, 16, "uint @tee mPrice");
    auto c = compileSource(mutated);
    CHECK(c.hP != a.hP);
    CHECK(c.hF == a.hF);

    // Comments and whitespace change nothing.
    auto d = compileSource("// header\n" + src + "\n\n");
    CHECK(d.hF == a.hF);
    CHECK(d.hP == a.hP);
}

TEST_CASE("compile reports type errors without artifacts") {
    auto a = compile(parseSource("contract B { uint pub; function f(uint @me x) { pub = x; } }"));
    CHECK_FALSE(a.ok());
    CHECK(a.policyJson.empty());
}
