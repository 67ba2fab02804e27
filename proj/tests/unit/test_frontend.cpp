#include <fstream>
#include <sstream>

#include "cloak/frontend/parser.hpp"
#include "cloak/frontend/printer.hpp"
#include "doctest.h"

using namespace cloak::frontend;

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<TokenKind> kinds(std::string_view src) {
    std::vector<TokenKind> out;
    for (const auto& t : tokenize(src)) out.push_back(t.kind);
    return out;
}

}  // namespace

TEST_CASE("tokenize an annotated declaration") {
    auto toks = tokenize("uint @all mPrice;");
    REQUIRE(toks.size() == 5);
    CHECK(toks[0].kind == TokenKind::KwUint);
    CHECK(toks[1].kind == TokenKind::At);
    CHECK(toks[2].kind == TokenKind::KwAll);
    CHECK(toks[3].kind == TokenKind::Ident);
    CHECK(toks[3].text == "mPrice");
    CHECK(toks[4].kind == TokenKind::Semi);
    CHECK(toks[3].loc.line == 1);
    CHECK(toks[3].loc.col == 11);
}

TEST_CASE("tokenize empty input and comments") {
    CHECK(tokenize("").empty());
    CHECK(tokenize("// nothing\n/* still nothing */").empty());
}

TEST_CASE("illegal character is reported with its position") {
    try {
        tokenize("uint € x;");
        FAIL("expected LexError");
    } catch (const LexError& e) {
        CHECK(e.loc.line == 1);
        CHECK(e.loc.col == 6);
        CHECK(std::string(e.what()).find("€") != std::string::npos);
    }
    CHECK_THROWS_AS(tokenize("a $ b"), LexError);
    CHECK_THROWS_AS(tokenize("/* unterminated"), LexError);
}

TEST_CASE("operators and keywords") {
    CHECK(kinds("a += 1; b++; c => d") == std::vector<TokenKind>{TokenKind::Ident, TokenKind::PlusAssign, TokenKind::IntLit, TokenKind::Semi,
                                                                 TokenKind::Ident, TokenKind::PlusPlus, TokenKind::Semi, TokenKind::Ident,
                                                                 TokenKind::Arrow, TokenKind::Ident});
    CHECK(kinds("uint256 x")[0] == TokenKind::KwUint);
    CHECK(kinds("0xff")[0] == TokenKind::IntLit);
}

TEST_CASE("token positions are monotone") {
    auto toks = tokenize(readFile("contracts/supply_chain.cloak"));
    for (std::size_t i = 1; i < toks.size(); ++i) {
        bool ordered = toks[i - 1].loc.line < toks[i].loc.line ||
                       (toks[i - 1].loc.line == toks[i].loc.line && toks[i - 1].loc.col < toks[i].loc.col);
        CHECK(ordered);
    }
}

TEST_CASE("parse the supply chain contract") {
    auto c = parseSource(readFile("contracts/supply_chain.cloak"));
    CHECK(c.name == "SupplyChain");
    REQUIRE(c.stateVars.size() == 2);
    REQUIRE(c.functions.size() == 1);
    const auto& f = c.functions[0];
    CHECK(f.name == "biddingProcure");
    CHECK(f.params.size() == 3);
    CHECK(f.returns.size() == 2);

    const auto& balances = c.stateVars[0];
    CHECK(balances.name == "balances");
    CHECK(balances.type.data.kind == DataType::Kind::NamedMapping);
    CHECK(balances.type.data.tag == "k");
    CHECK(balances.type.data.value->data.kind == DataType::Kind::Uint256);
    CHECK(balances.type.data.value->owner == OwnerAtom::named("k"));
    CHECK(balances.type.owner == OwnerAtom::all());

    CHECK(c.stateVars[1].type.owner == OwnerAtom::all());
    CHECK(f.params[0].type.data.kind == DataType::Kind::NamedAddressArray);
    CHECK(f.params[1].type.data.kind == DataType::Kind::Array);
    CHECK(f.params[1].type.data.value->owner == OwnerAtom::named("p"));
    CHECK(f.returns[1].type.owner == OwnerAtom::named("winner"));
}

TEST_CASE("minimal contract") {
    auto c = parseSource("contract X {}");
    CHECK(c.name == "X");
    CHECK(c.stateVars.empty());
    CHECK(c.functions.empty());
}

TEST_CASE("named mapping declaration") {
    auto c = parseSource("contract C { mapping(address !k => uint @k) balances; }");
    const auto& t = c.stateVars.at(0).type.data;
    CHECK(t.kind == DataType::Kind::NamedMapping);
    CHECK(t.tag == "k");
    CHECK(*t.value == AnnotatedType{DataType::scalar(DataType::Kind::Uint256), OwnerAtom::named("k")});
}

TEST_CASE("missing owners default to all") {
    auto c = parseSource("contract C { uint x; mapping(uint => bool) m; function f(uint a) returns (bool) { return true; } }");
    CHECK(c.stateVars[0].type.owner.isAll());
    CHECK(c.stateVars[1].type.data.value->owner.isAll());
    CHECK(c.functions[0].params[0].type.owner.isAll());
    CHECK(c.functions[0].returns[0].type.owner.isAll());
}

TEST_CASE("parse errors carry position and expected tokens") {
    try {
        parseSource("contract C { uint x }");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.loc.line == 1);
        CHECK(e.loc.col == 21);
        REQUIRE_FALSE(e.expected.empty());
        CHECK(e.expected[0] == ";");
    }
}

TEST_CASE("rejected constructs") {
    // mid-body return
    CHECK_THROWS_AS(parseSource("contract C { function f() returns (uint) { return 1; uint x; } }"), ParseError);
    CHECK_THROWS_AS(parseSource("contract C { function f() { if (true) { return; } } }"), ParseError);
    // duplicate members
    CHECK_THROWS_AS(parseSource("contract C { uint x; bool x; }"), ParseError);
    CHECK_THROWS_AS(parseSource("contract C { uint f; function f() {} }"), ParseError);
    // constructs outside the language
    CHECK_THROWS_AS(parseSource("contract C is D {}"), ParseError);
    CHECK_THROWS_AS(parseSource("contract C { event E(); }"), ParseError);
    CHECK_THROWS_AS(parseSource("contract C { function f() onlyOwner {} }"), ParseError);
    CHECK_THROWS_AS(parseSource("contract C { uint[!p] x; }"), ParseError);
    CHECK_THROWS_AS(parseSource("contract C {} extra"), ParseError);
}

TEST_CASE("desugaring of compound assignments and loops") {
    auto c = parseSource("contract C { function f(uint a) { uint i = 0; for (i = 0; i < 3; i++) { a -= 1; } } }");
    const auto& body = c.functions[0].body.stmts;
    REQUIRE(body.size() == 4);
    CHECK(body[0].as<Stmt::Decl>());
    CHECK(body[1].as<Stmt::Assign>());
    CHECK(body[2].as<Stmt::Assign>());
    const auto* loop = body[3].as<Stmt::While>();
    REQUIRE(loop);
    REQUIRE(loop->body.stmts.size() == 2);
    const auto* dec = loop->body.stmts[0].as<Stmt::Assign>();
    REQUIRE(dec);
    CHECK(dec->compound);
    CHECK(dec->value == Expr::apply("-", {Expr::location("a"), Expr::intConst("1")}));
    const auto* inc = loop->body.stmts[1].as<Stmt::Assign>();
    REQUIRE(inc);
    CHECK(inc->value == Expr::apply("+", {Expr::location("i"), Expr::intConst("1")}));
}

TEST_CASE("expression precedence and associativity") {
    CHECK(parseExpression("1 + 2 * 3") == Expr::apply("+", {Expr::intConst("1"), Expr::apply("*", {Expr::intConst("2"), Expr::intConst("3")})}));
    CHECK(parseExpression("1 - 2 - 3") == Expr::apply("-", {Expr::apply("-", {Expr::intConst("1"), Expr::intConst("2")}), Expr::intConst("3")}));
    CHECK(parseExpression("a < b && c") ==
          Expr::apply("&&", {Expr::apply("<", {Expr::location("a"), Expr::location("b")}), Expr::location("c")}));
    CHECK(printExpr(parseExpression("(1 + 2) * 3")) == "(1 + 2) * 3");
    CHECK(printExpr(parseExpression("1 - (2 - 3)")) == "1 - (2 - 3)");
    CHECK(parseExpression("0x10") == Expr::intConst("16"));
    CHECK(parseExpression("007") == Expr::intConst("7"));
    CHECK(printExpr(parseExpression("a ? b : c ? d : e")) == "a ? b : c ? d : e");
    CHECK(printExpr(parseExpression("reveal(x[i][j], all)")) == "reveal(x[i][j], all)");
    CHECK(printExpr(parseExpression("xs.length")) == "xs.length");
}

TEST_CASE("multiple return forms") {
    auto a = parseSource("contract C { function f() returns (uint, uint) { return 1, 2; } }");
    auto b = parseSource("contract C { function f() returns (uint, uint) { return (1, 2); } }");
    CHECK(a == b);
    auto c = parseSource("contract C { function f() returns (uint) { return (1) + 2; } }");
    const auto* r = c.functions[0].body.stmts[0].as<Stmt::Return>();
    REQUIRE(r);
    CHECK(r->values.size() == 1);
}

namespace {
const char* kCorpus[] = {
    "contract X {}",
    "contract C { final address @all owner; uint @owner secret; function set(uint @me v) { require(owner == me); secret = v; } }",
    "contract C { mapping(uint => mapping(address => bool)) m; bin b; function f(uint a, bool c) returns (uint r) { if (c) { r = a; } else if (!c) { r = 0 - a; } else { r = 1; } while (r > 10) r = r / 2; } }",
    "contract C { function f(address[!p] ps, uint[@p] xs) returns (uint @tee t) { t = xs[0] > xs[1] ? xs[0] : xs[1]; } }",
};
}

TEST_CASE("round trip: print then parse gives the same tree") {
    std::vector<std::string> sources(std::begin(kCorpus), std::end(kCorpus));
    sources.push_back(readFile("contracts/supply_chain.cloak"));
    for (const auto& src : sources) {
        CAPTURE(src);
        auto ast = parseSource(src);
        auto printed = printContract(ast);
        CAPTURE(printed);
        CHECK(parseSource(printed) == ast);
        CHECK(printContract(parseSource(printed)) == printed);
    }
}

TEST_CASE("printed types") {
    auto c = parseSource(readFile("contracts/supply_chain.cloak"));
    CHECK(printType(c.stateVars[0].type) == "mapping(address!k => uint256 @k)");
    CHECK(printType(c.stateVars[1].type, true) == "uint256 @all");
    CHECK(printType(c.functions[0].params[1].type) == "uint256[@p]");
    CHECK(printType(c.functions[0].params[0].type) == "address[!p]");
}
