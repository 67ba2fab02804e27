#include "cloak/frontend/parser.hpp"

#include <algorithm>
#include <set>

#include "cloak/frontend/printer.hpp"

namespace cloak::frontend {

// ---------------------------------------------------------------------------
// AST helpers

std::string OwnerAtom::str() const { return printOwner(*this); }

DataType DataType::mapping(DataType key, AnnotatedType value) {
    DataType t = scalar(Kind::Mapping);
    t.key = Box<DataType>(std::move(key));
    t.value = Box<AnnotatedType>(std::move(value));
    return t;
}

DataType DataType::namedMapping(std::string tag, AnnotatedType value) {
    DataType t = scalar(Kind::NamedMapping);
    t.tag = std::move(tag);
    t.value = Box<AnnotatedType>(std::move(value));
    return t;
}

DataType DataType::array(AnnotatedType elem) {
    DataType t = scalar(Kind::Array);
    t.value = Box<AnnotatedType>(std::move(elem));
    return t;
}

DataType DataType::namedAddressArray(std::string tag) {
    DataType t = scalar(Kind::NamedAddressArray);
    t.tag = std::move(tag);
    return t;
}

AnnotatedType DataType::elementType() const {
    if (kind == Kind::NamedAddressArray) return {scalar(Kind::Address), OwnerAtom::all()};
    if (value) return *value;
    throw std::logic_error("elementType() on a non-indexable type");
}

Expr Expr::intConst(std::string digits, SourceLoc loc) {
    return Expr{Const{Const::Kind::Int, std::move(digits), false}, loc};
}
Expr Expr::boolConst(bool b, SourceLoc loc) { return Expr{Const{Const::Kind::Bool, {}, b}, loc}; }
Expr Expr::location(std::string base, std::vector<Expr> indexes, SourceLoc loc) {
    return Expr{Location{std::move(base), std::move(indexes)}, loc};
}
Expr Expr::apply(std::string op, std::vector<Expr> args, SourceLoc loc) {
    return Expr{NativeApply{std::move(op), std::move(args)}, loc};
}

const StateVar* ContractAst::findState(std::string_view n) const {
    for (const auto& v : stateVars)
        if (v.name == n) return &v;
    return nullptr;
}

const FunctionDecl* ContractAst::findFunction(std::string_view n) const {
    for (const auto& f : functions)
        if (f.name == n) return &f;
    return nullptr;
}

// ---------------------------------------------------------------------------

namespace {

std::string hexToDecimal(std::string_view hex) {
    std::vector<int> digits{0};  // little-endian base 10
    for (char c : hex) {
        int v = std::isdigit(static_cast<unsigned char>(c)) ? c - '0' : (std::tolower(c) - 'a' + 10);
        int carry = v;
        for (auto& d : digits) {
            int x = d * 16 + carry;
            d = x % 10;
            carry = x / 10;
        }
        while (carry) {
            digits.push_back(carry % 10);
            carry /= 10;
        }
    }
    std::string out;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) out.push_back(static_cast<char>('0' + *it));
    return out;
}

std::string normaliseDecimal(std::string_view s) {
    auto first = s.find_first_not_of('0');
    return first == std::string_view::npos ? "0" : std::string(s.substr(first));
}

class Parser {
  public:
    explicit Parser(const std::vector<Token>& toks)
        : toks_(toks), eof_{TokenKind::Semi, "<eof>", toks.empty() ? SourceLoc{} : toks.back().loc} {}

    ContractAst contract() {
        expect(TokenKind::KwContract);
        ContractAst c;
        c.name = expect(TokenKind::Ident).text;
        expect(TokenKind::LBrace);
        std::set<std::string> names;
        while (!at(TokenKind::RBrace)) {
            if (at(TokenKind::KwFunction)) {
                auto f = function();
                if (!names.insert(f.name).second)
                    throw ParseError(f.loc, {}, "duplicate member name '" + f.name + "'");
                c.functions.push_back(std::move(f));
            } else {
                StateVar v;
                v.loc = peek().loc;
                if (accept(TokenKind::KwFinal)) v.isFinal = true;
                v.type = annotatedType();
                v.name = expect(TokenKind::Ident).text;
                expect(TokenKind::Semi);
                if (!names.insert(v.name).second)
                    throw ParseError(v.loc, {}, "duplicate member name '" + v.name + "'");
                c.stateVars.push_back(std::move(v));
            }
        }
        expect(TokenKind::RBrace);
        if (!atEnd()) fail({"end of input"});
        return c;
    }

    Expr standaloneExpr() {
        Expr e = expr();
        if (!atEnd()) fail({"end of input"});
        return e;
    }

  private:
    // -- token plumbing ----------------------------------------------------

    bool atEnd() const { return pos_ >= toks_.size(); }
    // Past the end, peek() yields a sentinel that matches no real token kind
    // test (callers always check atEnd()/at() before trusting .kind).
    const Token& peek(std::size_t ahead = 0) const {
        return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : eof_;
    }
    bool at(TokenKind k) const { return !atEnd() && toks_[pos_].kind == k; }
    bool accept(TokenKind k) {
        if (at(k)) {
            ++pos_;
            return true;
        }
        return false;
    }
    const Token& expect(TokenKind k) {
        if (!at(k)) fail({std::string(tokenKindName(k))});
        return toks_[pos_++];
    }
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        std::string found = atEnd() ? "end of input" : "'" + toks_[pos_].text + "'";
        std::string msg = "expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg += (i + 1 == expected.size()) ? " or " : ", ";
            msg += expected[i];
        }
        msg += ", found " + found;
        SourceLoc loc = atEnd() ? (toks_.empty() ? SourceLoc{} : toks_.back().loc) : toks_[pos_].loc;
        throw ParseError(loc, std::move(expected), msg);
    }

    // -- types ---------------------------------------------------------------

    OwnerAtom owner() {
        if (accept(TokenKind::KwMe)) return OwnerAtom::me();
        if (accept(TokenKind::KwAll)) return OwnerAtom::all();
        if (accept(TokenKind::KwTee)) return OwnerAtom::tee();
        if (at(TokenKind::Ident)) return OwnerAtom::named(toks_[pos_++].text);
        fail({"me", "all", "tee", "identifier"});
    }

    static bool startsType(TokenKind k) {
        return k == TokenKind::KwBool || k == TokenKind::KwUint || k == TokenKind::KwAddress ||
               k == TokenKind::KwBin || k == TokenKind::KwMapping;
    }

    DataType scalarType() {
        if (accept(TokenKind::KwBool)) return DataType::scalar(DataType::Kind::Bool);
        if (accept(TokenKind::KwUint)) return DataType::scalar(DataType::Kind::Uint256);
        if (accept(TokenKind::KwAddress)) return DataType::scalar(DataType::Kind::Address);
        if (accept(TokenKind::KwBin)) return DataType::scalar(DataType::Kind::Bin);
        fail({"bool", "uint", "address", "bin"});
    }

    DataType dataType() {
        DataType base;
        if (accept(TokenKind::KwMapping)) {
            expect(TokenKind::LParen);
            if (at(TokenKind::KwAddress) && peek(1).kind == TokenKind::Bang) {
                pos_ += 2;
                std::string tag = expect(TokenKind::Ident).text;
                expect(TokenKind::Arrow);
                AnnotatedType value = annotatedType();
                expect(TokenKind::RParen);
                base = DataType::namedMapping(std::move(tag), std::move(value));
            } else {
                DataType key = scalarType();
                expect(TokenKind::Arrow);
                AnnotatedType value = annotatedType();
                expect(TokenKind::RParen);
                base = DataType::mapping(std::move(key), std::move(value));
            }
        } else {
            base = scalarType();
        }
        while (at(TokenKind::LBracket)) {
            SourceLoc loc = peek().loc;
            ++pos_;
            if (accept(TokenKind::RBracket)) {
                base = DataType::array({std::move(base), OwnerAtom::all()});
            } else if (accept(TokenKind::At)) {
                OwnerAtom o = owner();
                expect(TokenKind::RBracket);
                base = DataType::array({std::move(base), std::move(o)});
            } else if (accept(TokenKind::Bang)) {
                if (base.kind != DataType::Kind::Address)
                    throw ParseError(loc, {}, "named arrays '[!id]' require element type address");
                std::string tag = expect(TokenKind::Ident).text;
                expect(TokenKind::RBracket);
                base = DataType::namedAddressArray(std::move(tag));
            } else {
                fail({"]", "@", "!"});
            }
        }
        return base;
    }

    AnnotatedType annotatedType() {
        AnnotatedType t;
        t.data = dataType();
        t.owner = accept(TokenKind::At) ? owner() : OwnerAtom::all();
        return t;
    }

    // -- functions -------------------------------------------------------------

    std::vector<Param> paramList(bool namesRequired) {
        std::vector<Param> out;
        expect(TokenKind::LParen);
        if (accept(TokenKind::RParen)) return out;
        do {
            Param p;
            p.loc = peek().loc;
            p.type = annotatedType();
            if (at(TokenKind::Ident)) p.name = toks_[pos_++].text;
            else if (namesRequired) fail({"parameter name"});
            out.push_back(std::move(p));
        } while (accept(TokenKind::Comma));
        expect(TokenKind::RParen);
        return out;
    }

    FunctionDecl function() {
        FunctionDecl f;
        f.loc = expect(TokenKind::KwFunction).loc;
        f.name = expect(TokenKind::Ident).text;
        f.params = paramList(true);
        accept(TokenKind::KwPublic);
        if (accept(TokenKind::KwReturns)) f.returns = paramList(false);
        std::set<std::string> seen;
        for (const auto* list : {&f.params, &f.returns})
            for (const auto& p : *list)
                if (!p.name.empty() && !seen.insert(p.name).second)
                    throw ParseError(p.loc, {}, "duplicate parameter name '" + p.name + "'");
        f.body = block(/*functionBody=*/true);
        return f;
    }

    // -- statements -----------------------------------------------------------

    Stmt::Seq block(bool functionBody = false) {
        expect(TokenKind::LBrace);
        Stmt::Seq seq;
        while (!at(TokenKind::RBrace)) {
            if (atEnd()) fail({"}"});
            if (at(TokenKind::KwReturn)) {
                SourceLoc loc = peek().loc;
                if (!functionBody) throw ParseError(loc, {}, "return is only allowed as the last statement of a function");
                seq.stmts.push_back(returnStmt());
                if (!at(TokenKind::RBrace))
                    throw ParseError(loc, {}, "return is only allowed as the last statement of a function");
                break;
            }
            for (auto& s : statement()) seq.stmts.push_back(std::move(s));
        }
        expect(TokenKind::RBrace);
        return seq;
    }

    Stmt::Seq blockOrStatement() {
        if (at(TokenKind::LBrace)) return block();
        if (at(TokenKind::KwReturn))
            throw ParseError(peek().loc, {}, "return is only allowed as the last statement of a function");
        Stmt::Seq seq;
        seq.stmts = statement();
        return seq;
    }

    Stmt returnStmt() {
        SourceLoc loc = expect(TokenKind::KwReturn).loc;
        Stmt::Return r;
        if (!at(TokenKind::Semi)) {
            std::size_t save = pos_;
            bool tuple = false;
            if (accept(TokenKind::LParen)) {
                try {
                    std::vector<Expr> vals{expr()};
                    while (accept(TokenKind::Comma)) vals.push_back(expr());
                    expect(TokenKind::RParen);
                    if (at(TokenKind::Semi) && vals.size() > 1) {
                        r.values = std::move(vals);
                        tuple = true;
                    }
                } catch (const ParseError&) {
                }
                if (!tuple) pos_ = save;
            }
            if (!tuple) {
                r.values.push_back(expr());
                while (accept(TokenKind::Comma)) r.values.push_back(expr());
            }
        }
        expect(TokenKind::Semi);
        return Stmt{std::move(r), loc};
    }

    std::vector<Stmt> statement() {
        SourceLoc loc = peek().loc;
        if (at(TokenKind::LBrace)) return {Stmt{block(), loc}};
        if (accept(TokenKind::Semi)) return {Stmt{Stmt::Skip{}, loc}};
        if (accept(TokenKind::KwIf)) {
            expect(TokenKind::LParen);
            Expr cond = expr();
            expect(TokenKind::RParen);
            Stmt::If s{std::move(cond), blockOrStatement(), {}};
            if (accept(TokenKind::KwElse)) s.elseBlock = blockOrStatement();
            return {Stmt{std::move(s), loc}};
        }
        if (accept(TokenKind::KwWhile)) {
            expect(TokenKind::LParen);
            Expr cond = expr();
            expect(TokenKind::RParen);
            return {Stmt{Stmt::While{std::move(cond), blockOrStatement()}, loc}};
        }
        if (accept(TokenKind::KwFor)) return forStatement(loc);
        if (accept(TokenKind::KwRequire)) {
            expect(TokenKind::LParen);
            Expr cond = expr();
            expect(TokenKind::RParen);
            expect(TokenKind::Semi);
            return {Stmt{Stmt::Require{std::move(cond)}, loc}};
        }
        if (!atEnd() && startsType(peek().kind)) {
            auto out = declaration();
            expect(TokenKind::Semi);
            return out;
        }
        Stmt s = simpleAssignment();
        expect(TokenKind::Semi);
        return {std::move(s)};
    }

    std::vector<Stmt> declaration() {
        SourceLoc loc = peek().loc;
        AnnotatedType t = annotatedType();
        const Token& name = expect(TokenKind::Ident);
        std::vector<Stmt> out;
        out.push_back(Stmt{Stmt::Decl{name.text, std::move(t)}, loc});
        if (at(TokenKind::Assign)) {
            SourceLoc aloc = peek().loc;
            ++pos_;
            Expr init = expr();
            out.push_back(Stmt{Stmt::Assign{Expr::location(name.text, {}, name.loc), std::move(init), false}, aloc});
        }
        return out;
    }

    Stmt simpleAssignment() {
        SourceLoc loc = peek().loc;
        Expr target = postfix();
        if (!target.as<Expr::Location>()) throw ParseError(loc, {"location"}, "assignment target must be a location");
        auto compound = [&](std::string op, Expr rhs) {
            Expr value = Expr::apply(std::move(op), {target, std::move(rhs)}, loc);
            return Stmt{Stmt::Assign{target, std::move(value), true}, loc};
        };
        if (accept(TokenKind::Assign)) return Stmt{Stmt::Assign{target, expr(), false}, loc};
        if (accept(TokenKind::PlusAssign)) return compound("+", expr());
        if (accept(TokenKind::MinusAssign)) return compound("-", expr());
        if (accept(TokenKind::StarAssign)) return compound("*", expr());
        if (accept(TokenKind::PlusPlus)) return compound("+", Expr::intConst("1", loc));
        if (accept(TokenKind::MinusMinus)) return compound("-", Expr::intConst("1", loc));
        fail({"=", "+=", "-=", "*=", "++", "--"});
    }

    std::vector<Stmt> forStatement(SourceLoc loc) {
        expect(TokenKind::LParen);
        std::vector<Stmt> out;
        if (!accept(TokenKind::Semi)) {
            if (startsType(peek().kind)) out = declaration();
            else out.push_back(simpleAssignment());
            expect(TokenKind::Semi);
        }
        Expr cond = at(TokenKind::Semi) ? Expr::boolConst(true, loc) : expr();
        expect(TokenKind::Semi);
        std::vector<Stmt> step;
        if (!at(TokenKind::RParen)) step.push_back(simpleAssignment());
        expect(TokenKind::RParen);
        Stmt::Seq body = blockOrStatement();
        for (auto& s : step) body.stmts.push_back(std::move(s));
        out.push_back(Stmt{Stmt::While{std::move(cond), std::move(body)}, loc});
        return out;
    }

    // -- expressions ---------------------------------------------------------

    Expr expr() { return ternary(); }

    Expr ternary() {
        Expr cond = binary(0);
        if (at(TokenKind::Question)) {
            SourceLoc loc = peek().loc;
            ++pos_;
            Expr a = ternary();
            expect(TokenKind::Colon);
            Expr b = ternary();
            return Expr{Expr::Ternary{std::move(cond), std::move(a), std::move(b)}, loc};
        }
        return cond;
    }

    static int precedence(TokenKind k) {
        switch (k) {
            case TokenKind::OrOr: return 1;
            case TokenKind::AndAnd: return 2;
            case TokenKind::EqEq:
            case TokenKind::NotEq: return 3;
            case TokenKind::Lt:
            case TokenKind::Gt:
            case TokenKind::Le:
            case TokenKind::Ge: return 4;
            case TokenKind::Plus:
            case TokenKind::Minus: return 5;
            case TokenKind::Star:
            case TokenKind::Slash:
            case TokenKind::Percent: return 6;
            default: return -1;
        }
    }

    // Precedence climbing, left associative.
    Expr binary(int minPrec) {
        Expr lhs = unary();
        while (!atEnd()) {
            int p = precedence(peek().kind);
            if (p < 0 || p < minPrec) break;
            Token op = toks_[pos_++];
            Expr rhs = binary(p + 1);
            lhs = Expr::apply(op.text, {std::move(lhs), std::move(rhs)}, op.loc);
        }
        return lhs;
    }

    Expr unary() {
        if (at(TokenKind::Bang) || at(TokenKind::Minus)) {
            Token op = toks_[pos_++];
            return Expr::apply(op.text, {unary()}, op.loc);
        }
        return postfix();
    }

    Expr postfix() {
        SourceLoc loc = peek().loc;
        Expr e = primary();
        while (true) {
            if (at(TokenKind::LBracket)) {
                auto* l = e.as<Expr::Location>();
                if (!l) throw ParseError(peek().loc, {}, "only locations can be indexed");
                ++pos_;
                l->indexes.push_back(expr());
                expect(TokenKind::RBracket);
            } else if (at(TokenKind::Dot)) {
                ++pos_;
                const Token& member = expect(TokenKind::Ident);
                if (member.text != "length") throw ParseError(member.loc, {"length"}, "unknown member '" + member.text + "'");
                if (!e.as<Expr::Location>()) throw ParseError(member.loc, {}, "'.length' requires a location");
                e = Expr::apply("length", {std::move(e)}, loc);
            } else {
                break;
            }
        }
        return e;
    }

    Expr primary() {
        SourceLoc loc = peek().loc;
        if (at(TokenKind::IntLit)) {
            std::string text = toks_[pos_++].text;
            if (text.starts_with("0x") || text.starts_with("0X")) return Expr::intConst(hexToDecimal(text.substr(2)), loc);
            return Expr::intConst(normaliseDecimal(text), loc);
        }
        if (accept(TokenKind::KwTrue)) return Expr::boolConst(true, loc);
        if (accept(TokenKind::KwFalse)) return Expr::boolConst(false, loc);
        if (accept(TokenKind::KwMe)) return Expr{Expr::MeAddr{}, loc};
        if (accept(TokenKind::KwReveal)) {
            expect(TokenKind::LParen);
            Expr inner = expr();
            expect(TokenKind::Comma);
            OwnerAtom target = owner();
            expect(TokenKind::RParen);
            return Expr{Expr::Reveal{std::move(inner), std::move(target)}, loc};
        }
        if (accept(TokenKind::LParen)) {
            Expr e = expr();
            expect(TokenKind::RParen);
            return e;
        }
        if (at(TokenKind::Ident)) return Expr::location(toks_[pos_++].text, {}, loc);
        fail({"expression"});
    }

    const std::vector<Token>& toks_;
    Token eof_;
    std::size_t pos_ = 0;
};

}  // namespace

ContractAst parse(const std::vector<Token>& tokens) { return Parser(tokens).contract(); }

ContractAst parseSource(std::string_view source) { return parse(tokenize(source)); }

Expr parseExpression(std::string_view source) {
    auto toks = tokenize(source);
    return Parser(toks).standaloneExpr();
}

}  // namespace cloak::frontend
