#include "cloak/frontend/printer.hpp"

#include <sstream>

namespace cloak::frontend {

std::string printOwner(const OwnerAtom& o) {
    switch (o.kind) {
        case OwnerAtom::Kind::All: return "all";
        case OwnerAtom::Kind::Tee: return "tee";
        case OwnerAtom::Kind::Me: return "me";
        case OwnerAtom::Kind::Named: return o.name;
    }
    return "?";
}

std::string printDataType(const DataType& t) {
    switch (t.kind) {
        case DataType::Kind::Bool: return "bool";
        case DataType::Kind::Uint256: return "uint256";
        case DataType::Kind::Address: return "address";
        case DataType::Kind::Bin: return "bin";
        case DataType::Kind::Mapping:
            return "mapping(" + printDataType(*t.key) + " => " + printType(*t.value) + ")";
        case DataType::Kind::NamedMapping:
            return "mapping(address!" + t.tag + " => " + printType(*t.value) + ")";
        case DataType::Kind::Array: {
            const AnnotatedType& elem = *t.value;
            std::string inner = printDataType(elem.data);
            return elem.owner.isAll() ? inner + "[]" : inner + "[@" + printOwner(elem.owner) + "]";
        }
        case DataType::Kind::NamedAddressArray: return "address[!" + t.tag + "]";
    }
    return "?";
}

std::string printType(const AnnotatedType& t, bool explicitAll) {
    std::string s = printDataType(t.data);
    if (!t.owner.isAll() || explicitAll) s += " @" + printOwner(t.owner);
    return s;
}

namespace {

int exprPrecedence(const Expr& e) {
    if (e.as<Expr::Ternary>()) return 0;
    if (const auto* n = e.as<Expr::NativeApply>()) {
        const std::string& op = n->op;
        if (op == "length") return 9;
        if (n->args.size() == 1) return 7;
        if (op == "||") return 1;
        if (op == "&&") return 2;
        if (op == "==" || op == "!=") return 3;
        if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
        if (op == "+" || op == "-") return 5;
        return 6;
    }
    return 10;
}

std::string wrap(const Expr& e, bool parens) {
    std::string s = printExpr(e);
    return parens ? "(" + s + ")" : s;
}

}  // namespace

std::string printExpr(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Expr::Const>) {
                if (n.kind == Expr::Const::Kind::Bool) return n.boolean ? "true" : "false";
                return n.digits;
            } else if constexpr (std::is_same_v<T, Expr::MeAddr>) {
                return "me";
            } else if constexpr (std::is_same_v<T, Expr::Location>) {
                std::string s = n.base;
                for (const auto& ix : n.indexes) s += "[" + printExpr(ix) + "]";
                return s;
            } else if constexpr (std::is_same_v<T, Expr::Reveal>) {
                return "reveal(" + printExpr(*n.inner) + ", " + printOwner(n.target) + ")";
            } else if constexpr (std::is_same_v<T, Expr::NativeApply>) {
                int p = exprPrecedence(e);
                if (n.op == "length") return printExpr(n.args.at(0)) + ".length";
                if (n.args.size() == 1) return n.op + wrap(n.args[0], exprPrecedence(n.args[0]) < p);
                return wrap(n.args.at(0), exprPrecedence(n.args[0]) < p) + " " + n.op + " " +
                       wrap(n.args.at(1), exprPrecedence(n.args[1]) <= p);
            } else {
                return wrap(*n.cond, exprPrecedence(*n.cond) <= 0) + " ? " + printExpr(*n.then) + " : " +
                       printExpr(*n.otherwise);
            }
        },
        e.node);
}

namespace {

class ContractPrinter {
  public:
    std::string run(const ContractAst& c) {
        out_ << "contract " << c.name << " {\n";
        for (const auto& v : c.stateVars)
            line(1) << (v.isFinal ? "final " : "") << printType(v.type) << " " << v.name << ";\n";
        for (const auto& f : c.functions) {
            out_ << "\n";
            line(1) << "function " << f.name << "(" << params(f.params) << ") public";
            if (!f.returns.empty()) out_ << " returns (" << params(f.returns) << ")";
            out_ << " {\n";
            seq(f.body, 2);
            line(1) << "}\n";
        }
        out_ << "}\n";
        return out_.str();
    }

  private:
    std::ostream& line(int depth) {
        for (int i = 0; i < depth; ++i) out_ << "    ";
        return out_;
    }

    static std::string params(const std::vector<Param>& ps) {
        std::string s;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (i) s += ", ";
            s += printType(ps[i].type);
            if (!ps[i].name.empty()) s += " " + ps[i].name;
        }
        return s;
    }

    void seq(const Stmt::Seq& s, int depth) {
        for (const auto& st : s.stmts) stmt(st, depth);
    }

    void stmt(const Stmt& s, int depth) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Stmt::Skip>) {
                    line(depth) << ";\n";
                } else if constexpr (std::is_same_v<T, Stmt::Decl>) {
                    line(depth) << printType(n.type) << " " << n.name << ";\n";
                } else if constexpr (std::is_same_v<T, Stmt::Assign>) {
                    const auto* app = n.value.template as<Expr::NativeApply>();
                    if (n.compound && app && app->args.size() == 2)
                        line(depth) << printExpr(n.target) << " " << app->op << "= " << printExpr(app->args[1]) << ";\n";
                    else
                        line(depth) << printExpr(n.target) << " = " << printExpr(n.value) << ";\n";
                } else if constexpr (std::is_same_v<T, Stmt::Seq>) {
                    line(depth) << "{\n";
                    seq(n, depth + 1);
                    line(depth) << "}\n";
                } else if constexpr (std::is_same_v<T, Stmt::Require>) {
                    line(depth) << "require(" << printExpr(n.cond) << ");\n";
                } else if constexpr (std::is_same_v<T, Stmt::If>) {
                    line(depth) << "if (" << printExpr(n.cond) << ") {\n";
                    ifTail(n, depth);
                } else if constexpr (std::is_same_v<T, Stmt::While>) {
                    line(depth) << "while (" << printExpr(n.cond) << ") {\n";
                    seq(n.body, depth + 1);
                    line(depth) << "}\n";
                } else {
                    line(depth) << "return";
                    for (std::size_t i = 0; i < n.values.size(); ++i)
                        out_ << (i ? ", " : " ") << printExpr(n.values[i]);
                    out_ << ";\n";
                }
            },
            s.node);
    }

    void ifTail(const Stmt::If& n, int depth) {
        seq(n.thenBlock, depth + 1);
        if (n.elseBlock.stmts.empty()) {
            line(depth) << "}\n";
            return;
        }
        if (n.elseBlock.stmts.size() == 1) {
            if (const auto* nested = n.elseBlock.stmts[0].as<Stmt::If>()) {
                line(depth) << "} else if (" << printExpr(nested->cond) << ") {\n";
                ifTail(*nested, depth);
                return;
            }
        }
        line(depth) << "} else {\n";
        seq(n.elseBlock, depth + 1);
        line(depth) << "}\n";
    }

    std::ostringstream out_;
};

}  // namespace

std::string printContract(const ContractAst& c) { return ContractPrinter().run(c); }

}  // namespace cloak::frontend
