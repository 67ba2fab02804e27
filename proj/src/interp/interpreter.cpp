#include "cloak/interp/interpreter.hpp"

#include "cloak/frontend/printer.hpp"

namespace cloak::interp {

using namespace frontend;
using DK = DataType::Kind;

std::string_view abortReasonName(AbortReason r) {
    switch (r) {
        case AbortReason::RequireFailed: return "RequireFailed";
        case AbortReason::Overflow: return "Overflow";
        case AbortReason::StepBudgetExceeded: return "StepBudgetExceeded";
        case AbortReason::TypeMismatch: return "TypeMismatch";
        case AbortReason::UnavailableState: return "UnavailableState";
    }
    return "?";
}

std::string returnName(const FunctionDecl& f, std::size_t i) {
    const auto& n = f.returns.at(i).name;
    return n.empty() ? "$" + std::to_string(i) : n;
}

namespace {

struct AbortSignal {
    ExecAbort info;
};

[[noreturn]] void abortWith(AbortReason r, std::string msg, SourceLoc loc) { throw AbortSignal{{r, std::move(msg), loc}}; }

struct Slot {
    Value value;
    DataType type;
};

class Machine {
  public:
    Machine(const ContractAst& F, const StateStore& state, const Address& caller, const ExecOptions& opts)
        : F_(F), original_(state), state_(state), caller_(caller), opts_(opts) {}

    ExecResult run(const FunctionDecl& f, const std::map<std::string, Value>& params) {
        ExecResult res;
        for (std::size_t i = 0; i < f.returns.size(); ++i) res.returnOrder.push_back(returnName(f, i));
        try {
            scopes_.emplace_back();
            for (const auto& p : f.params) {
                auto it = params.find(p.name);
                if (it == params.end()) abortWith(AbortReason::TypeMismatch, "missing parameter '" + p.name + "'", p.loc);
                if (!hasType(it->second, p.type.data))
                    abortWith(AbortReason::TypeMismatch, "parameter '" + p.name + "' expects " + printDataType(p.type.data), p.loc);
                scopes_.back()[p.name] = {it->second, p.type.data};
            }
            for (std::size_t i = 0; i < f.returns.size(); ++i)
                scopes_.back()[res.returnOrder[i]] = {defaultValue(f.returns[i].type.data), f.returns[i].type.data};
            block(f.body, &f);
            for (const auto& name : res.returnOrder) res.returns[name] = scopes_.front()[name].value;
            res.newState = std::move(state_);
            res.written = std::move(written_);
        } catch (const AbortSignal& a) {
            res.abort = a.info;
            res.returns.clear();
            res.newState = original_;
            res.written.clear();
        }
        res.steps = steps_;
        return res;
    }

  private:
    void tick(SourceLoc loc) {
        if (++steps_ > opts_.stepBudget) abortWith(AbortReason::StepBudgetExceeded, "step budget exhausted", loc);
    }

    // -- storage ----------------------------------------------------------------

    Slot* local(const std::string& name) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return &f->second;
        }
        return nullptr;
    }

    static Value& element(Value& v, const Value& idx, SourceLoc loc) {
        if (!v.isArray()) abortWith(AbortReason::TypeMismatch, "indexing a non-array value", loc);
        auto& items = v.asArray().items;
        if (!idx.isU256() || idx.asU256() >= items.size())
            abortWith(AbortReason::TypeMismatch, "array index " + idx.str() + " out of bounds (length " + std::to_string(items.size()) + ")", loc);
        return items[static_cast<std::size_t>(idx.asU256())];
    }

    /// Resolves a state location to its cell, the data type stored in that
    /// cell, and the indexes that still apply inside the cell's value.
    struct StateRef {
        CellId cell;
        DataType cellType;
        std::vector<Value> rest;
    };

    StateRef stateRef(const StateVar& sv, const std::vector<Value>& idx, SourceLoc loc) {
        const DataType* t = &sv.type.data;
        std::size_t used = 0;
        std::vector<Value> keys;
        while (t->isMapping() && used < idx.size()) {
            keys.push_back(idx[used++]);
            t = &t->value->data;
        }
        if (sv.type.data.isMapping() && keys.empty()) abortWith(AbortReason::TypeMismatch, "mapping '" + sv.name + "' used as a value", loc);
        if (t->isMapping()) abortWith(AbortReason::TypeMismatch, "partially indexed mapping '" + sv.name + "'", loc);
        StateRef r;
        if (keys.empty()) r.cell = CellId::scalar(sv.name);
        else if (keys.size() == 1) r.cell = CellId::entry(sv.name, keys[0]);
        else r.cell = CellId::entry(sv.name, Value(ArrayV{keys}));
        r.cellType = *t;
        r.rest.assign(idx.begin() + static_cast<std::ptrdiff_t>(used), idx.end());
        return r;
    }

    void checkAvailable(const CellId& c, SourceLoc loc) {
        if (opts_.unavailable && opts_.unavailable->count(c)) abortWith(AbortReason::UnavailableState, "state cell " + c.str() + " is not available", loc);
    }

    Value readState(const StateRef& r, SourceLoc loc) {
        checkAvailable(r.cell, loc);
        if (opts_.log) opts_.log->reads.insert(r.cell);
        Value v = state_.read(r.cell, r.cellType);
        Value* cur = &v;
        for (const auto& i : r.rest) cur = &element(*cur, i, loc);
        return *cur;
    }

    std::vector<Value> indexValues(const Expr::Location& l) {
        std::vector<Value> out;
        for (const auto& i : l.indexes) out.push_back(eval(i));
        return out;
    }

    Value readLocation(const Expr::Location& l, SourceLoc loc) {
        auto idx = indexValues(l);
        if (auto* s = local(l.base)) {
            Value* cur = &s->value;
            for (const auto& i : idx) cur = &element(*cur, i, loc);
            return *cur;
        }
        const auto* sv = F_.findState(l.base);
        if (!sv) abortWith(AbortReason::TypeMismatch, "unbound identifier '" + l.base + "'", loc);
        return readState(stateRef(*sv, idx, loc), loc);
    }

    void writeLocation(const Expr::Location& l, Value v, SourceLoc loc) {
        auto idx = indexValues(l);
        if (auto* s = local(l.base)) {
            Value* cur = &s->value;
            for (const auto& i : idx) cur = &element(*cur, i, loc);
            *cur = std::move(v);
            return;
        }
        const auto* sv = F_.findState(l.base);
        if (!sv) abortWith(AbortReason::TypeMismatch, "unbound identifier '" + l.base + "'", loc);
        auto r = stateRef(*sv, idx, loc);
        if (r.rest.empty()) {
            state_.write(r.cell, std::move(v));
        } else {
            checkAvailable(r.cell, loc);
            if (opts_.log) opts_.log->reads.insert(r.cell);
            Value whole = state_.read(r.cell, r.cellType);
            Value* cur = &whole;
            for (const auto& i : r.rest) cur = &element(*cur, i, loc);
            *cur = std::move(v);
            state_.write(r.cell, std::move(whole));
        }
        if (opts_.log) opts_.log->writes.insert(r.cell);
        written_.insert(r.cell);
    }

    // -- expressions ------------------------------------------------------------

    static const U256& num(const Value& v, SourceLoc loc) {
        if (!v.isU256()) abortWith(AbortReason::TypeMismatch, "expected uint256, got " + v.str(), loc);
        return v.asU256();
    }
    static bool truth(const Value& v, SourceLoc loc) {
        if (!v.isBool()) abortWith(AbortReason::TypeMismatch, "expected bool, got " + v.str(), loc);
        return v.asBool();
    }

    Value eval(const Expr& e) {
        if (const auto* c = e.as<Expr::Const>()) {
            if (c->kind == Expr::Const::Kind::Bool) return Value(c->boolean);
            try {
                return Value(U256(c->digits));
            } catch (const std::exception&) {
                abortWith(AbortReason::Overflow, "literal " + c->digits + " exceeds uint256", e.loc);
            }
        }
        if (e.as<Expr::MeAddr>()) return Value(caller_);
        if (const auto* l = e.as<Expr::Location>()) return readLocation(*l, e.loc);
        if (const auto* r = e.as<Expr::Reveal>()) return eval(*r->inner);
        if (const auto* t = e.as<Expr::Ternary>()) return truth(eval(*t->cond), e.loc) ? eval(*t->then) : eval(*t->otherwise);
        return apply(*e.as<Expr::NativeApply>(), e.loc);
    }

    Value apply(const Expr::NativeApply& a, SourceLoc loc) {
        const std::string& op = a.op;
        if (op == "&&") return Value(truth(eval(a.args[0]), loc) && truth(eval(a.args[1]), loc));
        if (op == "||") return Value(truth(eval(a.args[0]), loc) || truth(eval(a.args[1]), loc));
        if (op == "!") return Value(!truth(eval(a.args[0]), loc));
        if (op == "length") {
            Value v = eval(a.args[0]);
            if (!v.isArray()) abortWith(AbortReason::TypeMismatch, "length of a non-array", loc);
            return Value::u(v.asArray().items.size());
        }
        if (op == "-" && a.args.size() == 1) return arith("-", U256(0), num(eval(a.args[0]), loc), loc);

        Value x = eval(a.args.at(0));
        Value y = eval(a.args.at(1));
        if (op == "==") return Value(x == y);
        if (op == "!=") return Value(!(x == y));
        const U256& l = num(x, loc);
        const U256& r = num(y, loc);
        if (op == "<") return Value(l < r);
        if (op == ">") return Value(l > r);
        if (op == "<=") return Value(l <= r);
        if (op == ">=") return Value(l >= r);
        return arith(op, l, r, loc);
    }

    static Value arith(const std::string& op, const U256& l, const U256& r, SourceLoc loc) {
        try {
            if (op == "+") return Value(U256(l + r));
            if (op == "-") return Value(U256(l - r));
            if (op == "*") return Value(U256(l * r));
            if (op == "/" || op == "%") {
                if (r == 0) abortWith(AbortReason::Overflow, "division by zero", loc);
                return Value(op == "/" ? U256(l / r) : U256(l % r));
            }
        } catch (const std::overflow_error&) {
            abortWith(AbortReason::Overflow, "arithmetic overflow in " + l.str() + " " + op + " " + r.str(), loc);
        } catch (const std::range_error&) {
            abortWith(AbortReason::Overflow, "arithmetic underflow in " + l.str() + " " + op + " " + r.str(), loc);
        }
        abortWith(AbortReason::TypeMismatch, "unknown operator '" + op + "'", loc);
    }

    // -- statements -------------------------------------------------------------

    void block(const Stmt::Seq& seq, const FunctionDecl* fn = nullptr) {
        scopes_.emplace_back();
        for (const auto& s : seq.stmts) stmt(s, fn);
        scopes_.pop_back();
    }

    void stmt(const Stmt& s, const FunctionDecl* fn) {
        tick(s.loc);
        if (s.as<Stmt::Skip>()) return;
        if (const auto* d = s.as<Stmt::Decl>()) {
            scopes_.back()[d->name] = {defaultValue(d->type.data), d->type.data};
        } else if (const auto* a = s.as<Stmt::Assign>()) {
            Value v = eval(a->value);
            writeLocation(*a->target.as<Expr::Location>(), std::move(v), s.loc);
        } else if (const auto* q = s.as<Stmt::Seq>()) {
            block(*q);
        } else if (const auto* r = s.as<Stmt::Require>()) {
            if (!truth(eval(r->cond), s.loc)) abortWith(AbortReason::RequireFailed, "require(" + printExpr(r->cond) + ") failed", s.loc);
        } else if (const auto* i = s.as<Stmt::If>()) {
            block(truth(eval(i->cond), s.loc) ? i->thenBlock : i->elseBlock);
        } else if (const auto* w = s.as<Stmt::While>()) {
            while (truth(eval(w->cond), s.loc)) {
                block(w->body);
                tick(s.loc);
            }
        } else if (const auto* r = s.as<Stmt::Return>()) {
            if (!fn || fn->returns.size() != r->values.size())
                abortWith(AbortReason::TypeMismatch, "return arity does not match the declaration", s.loc);
            for (std::size_t i = 0; i < r->values.size(); ++i) scopes_.front()[returnName(*fn, i)].value = eval(r->values[i]);
        }
    }

    const ContractAst& F_;
    const StateStore& original_;
    StateStore state_;
    Address caller_;
    ExecOptions opts_;
    std::vector<std::map<std::string, Slot>> scopes_;
    std::set<CellId> written_;
    std::uint64_t steps_ = 0;
};

}  // namespace

ExecResult execFunction(const ContractAst& F, const FunctionDecl& f, const StateStore& state, const std::map<std::string, Value>& params,
                        const Address& caller, const ExecOptions& opts) {
    return Machine(F, state, caller, opts).run(f, params);
}

}  // namespace cloak::interp
