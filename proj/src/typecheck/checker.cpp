#include "cloak/typecheck/checker.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>

#include "cloak/frontend/printer.hpp"

namespace cloak::typecheck {

using frontend::printDataType;
using frontend::printExpr;
using DK = DataType::Kind;

std::string_view severityName(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Note: return "note";
    }
    return "?";
}

std::string Diagnostic::str(std::string_view file) const {
    std::string out;
    if (!file.empty()) out += std::string(file) + ":";
    out += loc.str() + ": " + std::string(severityName(severity)) + ": [" + code + "] " + message;
    return out;
}

std::string_view kindName(FunctionKind k) {
    switch (k) {
        case FunctionKind::PUT: return "PUT";
        case FunctionKind::PRT: return "PRT";
        case FunctionKind::MPT: return "MPT";
    }
    return "?";
}

std::string_view flowRuleName(FlowRule r) {
    switch (r) {
        case FlowRule::Public: return "public";
        case FlowRule::SameOwner: return "same-owner";
        case FlowRule::RuntimeOwner: return "runtime-owner";
        case FlowRule::JointUpdate: return "joint-update";
    }
    return "?";
}

bool CheckedContract::ok() const { return errorCount() == 0; }

std::size_t CheckedContract::errorCount() const {
    return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) { return d.isError(); }));
}

const FunctionInfo* CheckedContract::function(std::string_view name) const {
    for (const auto& f : functions)
        if (f.name == name) return &f;
    return nullptr;
}

FunctionKind CheckedContract::kindOf(std::string_view name) const {
    const auto* f = function(name);
    if (!f) throw std::out_of_range("no function " + std::string(name));
    return f->kind;
}

struct Collector {
    std::vector<Diagnostic> diagnostics;
    std::vector<ExprOwnerRecord> exprOwners;
    std::vector<AssignRecord> assigns;
    std::vector<RevealSite> reveals;
    std::vector<OwnerRef> functionOwners;  // alpha_o of the function being checked

    void error(std::string code, SourceLoc loc, std::string msg) { diagnostics.push_back({Severity::Error, std::move(code), loc, std::move(msg)}); }
    void note(std::string code, SourceLoc loc, std::string msg) { diagnostics.push_back({Severity::Note, std::move(code), loc, std::move(msg)}); }
};

namespace {

/// Data types equal up to owner annotations.
bool sameShape(const DataType& a, const DataType& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case DK::Mapping: return sameShape(*a.key, *b.key) && sameShape(a.value->data, b.value->data);
        case DK::NamedMapping:
        case DK::Array: return sameShape(a.value->data, b.value->data);
        default: return true;
    }
}

bool isAddress(const DataType& t) { return t.kind == DK::Address; }

const boost::multiprecision::cpp_int& uint256Max() {
    static const boost::multiprecision::cpp_int max = (boost::multiprecision::cpp_int(1) << 256) - 1;
    return max;
}

}  // namespace

// ---------------------------------------------------------------------------
// TypingContext

TypingContext::TypingContext(const ContractAst& contract, std::shared_ptr<Collector> sink, std::string function)
    : contract_(&contract), sink_(std::move(sink)), function_(std::move(function)) {
    if (!sink_) sink_ = std::make_shared<Collector>();
    scopes_.emplace_back();
    for (const auto& v : contract.stateVars) bind(v.name, v.type, Scope::State, v.isFinal);
}

void TypingContext::bind(const std::string& name, AnnotatedType type, Scope scope, bool isFinal) {
    if (type.data.kind == DK::NamedAddressArray) tagArrays_[type.data.tag] = name;
    scopes_.back()[name] = Binding{std::move(type), scope, isFinal};
}

void TypingContext::pushScope() { scopes_.emplace_back(); }

const TypingContext::Binding* TypingContext::lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
        auto f = it->find(name);
        if (f != it->end()) return &f->second;
    }
    return nullptr;
}

const std::string* TypingContext::arrayForTag(const std::string& tag) const {
    auto it = tagArrays_.find(tag);
    return it == tagArrays_.end() ? nullptr : &it->second;
}

OwnerRef TypingContext::resolveOwner(const OwnerAtom& atom, const std::map<std::string, OwnerRef>& tagEnv, SourceLoc loc) {
    switch (atom.kind) {
        case OwnerAtom::Kind::All: return OwnerRef::all();
        case OwnerAtom::Kind::Tee: return OwnerRef::tee();
        case OwnerAtom::Kind::Me: return OwnerRef::me();
        case OwnerAtom::Kind::Named: break;
    }
    if (auto it = tagEnv.find(atom.name); it != tagEnv.end()) return it->second;
    if (const auto* arr = arrayForTag(atom.name)) return OwnerRef::family(*arr);
    if (const auto* b = lookup(atom.name); b && isAddress(b->type.data)) return OwnerRef::var(atom.name);
    sink_->error("TypeError", loc, "owner '" + atom.name + "' is neither an address variable nor a tag in scope");
    return OwnerRef::opaque(atom.name);
}

OwnerRef TypingContext::addressOwner(const Expr& e) const {
    if (e.as<Expr::MeAddr>()) return OwnerRef::me();
    if (const auto* loc = e.as<Expr::Location>()) {
        const auto* b = lookup(loc->base);
        if (b && loc->indexes.empty() && isAddress(b->type.data)) return OwnerRef::var(loc->base);
        if (b && loc->indexes.size() == 1 && b->type.data.kind == DK::NamedAddressArray) {
            const Expr& idx = loc->indexes[0];
            return OwnerRef::element(loc->base, printExpr(idx), idx.as<Expr::Const>() == nullptr);
        }
    }
    return OwnerRef::opaque(printExpr(e));
}

// ---------------------------------------------------------------------------
// Expressions

namespace {

ExprType poisoned() {
    ExprType t{DataType::scalar(DK::Uint256), OwnerRef::all(), true};
    return t;
}

/// Owner join for operators: all if every operand is public, the operand owner
/// if exactly one private owner (up to equivalence) occurs, tee otherwise.
OwnerRef joinOwners(const TypingContext& ctx, const std::vector<OwnerRef>& owners) {
    std::optional<OwnerRef> first;
    for (const auto& o : owners) {
        if (o.isAll()) continue;
        if (o.isTee()) return OwnerRef::tee();
        if (!first) {
            first = o;
        } else if (!ctx.owners().same(*first, o)) {
            return OwnerRef::tee();
        }
    }
    return first ? *first : OwnerRef::all();
}

ExprType typeLocation(TypingContext& ctx, const Expr& e, const Expr::Location& loc);

ExprType record(TypingContext& ctx, const Expr& e, ExprType t) {
    auto& sink = ctx.sink();
    sink.functionOwners.push_back(t.owner);
    sink.exprOwners.push_back({ctx.functionName(), e.loc, printExpr(e), ctx.owners().rep(t.owner)});
    return t;
}

}  // namespace

ExprType typeOfExpr(TypingContext& ctx, const Expr& e) {
    auto& sink = ctx.sink();

    if (const auto* c = e.as<Expr::Const>()) {
        if (c->kind == Expr::Const::Kind::Bool) return record(ctx, e, {DataType::scalar(DK::Bool), OwnerRef::all()});
        boost::multiprecision::cpp_int v(c->digits);
        if (v > uint256Max()) {
            sink.error("TypeError", e.loc, "integer literal " + c->digits + " does not fit in uint256");
            return poisoned();
        }
        return record(ctx, e, {DataType::scalar(DK::Uint256), OwnerRef::all()});
    }
    if (e.as<Expr::MeAddr>()) return record(ctx, e, {DataType::scalar(DK::Address), OwnerRef::all()});
    if (const auto* loc = e.as<Expr::Location>()) {
        auto t = typeLocation(ctx, e, *loc);
        return t.poisoned ? t : record(ctx, e, std::move(t));
    }
    if (const auto* r = e.as<Expr::Reveal>()) {
        auto inner = typeOfExpr(ctx, *r->inner);
        if (inner.poisoned) return inner;
        if (!inner.data.isScalar()) {
            sink.error("TypeError", e.loc, "reveal expects a scalar value, got " + printDataType(inner.data));
            return poisoned();
        }
        sink.reveals.push_back({ctx.functionName(), e.loc, printExpr(*r->inner), r->target.str()});
        return record(ctx, e, {inner.data, ctx.resolveOwner(r->target, {}, e.loc)});
    }
    if (const auto* t = e.as<Expr::Ternary>()) {
        auto c = typeOfExpr(ctx, *t->cond);
        auto a = typeOfExpr(ctx, *t->then);
        auto b = typeOfExpr(ctx, *t->otherwise);
        if (c.poisoned || a.poisoned || b.poisoned) return poisoned();
        if (c.data.kind != DK::Bool) {
            sink.error("TypeError", t->cond->loc, "condition must be bool, got " + printDataType(c.data));
            return poisoned();
        }
        if (!a.data.isScalar() || !sameShape(a.data, b.data)) {
            sink.error("TypeError", e.loc, "ternary branches have types " + printDataType(a.data) + " and " + printDataType(b.data));
            return poisoned();
        }
        if (c.owner.isPrivate()) sink.note("PrivateBranch", e.loc, "ternary selects on private data owned by " + ctx.owners().rep(c.owner));
        return record(ctx, e, {a.data, joinOwners(ctx, {c.owner, a.owner, b.owner})});
    }

    const auto& app = *e.as<Expr::NativeApply>();
    std::vector<ExprType> args;
    for (const auto& a : app.args) args.push_back(typeOfExpr(ctx, a));
    for (const auto& a : args)
        if (a.poisoned) return poisoned();

    auto fail = [&](const std::string& what) {
        std::string got;
        for (const auto& a : args) got += (got.empty() ? "" : ", ") + printDataType(a.data);
        sink.error("TypeError", e.loc, "operator '" + app.op + "' " + what + " (got " + got + ")");
        return poisoned();
    };
    auto all = [&](DK k) { return std::all_of(args.begin(), args.end(), [&](const ExprType& a) { return a.data.kind == k; }); };

    std::vector<OwnerRef> owners;
    for (const auto& a : args) owners.push_back(a.owner);
    const std::string& op = app.op;

    DataType result;
    if (op == "length") {
        if (args.size() != 1 || !args[0].data.isArray()) return fail("applies to arrays only");
        // The length of an array is public even when its elements are not.
        return record(ctx, e, {DataType::scalar(DK::Uint256), OwnerRef::all()});
    } else if (op == "!") {
        if (args.size() != 1 || !all(DK::Bool)) return fail("expects bool");
        result = DataType::scalar(DK::Bool);
    } else if (op == "-" && args.size() == 1) {
        if (!all(DK::Uint256)) return fail("expects uint256");
        result = DataType::scalar(DK::Uint256);
    } else if (op == "+" || op == "-" || op == "*" || op == "/" || op == "%") {
        if (args.size() != 2 || !all(DK::Uint256)) return fail("expects uint256 operands");
        result = DataType::scalar(DK::Uint256);
    } else if (op == "<" || op == ">" || op == "<=" || op == ">=") {
        if (args.size() != 2 || !all(DK::Uint256)) return fail("expects uint256 operands");
        result = DataType::scalar(DK::Bool);
    } else if (op == "==" || op == "!=") {
        if (args.size() != 2 || !args[0].data.isScalar() || !sameShape(args[0].data, args[1].data)) return fail("expects two scalars of the same type");
        result = DataType::scalar(DK::Bool);
    } else if (op == "&&" || op == "||") {
        if (args.size() != 2 || !all(DK::Bool)) return fail("expects bool operands");
        result = DataType::scalar(DK::Bool);
    } else {
        sink.error("TypeError", e.loc, "unknown operator '" + op + "'");
        return poisoned();
    }
    return record(ctx, e, {result, joinOwners(ctx, owners)});
}

namespace {

ExprType typeLocation(TypingContext& ctx, const Expr& e, const Expr::Location& loc) {
    auto& sink = ctx.sink();
    const auto* b = ctx.lookup(loc.base);
    if (!b) {
        sink.error("TypeError", e.loc, "unbound identifier '" + loc.base + "'");
        return poisoned();
    }
    AnnotatedType cur = b->type;
    std::map<std::string, OwnerRef> tagEnv;
    std::optional<OwnerRef> elementOwner;
    std::string path = loc.base;

    for (const auto& idx : loc.indexes) {
        auto it = typeOfExpr(ctx, idx);
        if (it.poisoned) return it;
        elementOwner.reset();
        const DataType& d = cur.data;
        switch (d.kind) {
            case DK::Mapping:
                if (!sameShape(*d.key, it.data)) {
                    sink.error("TypeError", idx.loc, "mapping key of '" + path + "' expects " + printDataType(*d.key) + ", got " + printDataType(it.data));
                    return poisoned();
                }
                break;
            case DK::NamedMapping:
                if (it.data.kind != DK::Address) {
                    sink.error("TypeError", idx.loc, "mapping key of '" + path + "' expects address, got " + printDataType(it.data));
                    return poisoned();
                }
                tagEnv[d.tag] = ctx.addressOwner(idx);
                break;
            case DK::Array:
            case DK::NamedAddressArray:
                if (it.data.kind != DK::Uint256) {
                    sink.error("TypeError", idx.loc, "array index of '" + path + "' must be uint256, got " + printDataType(it.data));
                    return poisoned();
                }
                if (d.kind == DK::Array && d.value->owner.kind == OwnerAtom::Kind::Named) {
                    if (const auto* arr = ctx.arrayForTag(d.value->owner.name))
                        elementOwner = OwnerRef::element(*arr, printExpr(idx), idx.as<Expr::Const>() == nullptr);
                }
                break;
            default:
                sink.error("TypeError", idx.loc, "'" + path + "' of type " + printDataType(d) + " is not indexable");
                return poisoned();
        }
        AnnotatedType next = d.elementType();
        cur = std::move(next);
        path += "[" + printExpr(idx) + "]";
    }

    if (elementOwner) return {cur.data, *elementOwner};
    // A whole named array/mapping: its values belong to a family of owners.
    if (cur.data.kind == DK::Array && cur.data.value->owner.kind == OwnerAtom::Kind::Named && ctx.arrayForTag(cur.data.value->owner.name))
        return {cur.data, OwnerRef::family(*ctx.arrayForTag(cur.data.value->owner.name))};
    if (cur.data.kind == DK::NamedMapping) return {cur.data, OwnerRef::family(path)};
    if (cur.data.kind == DK::NamedAddressArray) return {cur.data, OwnerRef::all()};
    if (!cur.data.isScalar()) return {cur.data, ctx.resolveOwner(cur.data.value->owner, tagEnv, e.loc)};
    return {cur.data, ctx.resolveOwner(cur.owner, tagEnv, e.loc)};
}

bool isDynamicElement(const OwnerRef& o) { return o.kind == OwnerRef::Kind::Element && o.dynamicIndex; }

void checkFlow(TypingContext& ctx, SourceLoc loc, const std::string& targetText, const OwnerRef& target, const OwnerRef& value,
               bool compound, bool isReturn) {
    auto& sink = ctx.sink();
    std::optional<FlowRule> rule;
    if (value.isAll()) {
        rule = FlowRule::Public;
    } else if (ctx.owners().same(target, value)) {
        rule = FlowRule::SameOwner;
    } else if (isDynamicElement(value)) {
        rule = FlowRule::RuntimeOwner;
        sink.note("RuntimeOwnerFlow", loc,
                  "value owned by " + value.key() + " flows to " + targetText + " (owner " + target.key() + "); ownership resolved at execution");
    } else if (compound) {
        rule = FlowRule::JointUpdate;
        sink.note("JointUpdate", loc, targetText + " (owner " + target.key() + ") updated with data owned by " + value.key());
    }
    if (!rule) {
        std::string what = isReturn ? "returned as " : "assigned to ";
        if (value.isTee())
            sink.error("PrivacyViolation", loc,
                       "value combining data of several owners is " + what + targetText + " (owner " + target.key() + "); an explicit reveal is required");
        else
            sink.error("PrivacyViolation", loc,
                       "value owned by " + ctx.owners().rep(value) + " is " + what + targetText + " owned by " + ctx.owners().rep(target) + " without reveal");
        return;
    }
    sink.assigns.push_back({ctx.functionName(), loc, targetText, ctx.owners().rep(target), ctx.owners().rep(value), *rule});
}

bool isAddressLocation(const TypingContext& ctx, const Expr& e) {
    if (e.as<Expr::MeAddr>()) return true;
    const auto* loc = e.as<Expr::Location>();
    if (!loc) return false;
    const auto* b = ctx.lookup(loc->base);
    if (!b) return false;
    if (loc->indexes.empty()) return isAddress(b->type.data);
    return loc->indexes.size() == 1 && b->type.data.kind == DK::NamedAddressArray;
}

ExprType typeCondition(TypingContext& ctx, const Expr& cond, const char* what) {
    auto t = typeOfExpr(ctx, cond);
    if (!t.poisoned && t.data.kind != DK::Bool) {
        ctx.sink().error("TypeError", cond.loc, std::string(what) + " condition must be bool, got " + printDataType(t.data));
        t.poisoned = true;
    }
    return t;
}

TypingContext checkBlock(TypingContext ctx, const Stmt::Seq& seq) {
    ctx.pushScope();
    for (const auto& s : seq.stmts) ctx = checkStmt(std::move(ctx), s);
    return ctx;
}

}  // namespace

// ---------------------------------------------------------------------------
// Statements

TypingContext checkStmt(TypingContext ctx, const Stmt& s) {
    auto& sink = ctx.sink();

    if (s.as<Stmt::Skip>()) return ctx;

    if (const auto* d = s.as<Stmt::Decl>()) {
        if (const auto* prev = ctx.lookup(d->name); prev && prev->scope == TypingContext::Scope::Local) {
            // Redeclaration within the same function body.
            sink.error("TypeError", s.loc, "'" + d->name + "' is already declared");
            return ctx;
        }
        if (d->type.data.isMapping()) {
            sink.error("TypeError", s.loc, "mappings cannot be declared as local variables");
            return ctx;
        }
        ctx.bind(d->name, d->type, TypingContext::Scope::Local);
        ctx.resolveOwner(d->type.owner, {}, s.loc);
        return ctx;
    }

    if (const auto* a = s.as<Stmt::Assign>()) {
        const auto* target = a->target.as<Expr::Location>();
        if (!target) {
            sink.error("TypeError", s.loc, "assignment target must be a location");
            return ctx;
        }
        const auto* b = ctx.lookup(target->base);
        if (b && b->isFinal && b->scope == TypingContext::Scope::State) {
            sink.error("TypeError", s.loc, "cannot assign to final state variable '" + target->base + "'");
            return ctx;
        }
        auto lt = typeOfExpr(ctx, a->target);
        auto rt = typeOfExpr(ctx, a->value);
        if (lt.poisoned || rt.poisoned) return ctx;
        if (!sameShape(lt.data, rt.data)) {
            sink.error("TypeError", s.loc, "cannot assign " + printDataType(rt.data) + " to " + printExpr(a->target) + " of type " + printDataType(lt.data));
            return ctx;
        }
        // For `x op= e` the flow of interest is e into x.
        OwnerRef value = rt.owner;
        if (a->compound) {
            const auto& app = *a->value.as<Expr::NativeApply>();
            // Re-type the operand without recording it a second time.
            auto nOwners = sink.functionOwners.size(), nExprs = sink.exprOwners.size(), nReveals = sink.reveals.size();
            std::vector<OwnerRef> others;
            for (std::size_t i = 1; i < app.args.size(); ++i) others.push_back(typeOfExpr(ctx, app.args[i]).owner);
            sink.functionOwners.resize(nOwners);
            sink.exprOwners.resize(nExprs);
            sink.reveals.resize(nReveals);
            value = joinOwners(ctx, others);
        }
        checkFlow(ctx, s.loc, printExpr(a->target), lt.owner, value, a->compound, false);

        // A final address state variable copied into an address local denotes the same owner.
        if (!a->compound && target->indexes.empty() && b && isAddress(b->type.data) && b->scope != TypingContext::Scope::State) {
            if (const auto* src = a->value.as<Expr::Location>(); src && src->indexes.empty()) {
                const auto* sb = ctx.lookup(src->base);
                if (sb && sb->scope == TypingContext::Scope::State && sb->isFinal && isAddress(sb->type.data))
                    ctx.owners().merge(OwnerRef::var(target->base), OwnerRef::var(src->base));
            }
        }
        return ctx;
    }

    if (const auto* seq = s.as<Stmt::Seq>()) return checkBlock(std::move(ctx), *seq);

    if (const auto* r = s.as<Stmt::Require>()) {
        auto t = typeCondition(ctx, r->cond, "require");
        if (t.poisoned) return ctx;
        // require(a == b) over addresses: both sides denote the same owner from here on.
        if (const auto* app = r->cond.as<Expr::NativeApply>(); app && app->op == "==" && app->args.size() == 2) {
            if (isAddressLocation(ctx, app->args[0]) && isAddressLocation(ctx, app->args[1]))
                ctx.owners().merge(ctx.addressOwner(app->args[0]), ctx.addressOwner(app->args[1]));
        }
        return ctx;
    }

    if (const auto* i = s.as<Stmt::If>()) {
        auto t = typeCondition(ctx, i->cond, "if");
        if (!t.poisoned && t.owner.isPrivate()) sink.note("PrivateBranch", s.loc, "branch on private data owned by " + ctx.owners().rep(t.owner));
        checkBlock(ctx, i->thenBlock);
        checkBlock(ctx, i->elseBlock);
        return ctx;
    }

    if (const auto* w = s.as<Stmt::While>()) {
        auto t = typeCondition(ctx, w->cond, "while");
        if (!t.poisoned && t.owner.isPrivate()) sink.note("PrivateBranch", s.loc, "loop on private data owned by " + ctx.owners().rep(t.owner));
        checkBlock(ctx, w->body);
        return ctx;
    }

    const auto& ret = *s.as<Stmt::Return>();
    std::vector<const TypingContext::Binding*> declared;
    const auto* fn = ctx.contract().findFunction(ctx.functionName());
    if (!fn || fn->returns.size() != ret.values.size()) {
        sink.error("TypeError", s.loc,
                   "return with " + std::to_string(ret.values.size()) + " values in a function declaring " + std::to_string(fn ? fn->returns.size() : 0));
        return ctx;
    }
    for (std::size_t k = 0; k < ret.values.size(); ++k) {
        const auto& decl = fn->returns[k];
        auto vt = typeOfExpr(ctx, ret.values[k]);
        if (vt.poisoned) continue;
        if (!sameShape(decl.type.data, vt.data)) {
            sink.error("TypeError", ret.values[k].loc, "return value " + std::to_string(k) + " has type " + printDataType(vt.data) + ", expected " + printDataType(decl.type.data));
            continue;
        }
        checkFlow(ctx, ret.values[k].loc, "return value '" + decl.name + "'", ctx.resolveOwner(decl.type.owner, {}, decl.loc), vt.owner, false, true);
    }
    return ctx;
}

// ---------------------------------------------------------------------------
// Functions and contracts

FunctionKind classifyOwners(const std::set<std::string>& ownerSet) {
    std::size_t priv = 0;
    for (const auto& o : ownerSet) {
        if (o == "tee") return FunctionKind::MPT;
        // Every element of a named array may belong to a different party.
        if (o.ends_with("[*]")) return FunctionKind::MPT;
        if (o != "all") ++priv;
    }
    if (priv == 0) return FunctionKind::PUT;
    return priv == 1 ? FunctionKind::PRT : FunctionKind::MPT;
}

namespace {

/// Owner of a declared parameter/return type for alpha_o: element owners of
/// named arrays count as the family of that array.
OwnerRef declaredOwner(TypingContext& ctx, const frontend::Param& p) {
    const DataType& d = p.type.data;
    if (d.kind == DK::Array) {
        if (d.value->owner.kind == OwnerAtom::Kind::Named)
            if (const auto* arr = ctx.arrayForTag(d.value->owner.name)) return OwnerRef::family(*arr);
        return ctx.resolveOwner(d.value->owner, {}, p.loc);
    }
    if (d.isScalar()) return ctx.resolveOwner(p.type.owner, {}, p.loc);
    return OwnerRef::all();
}

void checkDeclaredType(TypingContext& ctx, const AnnotatedType& t, SourceLoc loc, const std::string& what, std::vector<PairedArrays>* paired,
                       const std::string& function, const std::string& name) {
    auto& sink = ctx.sink();
    const DataType& d = t.data;
    switch (d.kind) {
        case DK::Mapping:
            if (!d.key->isScalar()) sink.error("TypeError", loc, what + ": mapping keys must be bool, uint256, address or bin");
            if (d.value->data.isMapping()) sink.error("TypeError", loc, what + ": nested mappings are not supported");
            ctx.resolveOwner(d.value->owner, {}, loc);
            return;
        case DK::NamedMapping: {
            if (d.value->data.isMapping() || d.value->data.isArray())
                sink.error("TypeError", loc, what + ": named mapping values must be scalars");
            std::map<std::string, OwnerRef> env{{d.tag, OwnerRef::family(name)}};
            ctx.resolveOwner(d.value->owner, env, loc);
            return;
        }
        case DK::Array:
            if (!d.value->data.isScalar()) sink.error("TypeError", loc, what + ": array elements must be scalars");
            if (d.value->owner.kind == OwnerAtom::Kind::Named) {
                if (const auto* arr = ctx.arrayForTag(d.value->owner.name)) {
                    if (paired) paired->push_back({function, *arr, name, d.value->owner.name});
                    return;
                }
            }
            ctx.resolveOwner(d.value->owner, {}, loc);
            return;
        case DK::NamedAddressArray: return;
        default: ctx.resolveOwner(t.owner, {}, loc); return;
    }
}

FunctionInfo checkFunction(const ContractAst& contract, const FunctionDecl& f, const std::shared_ptr<Collector>& sink,
                           std::vector<PairedArrays>* paired) {
    sink->functionOwners.clear();
    TypingContext ctx(contract, sink, f.name);
    ctx.pushScope();

    std::set<std::string> seen;
    auto bindParam = [&](const frontend::Param& p, TypingContext::Scope scope) {
        if (p.name.empty()) return;
        if (!seen.insert(p.name).second) sink->error("TypeError", p.loc, "duplicate parameter '" + p.name + "'");
        if (p.type.data.isMapping()) sink->error("TypeError", p.loc, "'" + p.name + "': mappings cannot be parameters or returns");
        ctx.bind(p.name, p.type, scope);
    };
    // Bind everything first so owners may refer to any parameter or return name.
    for (const auto& p : f.params) bindParam(p, TypingContext::Scope::Param);
    for (const auto& r : f.returns) bindParam(r, TypingContext::Scope::Return);
    for (const auto& p : f.params) checkDeclaredType(ctx, p.type, p.loc, "parameter '" + p.name + "'", paired, f.name, p.name);
    for (const auto& r : f.returns) checkDeclaredType(ctx, r.type, r.loc, "return '" + r.name + "'", paired, f.name, r.name);

    for (const auto* list : {&f.params, &f.returns})
        for (const auto& p : *list) sink->functionOwners.push_back(declaredOwner(ctx, p));

    TypingContext after = ctx;
    for (const auto& s : f.body.stmts) after = checkStmt(std::move(after), s);

    FunctionInfo info;
    info.name = f.name;
    for (const auto& o : sink->functionOwners) info.ownerSet.insert(after.owners().rep(o));
    info.kind = classifyOwners(info.ownerSet);
    return info;
}

}  // namespace

FunctionInfo classifyFunction(const ContractAst& contract, const FunctionDecl& f, std::vector<Diagnostic>* diags) {
    auto sink = std::make_shared<Collector>();
    auto info = checkFunction(contract, f, sink, nullptr);
    if (diags) *diags = std::move(sink->diagnostics);
    return info;
}

CheckedContract checkContract(const ContractAst& ast) {
    CheckedContract out;
    out.ast = ast;
    auto sink = std::make_shared<Collector>();

    {
        TypingContext ctx(ast, sink);
        std::set<std::string> names;
        for (const auto& v : ast.stateVars) {
            if (!names.insert(v.name).second) sink->error("TypeError", v.loc, "duplicate state variable '" + v.name + "'");
            if (v.isFinal && !v.type.data.isScalar()) sink->error("TypeError", v.loc, "only scalar state variables can be final");
            checkDeclaredType(ctx, v.type, v.loc, "state variable '" + v.name + "'", &out.pairedArrays, {}, v.name);
        }
        std::set<std::string> fnames;
        for (const auto& f : ast.functions) {
            if (!fnames.insert(f.name).second) sink->error("TypeError", f.loc, "duplicate function '" + f.name + "'");
            if (names.count(f.name)) sink->error("TypeError", f.loc, "function '" + f.name + "' shadows a state variable");
        }
    }

    for (const auto& f : ast.functions) out.functions.push_back(checkFunction(ast, f, sink, &out.pairedArrays));

    out.diagnostics = std::move(sink->diagnostics);
    out.exprOwners = std::move(sink->exprOwners);
    out.assigns = std::move(sink->assigns);
    out.reveals = std::move(sink->reveals);
    return out;
}

}  // namespace cloak::typecheck
