#include "cloak/codegen/policy.hpp"

#include <algorithm>
#include <set>

namespace cloak::codegen {

using namespace frontend;

bool FunctionPolicy::readsVar(std::string_view var) const {
    return std::any_of(reads.begin(), reads.end(), [&](const DataPolicy& d) { return d.id == var; });
}

bool FunctionPolicy::mutatesVar(std::string_view var) const {
    return std::any_of(mutates.begin(), mutates.end(), [&](const DataPolicy& d) { return d.id == var; });
}

const FunctionPolicy* ContractPolicy::function(std::string_view id) const {
    for (const auto& f : functions)
        if (f.id == id) return &f;
    return nullptr;
}

const DataPolicy* ContractPolicy::state(std::string_view id) const {
    for (const auto& s : states)
        if (s.id == id) return &s;
    return nullptr;
}

namespace {

class AccessWalker {
  public:
    AccessWalker(const ContractAst& c, const FunctionDecl& f) : contract_(c) {
        scopes_.emplace_back();
        for (const auto* list : {&f.params, &f.returns})
            for (const auto& p : *list)
                if (!p.name.empty()) scopes_.back().insert(p.name);
        block(f.body);
    }

    AccessSets result() const {
        AccessSets out;
        for (const auto& v : contract_.stateVars) {
            if (reads_.count(v.name)) out.reads.push_back(v.name);
            if (writes_.count(v.name)) out.mutates.push_back(v.name);
        }
        return out;
    }

  private:
    bool isState(const std::string& name) const {
        for (const auto& s : scopes_)
            if (s.count(name)) return false;
        return contract_.findState(name) != nullptr;
    }

    void expr(const Expr& e) {
        if (const auto* l = e.as<Expr::Location>()) {
            if (isState(l->base)) reads_.insert(l->base);
            for (const auto& i : l->indexes) expr(i);
        } else if (const auto* r = e.as<Expr::Reveal>()) {
            expr(*r->inner);
        } else if (const auto* a = e.as<Expr::NativeApply>()) {
            for (const auto& x : a->args) expr(x);
        } else if (const auto* t = e.as<Expr::Ternary>()) {
            expr(*t->cond);
            expr(*t->then);
            expr(*t->otherwise);
        }
    }

    void block(const Stmt::Seq& seq) {
        scopes_.emplace_back();
        for (const auto& s : seq.stmts) stmt(s);
        scopes_.pop_back();
    }

    void stmt(const Stmt& s) {
        if (const auto* d = s.as<Stmt::Decl>()) {
            scopes_.back().insert(d->name);
        } else if (const auto* a = s.as<Stmt::Assign>()) {
            const auto& target = *a->target.as<Expr::Location>();
            if (isState(target.base)) writes_.insert(target.base);
            for (const auto& i : target.indexes) expr(i);
            // For compound updates the value mentions the target, which counts as a read.
            expr(a->value);
        } else if (const auto* q = s.as<Stmt::Seq>()) {
            block(*q);
        } else if (const auto* r = s.as<Stmt::Require>()) {
            expr(r->cond);
        } else if (const auto* i = s.as<Stmt::If>()) {
            expr(i->cond);
            block(i->thenBlock);
            block(i->elseBlock);
        } else if (const auto* w = s.as<Stmt::While>()) {
            expr(w->cond);
            block(w->body);
        } else if (const auto* r = s.as<Stmt::Return>()) {
            for (const auto& v : r->values) expr(v);
        }
    }

    const ContractAst& contract_;
    std::vector<std::set<std::string>> scopes_;
    std::set<std::string> reads_, writes_;
};

std::vector<DataPolicy> fromParams(const std::vector<Param>& ps) {
    std::vector<DataPolicy> out;
    for (const auto& p : ps) out.push_back({p.name, p.type});
    return out;
}

json dataPolicyList(const std::vector<DataPolicy>& ds) {
    json arr = json::array();
    for (const auto& d : ds) arr.push_back({{"id", d.id}, {"type", typeToJson(d.type)}});
    return arr;
}

std::vector<DataPolicy> dataPolicyListFrom(const json& j) {
    std::vector<DataPolicy> out;
    for (const auto& d : j) out.push_back({d.at("id").get<std::string>(), typeFromJson(d.at("type"))});
    return out;
}

FunctionKind kindFromName(const std::string& s) {
    if (s == "PUT") return FunctionKind::PUT;
    if (s == "PRT") return FunctionKind::PRT;
    if (s == "MPT") return FunctionKind::MPT;
    throw std::invalid_argument("unknown function type '" + s + "'");
}

}  // namespace

AccessSets analyzeAccess(const ContractAst& c, const FunctionDecl& f) { return AccessWalker(c, f).result(); }

ContractPolicy generatePolicy(const typecheck::CheckedContract& c) {
    ContractPolicy p;
    p.contract = c.ast.name;
    for (const auto& v : c.ast.stateVars) p.states.push_back({v.name, v.type});
    for (std::size_t i = 0; i < c.ast.functions.size(); ++i) {
        const auto& f = c.ast.functions[i];
        FunctionPolicy fp;
        fp.id = f.name;
        fp.kind = c.function(f.name) ? c.function(f.name)->kind : FunctionKind::PUT;
        fp.params = fromParams(f.params);
        fp.returns = fromParams(f.returns);
        auto access = analyzeAccess(c.ast, f);
        for (const auto& r : access.reads) fp.reads.push_back({r, c.ast.findState(r)->type});
        for (const auto& m : access.mutates) fp.mutates.push_back({m, c.ast.findState(m)->type});
        for (const auto& r : c.reveals)
            if (r.function == f.name) fp.reveals.push_back({r.expr, r.target});
        p.functions.push_back(std::move(fp));
    }
    return p;
}

json policyToJson(const ContractPolicy& p) {
    json fns = json::array();
    for (const auto& f : p.functions) {
        json reveals = json::array();
        for (const auto& r : f.reveals) reveals.push_back({{"expr", r.expr}, {"target", r.target}});
        fns.push_back({{"id", f.id},
                       {"type", std::string(typecheck::kindName(f.kind))},
                       {"params", dataPolicyList(f.params)},
                       {"read", dataPolicyList(f.reads)},
                       {"mutate", dataPolicyList(f.mutates)},
                       {"returns", dataPolicyList(f.returns)},
                       {"reveals", reveals}});
    }
    return {{"contract", p.contract}, {"states", dataPolicyList(p.states)}, {"functions", fns}};
}

ContractPolicy policyFromJson(const json& j) {
    ContractPolicy p;
    p.contract = j.at("contract").get<std::string>();
    p.states = dataPolicyListFrom(j.at("states"));
    for (const auto& f : j.at("functions")) {
        FunctionPolicy fp;
        fp.id = f.at("id").get<std::string>();
        fp.kind = kindFromName(f.at("type").get<std::string>());
        fp.params = dataPolicyListFrom(f.at("params"));
        fp.reads = dataPolicyListFrom(f.at("read"));
        fp.mutates = dataPolicyListFrom(f.at("mutate"));
        fp.returns = dataPolicyListFrom(f.at("returns"));
        for (const auto& r : f.at("reveals")) fp.reveals.push_back({r.at("expr").get<std::string>(), r.at("target").get<std::string>()});
        p.functions.push_back(std::move(fp));
    }
    return p;
}

std::string policyBytes(const ContractPolicy& p) { return canonical(policyToJson(p)); }

}  // namespace cloak::codegen
