#include "cloak/codegen/private_contract.hpp"

namespace cloak::codegen {

using namespace frontend;
using DK = DataType::Kind;

namespace {

AnnotatedType erase(const AnnotatedType& t);

DataType erase(const DataType& d) {
    switch (d.kind) {
        case DK::Mapping: return DataType::mapping(erase(*d.key), erase(*d.value));
        case DK::NamedMapping: return DataType::mapping(DataType::scalar(DK::Address), erase(*d.value));
        case DK::Array: return DataType::array(erase(*d.value));
        case DK::NamedAddressArray: return DataType::array({DataType::scalar(DK::Address), OwnerAtom::all()});
        default: return DataType::scalar(d.kind);
    }
}

AnnotatedType erase(const AnnotatedType& t) { return {erase(t.data), OwnerAtom::all()}; }

Stmt::Seq erase(const Stmt::Seq& seq);

Stmt erase(const Stmt& s) {
    Stmt out = s;
    if (const auto* d = s.as<Stmt::Decl>()) out.node = Stmt::Decl{d->name, erase(d->type)};
    else if (const auto* q = s.as<Stmt::Seq>()) out.node = erase(*q);
    else if (const auto* i = s.as<Stmt::If>()) out.node = Stmt::If{i->cond, erase(i->thenBlock), erase(i->elseBlock)};
    else if (const auto* w = s.as<Stmt::While>()) out.node = Stmt::While{w->cond, erase(w->body)};
    return out;
}

Stmt::Seq erase(const Stmt::Seq& seq) {
    Stmt::Seq out;
    for (const auto& s : seq.stmts) out.stmts.push_back(erase(s));
    return out;
}

}  // namespace

ContractAst stripContract(const ContractAst& ast, const std::map<std::string, typecheck::FunctionKind>& kinds) {
    ContractAst out;
    out.name = ast.name;
    for (const auto& v : ast.stateVars) out.stateVars.push_back({v.name, erase(v.type), v.isFinal, v.loc});
    for (const auto& f : ast.functions) {
        auto it = kinds.find(f.name);
        if (it != kinds.end() && it->second == typecheck::FunctionKind::PUT) continue;
        FunctionDecl g = f;
        for (auto& p : g.params) p.type = erase(p.type);
        for (auto& r : g.returns) r.type = erase(r.type);
        g.body = erase(f.body);
        out.functions.push_back(std::move(g));
    }
    return out;
}

ContractAst generatePrivateContract(const typecheck::CheckedContract& c) {
    std::map<std::string, typecheck::FunctionKind> kinds;
    for (const auto& f : c.functions) kinds[f.name] = f.kind;
    return stripContract(c.ast, kinds);
}

}  // namespace cloak::codegen
