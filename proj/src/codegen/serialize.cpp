#include "cloak/codegen/serialize.hpp"

#include "cloak/frontend/printer.hpp"

namespace cloak::codegen {

using namespace frontend;
using DK = DataType::Kind;

namespace {

std::string dataKindName(DK k) {
    switch (k) {
        case DK::Bool: return "bool";
        case DK::Uint256: return "uint256";
        case DK::Address: return "address";
        case DK::Bin: return "bin";
        case DK::Mapping: return "mapping";
        case DK::NamedMapping: return "named_mapping";
        case DK::Array: return "array";
        case DK::NamedAddressArray: return "named_address_array";
    }
    return "?";
}

DK dataKindFromName(const std::string& s) {
    static const std::map<std::string, DK> table = {
        {"bool", DK::Bool},   {"uint256", DK::Uint256}, {"address", DK::Address}, {"bin", DK::Bin},
        {"mapping", DK::Mapping}, {"named_mapping", DK::NamedMapping}, {"array", DK::Array}, {"named_address_array", DK::NamedAddressArray},
    };
    auto it = table.find(s);
    if (it == table.end()) throw std::invalid_argument("unknown data type kind '" + s + "'");
    return it->second;
}

json ownerToJson(const OwnerAtom& o) { return printOwner(o); }

OwnerAtom ownerFromJson(const json& j) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "all") return OwnerAtom::all();
    if (s == "tee") return OwnerAtom::tee();
    if (s == "me") return OwnerAtom::me();
    if (s.empty()) throw std::invalid_argument("empty owner");
    return OwnerAtom::named(s);
}

json seqToJson(const Stmt::Seq& s) {
    json arr = json::array();
    for (const auto& st : s.stmts) arr.push_back(stmtToJson(st));
    return arr;
}

Stmt::Seq seqFromJson(const json& j) {
    Stmt::Seq out;
    for (const auto& st : j) out.stmts.push_back(stmtFromJson(st));
    return out;
}

json paramsToJson(const std::vector<Param>& ps) {
    json arr = json::array();
    for (const auto& p : ps) arr.push_back({{"name", p.name}, {"type", typeToJson(p.type)}});
    return arr;
}

std::vector<Param> paramsFromJson(const json& j) {
    std::vector<Param> out;
    for (const auto& p : j) out.push_back(Param{p.at("name").get<std::string>(), typeFromJson(p.at("type")), {}});
    return out;
}

}  // namespace

json dataTypeToJson(const DataType& t) {
    json j = {{"kind", dataKindName(t.kind)}};
    switch (t.kind) {
        case DK::Mapping:
            j["key"] = dataTypeToJson(*t.key);
            j["value"] = typeToJson(*t.value);
            break;
        case DK::NamedMapping:
            j["tag"] = t.tag;
            j["value"] = typeToJson(*t.value);
            break;
        case DK::Array: j["elem"] = typeToJson(*t.value); break;
        case DK::NamedAddressArray: j["tag"] = t.tag; break;
        default: break;
    }
    return j;
}

DataType dataTypeFromJson(const json& j) {
    DK k = dataKindFromName(j.at("kind").get<std::string>());
    switch (k) {
        case DK::Mapping: return DataType::mapping(dataTypeFromJson(j.at("key")), typeFromJson(j.at("value")));
        case DK::NamedMapping: return DataType::namedMapping(j.at("tag").get<std::string>(), typeFromJson(j.at("value")));
        case DK::Array: return DataType::array(typeFromJson(j.at("elem")));
        case DK::NamedAddressArray: return DataType::namedAddressArray(j.at("tag").get<std::string>());
        default: return DataType::scalar(k);
    }
}

json typeToJson(const AnnotatedType& t) { return {{"data", dataTypeToJson(t.data)}, {"owner", ownerToJson(t.owner)}}; }

AnnotatedType typeFromJson(const json& j) { return {dataTypeFromJson(j.at("data")), ownerFromJson(j.at("owner"))}; }

json exprToJson(const Expr& e) {
    if (const auto* c = e.as<Expr::Const>()) {
        if (c->kind == Expr::Const::Kind::Bool) return {{"bool", c->boolean}};
        return {{"int", c->digits}};
    }
    if (e.as<Expr::MeAddr>()) return {{"me", true}};
    if (const auto* l = e.as<Expr::Location>()) {
        json idx = json::array();
        for (const auto& i : l->indexes) idx.push_back(exprToJson(i));
        return {{"loc", l->base}, {"idx", idx}};
    }
    if (const auto* r = e.as<Expr::Reveal>()) return {{"reveal", exprToJson(*r->inner)}, {"to", ownerToJson(r->target)}};
    if (const auto* t = e.as<Expr::Ternary>())
        return {{"ternary", json::array({exprToJson(*t->cond), exprToJson(*t->then), exprToJson(*t->otherwise)})}};
    const auto& a = *e.as<Expr::NativeApply>();
    json args = json::array();
    for (const auto& x : a.args) args.push_back(exprToJson(x));
    return {{"op", a.op}, {"args", args}};
}

Expr exprFromJson(const json& j) {
    if (j.contains("int")) return Expr::intConst(j["int"].get<std::string>());
    if (j.contains("bool")) return Expr::boolConst(j["bool"].get<bool>());
    if (j.contains("me")) return Expr{Expr::MeAddr{}, {}};
    if (j.contains("loc")) {
        std::vector<Expr> idx;
        for (const auto& i : j.at("idx")) idx.push_back(exprFromJson(i));
        return Expr::location(j["loc"].get<std::string>(), std::move(idx));
    }
    if (j.contains("reveal")) return Expr{Expr::Reveal{exprFromJson(j["reveal"]), ownerFromJson(j.at("to"))}, {}};
    if (j.contains("ternary")) {
        const auto& t = j["ternary"];
        return Expr{Expr::Ternary{exprFromJson(t.at(0)), exprFromJson(t.at(1)), exprFromJson(t.at(2))}, {}};
    }
    std::vector<Expr> args;
    for (const auto& a : j.at("args")) args.push_back(exprFromJson(a));
    return Expr::apply(j.at("op").get<std::string>(), std::move(args));
}

json stmtToJson(const Stmt& s) {
    if (s.as<Stmt::Skip>()) return {{"skip", true}};
    if (const auto* d = s.as<Stmt::Decl>()) return {{"decl", d->name}, {"type", typeToJson(d->type)}};
    if (const auto* a = s.as<Stmt::Assign>())
        return {{"assign", exprToJson(a->target)}, {"value", exprToJson(a->value)}, {"compound", a->compound}};
    if (const auto* q = s.as<Stmt::Seq>()) return {{"seq", seqToJson(*q)}};
    if (const auto* r = s.as<Stmt::Require>()) return {{"require", exprToJson(r->cond)}};
    if (const auto* i = s.as<Stmt::If>()) return {{"if", exprToJson(i->cond)}, {"then", seqToJson(i->thenBlock)}, {"else", seqToJson(i->elseBlock)}};
    if (const auto* w = s.as<Stmt::While>()) return {{"while", exprToJson(w->cond)}, {"body", seqToJson(w->body)}};
    const auto& r = *s.as<Stmt::Return>();
    json vals = json::array();
    for (const auto& v : r.values) vals.push_back(exprToJson(v));
    return {{"return", vals}};
}

Stmt stmtFromJson(const json& j) {
    if (j.contains("skip")) return Stmt{Stmt::Skip{}, {}};
    if (j.contains("decl")) return Stmt{Stmt::Decl{j["decl"].get<std::string>(), typeFromJson(j.at("type"))}, {}};
    if (j.contains("assign"))
        return Stmt{Stmt::Assign{exprFromJson(j["assign"]), exprFromJson(j.at("value")), j.at("compound").get<bool>()}, {}};
    if (j.contains("seq")) return Stmt{seqFromJson(j["seq"]), {}};
    if (j.contains("require")) return Stmt{Stmt::Require{exprFromJson(j["require"])}, {}};
    if (j.contains("if")) return Stmt{Stmt::If{exprFromJson(j["if"]), seqFromJson(j.at("then")), seqFromJson(j.at("else"))}, {}};
    if (j.contains("while")) return Stmt{Stmt::While{exprFromJson(j["while"]), seqFromJson(j.at("body"))}, {}};
    if (j.contains("return")) {
        Stmt::Return r;
        for (const auto& v : j["return"]) r.values.push_back(exprFromJson(v));
        return Stmt{std::move(r), {}};
    }
    throw std::invalid_argument("unknown statement node " + j.dump());
}

json contractToJson(const ContractAst& c) {
    json state = json::array();
    for (const auto& v : c.stateVars) state.push_back({{"name", v.name}, {"type", typeToJson(v.type)}, {"final", v.isFinal}});
    json fns = json::array();
    for (const auto& f : c.functions)
        fns.push_back({{"name", f.name}, {"params", paramsToJson(f.params)}, {"returns", paramsToJson(f.returns)}, {"body", seqToJson(f.body)}});
    return {{"contract", c.name}, {"state", state}, {"functions", fns}};
}

ContractAst contractFromJson(const json& j) {
    ContractAst c;
    c.name = j.at("contract").get<std::string>();
    for (const auto& v : j.at("state"))
        c.stateVars.push_back(StateVar{v.at("name").get<std::string>(), typeFromJson(v.at("type")), v.at("final").get<bool>(), {}});
    for (const auto& f : j.at("functions")) {
        FunctionDecl fd;
        fd.name = f.at("name").get<std::string>();
        fd.params = paramsFromJson(f.at("params"));
        fd.returns = paramsFromJson(f.at("returns"));
        fd.body = seqFromJson(f.at("body"));
        c.functions.push_back(std::move(fd));
    }
    return c;
}

std::string canonical(const json& j) {
    // nlohmann::json objects are std::map backed, so keys come out sorted.
    return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

}  // namespace cloak::codegen
