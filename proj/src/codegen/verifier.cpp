#include "cloak/codegen/verifier.hpp"

#include <fstream>

#include "cloak/codegen/private_contract.hpp"
#include "cloak/crypto/cryptobox.hpp"
#include "cloak/frontend/printer.hpp"

namespace cloak::codegen {

using namespace frontend;

std::string_view cellsName(LayoutEntry::Cells c) {
    switch (c) {
        case LayoutEntry::Cells::Scalar: return "scalar";
        case LayoutEntry::Cells::Mapping: return "mapping";
        case LayoutEntry::Cells::Array: return "array";
    }
    return "?";
}

json VerifierDescriptor::toJson() const {
    json layout = json::array();
    for (const auto& e : stateLayout) layout.push_back({{"var", e.var}, {"cells", std::string(cellsName(e.cells))}});
    return {{"h_f", hF.hex()}, {"h_p", hP.hex()}, {"adr_e", adrE.str()}, {"state_layout", layout}};
}

VerifierDescriptor VerifierDescriptor::fromJson(const json& j) {
    VerifierDescriptor v;
    v.hF = Digest::fromHexString(j.at("h_f").get<std::string>());
    v.hP = Digest::fromHexString(j.at("h_p").get<std::string>());
    v.adrE = Address::parse(j.at("adr_e").get<std::string>());
    for (const auto& e : j.at("state_layout")) {
        std::string c = e.at("cells").get<std::string>();
        LayoutEntry::Cells cells = c == "mapping" ? LayoutEntry::Cells::Mapping : c == "array" ? LayoutEntry::Cells::Array : LayoutEntry::Cells::Scalar;
        if (c != "mapping" && c != "array" && c != "scalar") throw std::invalid_argument("unknown layout cells '" + c + "'");
        v.stateLayout.push_back({e.at("var").get<std::string>(), cells});
    }
    return v;
}

Digest hashPrivateContract(const ContractAst& privateF) { return crypto::hash(canonical(contractToJson(privateF))); }

Digest hashPolicy(const ContractPolicy& p) { return crypto::hash(policyBytes(p)); }

std::vector<LayoutEntry> stateLayout(const ContractAst& ast) {
    std::vector<LayoutEntry> out;
    for (const auto& v : ast.stateVars) {
        auto cells = v.type.data.isMapping() ? LayoutEntry::Cells::Mapping
                     : v.type.data.isArray() ? LayoutEntry::Cells::Array
                                             : LayoutEntry::Cells::Scalar;
        out.push_back({v.name, cells});
    }
    return out;
}

VerifierDescriptor generateVerifier(const typecheck::CheckedContract& c, const ContractPolicy& policy, const ContractAst& privateF,
                                    const Address& adrE) {
    VerifierDescriptor v;
    v.hF = hashPrivateContract(privateF);
    v.hP = hashPolicy(policy);
    v.adrE = adrE;
    v.stateLayout = stateLayout(c.ast);
    return v;
}

Artifacts compile(const ContractAst& ast) {
    Artifacts a;
    a.checked = typecheck::checkContract(ast);
    if (!a.checked.ok()) return a;
    a.policy = generatePolicy(a.checked);
    a.privateContract = generatePrivateContract(a.checked);
    a.policyJson = policyBytes(a.policy);
    a.privateSource = printContract(a.privateContract);
    a.hF = hashPrivateContract(a.privateContract);
    a.hP = crypto::hash(a.policyJson);
    return a;
}

namespace {
void writeFile(const std::filesystem::path& p, const std::string& data) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << data;
}
}  // namespace

void writeArtifacts(const std::filesystem::path& dir, const Artifacts& a, const VerifierDescriptor& v) {
    std::filesystem::create_directories(dir);
    writeFile(dir / "policy.json", a.policyJson + "\n");
    writeFile(dir / "private.cloak", a.privateSource);
    writeFile(dir / "verifier.json", v.toJson().dump(2) + "\n");
}

}  // namespace cloak::codegen
