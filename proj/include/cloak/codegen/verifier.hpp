// Verifier descriptor: the on-chain binding of a compiled contract, and the
// bundle of every artifact produced by one compilation.
#pragma once

#include <filesystem>

#include "cloak/codegen/policy.hpp"
#include "cloak/crypto/bytes.hpp"

namespace cloak::codegen {

struct LayoutEntry {
    enum class Cells { Scalar, Mapping, Array };
    std::string var;
    Cells cells = Cells::Scalar;
    bool operator==(const LayoutEntry&) const = default;
};

std::string_view cellsName(LayoutEntry::Cells c);

struct VerifierDescriptor {
    Digest hF;
    Digest hP;
    Address adrE;
    std::vector<LayoutEntry> stateLayout;

    json toJson() const;
    static VerifierDescriptor fromJson(const json& j);
    bool operator==(const VerifierDescriptor&) const = default;
};

/// H_F: digest of the canonical serialization of the private contract.
Digest hashPrivateContract(const frontend::ContractAst& privateF);
/// H_P: digest of the policy bytes.
Digest hashPolicy(const ContractPolicy& p);

std::vector<LayoutEntry> stateLayout(const frontend::ContractAst& ast);

VerifierDescriptor generateVerifier(const typecheck::CheckedContract& c, const ContractPolicy& policy, const frontend::ContractAst& privateF,
                                    const Address& adrE);

struct Artifacts {
    typecheck::CheckedContract checked;
    ContractPolicy policy;
    frontend::ContractAst privateContract;
    std::string policyJson;     // canonical bytes
    std::string privateSource;  // pretty-printed, for humans
    Digest hF;
    Digest hP;

    bool ok() const { return checked.ok(); }
};

/// Type-checks `ast` and, when it checks, generates the policy and private contract.
Artifacts compile(const frontend::ContractAst& ast);

/// Writes policy.json, private.cloak and verifier.json into `dir` (created if needed).
void writeArtifacts(const std::filesystem::path& dir, const Artifacts& a, const VerifierDescriptor& v);

}  // namespace cloak::codegen
