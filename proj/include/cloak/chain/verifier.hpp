// Verifier contract instance: holds the state commitments of one deployed
// private contract and checks completion proofs against them.
#pragma once

#include <map>

#include "cloak/chain/transaction.hpp"
#include "cloak/codegen/verifier.hpp"

namespace cloak::chain {

/// One committed cell or return value. `owner` is "all", "tee" or an
/// 0x-address; `data` is the plaintext value encoding when the owner is "all"
/// and a serialized ciphertext otherwise.
struct CommitEntry {
    std::string var;
    Bytes key;  // encoded mapping key; empty for scalars and returns
    std::string owner;
    Bytes data;

    Digest digest() const;
    json toJson() const;
    static CommitEntry fromJson(const json& j);
    bool operator==(const CommitEntry&) const = default;
};

json entriesToJson(const std::vector<CommitEntry>& es);
std::vector<CommitEntry> entriesFromJson(const json& j);
/// hash of the list of entry digests.
Digest entriesDigest(const std::vector<CommitEntry>& es);

/// ⟨H_F, H_P, Ĥ_Cx, Ĥ_Cs, Ĥ_Cs', Ĥ_Cr⟩
struct Proof {
    Digest hF, hP, hCx, hCs, hCsNew, hCr;

    json toJson() const;
    static Proof fromJson(const json& j);
    bool operator==(const Proof&) const = default;
};

class VerifierState {
  public:
    explicit VerifierState(codegen::VerifierDescriptor d) : desc_(std::move(d)) {}

    const codegen::VerifierDescriptor& descriptor() const { return desc_; }
    bool initialized() const { return initialized_; }

    /// Current commitments in layout order (variable order, then key bytes).
    std::vector<CommitEntry> oldStates() const;
    Digest stateDigest() const { return entriesDigest(oldStates()); }

    /// proof == ⟨H_F, H_P, hash(hCx), Ĥ(current), hash(C_s'), hash(C_r)⟩.
    bool verify(const Proof& proof, const std::vector<Digest>& hCx, const std::vector<CommitEntry>& cNew, const std::vector<CommitEntry>& cR) const;

    /// Overwrites the listed cells. Returns false (no change) when `origin`
    /// is not the enclave or an entry names a variable outside the layout.
    bool setNewStates(const Address& origin, const std::vector<CommitEntry>& cNew);
    /// First state commitment; same origin rule, only once.
    bool initState(const Address& origin, const std::vector<CommitEntry>& cells);

  private:
    std::size_t layoutIndex(const std::string& var) const;

    codegen::VerifierDescriptor desc_;
    bool initialized_ = false;
    std::map<std::pair<std::size_t, Bytes>, CommitEntry> cells_;
};

}  // namespace cloak::chain
