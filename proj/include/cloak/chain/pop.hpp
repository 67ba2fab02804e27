// Block headers and proofs of publication: a header chain that links to a
// checkpoint plus Merkle inclusion of transactions in those headers.
#pragma once

#include "cloak/chain/merkle.hpp"
#include "cloak/chain/transaction.hpp"

namespace cloak::chain {

struct BlockHeader {
    std::uint64_t height = 0;
    Digest parent;
    Digest txRoot;
    Digest hash;

    /// hash(parent || height || txRoot)
    Digest computeHash() const;
    json toJson() const;
    static BlockHeader fromJson(const json& j);
    bool operator==(const BlockHeader&) const = default;
};

struct Inclusion {
    Digest txId;
    std::size_t blockIndex = 0;  // into ProofOfPublication::headers
    std::size_t txIndex = 0;
    std::vector<MerkleStep> path;
    bool operator==(const Inclusion&) const = default;
};

struct ProofOfPublication {
    Digest checkpoint;
    std::vector<BlockHeader> headers;
    std::vector<Inclusion> inclusions;

    const BlockHeader& tip() const { return headers.back(); }
    const Inclusion* find(const Digest& txId) const;
    json toJson() const;
    static ProofOfPublication fromJson(const json& j);
};

/// Headers are nonempty, each hash recomputes, the first links to `checkpoint`,
/// each later one to its predecessor with height + 1, and every inclusion
/// path reaches its header's txRoot.
bool verifyHeaderChain(const Digest& checkpoint, const ProofOfPublication& pop);

/// verifyHeaderChain plus: `tx` is well formed and included.
bool verifyPoP(const Digest& checkpoint, const Transaction& tx, const ProofOfPublication& pop);

/// Height of the block including `txId`; the PoP must already be verified.
std::uint64_t inclusionHeight(const ProofOfPublication& pop, const Digest& txId);

}  // namespace cloak::chain
