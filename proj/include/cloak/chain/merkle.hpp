// Binary Merkle tree over transaction ids with domain-separated leaves and
// nodes. An odd node at the end of a level is carried up unchanged.
#pragma once

#include <span>
#include <vector>

#include "cloak/crypto/bytes.hpp"

namespace cloak::chain {

struct MerkleStep {
    Digest sibling;
    bool siblingOnLeft = false;
    bool operator==(const MerkleStep&) const = default;
};

Digest merkleRoot(std::span<const Digest> ids);
std::vector<MerkleStep> merklePath(std::span<const Digest> ids, std::size_t index);
Digest rootFromPath(const Digest& id, std::span<const MerkleStep> path);

}  // namespace cloak::chain
