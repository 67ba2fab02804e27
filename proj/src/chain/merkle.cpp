#include "cloak/chain/merkle.hpp"

#include "cloak/crypto/cryptobox.hpp"

namespace cloak::chain {

namespace {

Digest leaf(const Digest& id) {
    Bytes b{0x00};
    append(b, id.view());
    return crypto::hash(b);
}

Digest node(const Digest& l, const Digest& r) {
    Bytes b{0x01};
    append(b, l.view());
    append(b, r.view());
    return crypto::hash(b);
}

std::vector<Digest> nextLevel(const std::vector<Digest>& level) {
    std::vector<Digest> up;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) up.push_back(node(level[i], level[i + 1]));
    if (level.size() % 2) up.push_back(level.back());
    return up;
}

}  // namespace

Digest merkleRoot(std::span<const Digest> ids) {
    if (ids.empty()) return crypto::hash(Bytes{0x02});
    std::vector<Digest> level;
    for (const auto& id : ids) level.push_back(leaf(id));
    while (level.size() > 1) level = nextLevel(level);
    return level[0];
}

std::vector<MerkleStep> merklePath(std::span<const Digest> ids, std::size_t index) {
    if (index >= ids.size()) throw std::out_of_range("merklePath: index out of range");
    std::vector<Digest> level;
    for (const auto& id : ids) level.push_back(leaf(id));
    std::vector<MerkleStep> path;
    while (level.size() > 1) {
        std::size_t sib = index ^ 1;
        if (sib < level.size()) path.push_back({level[sib], sib < index});
        level = nextLevel(level);
        index /= 2;
    }
    return path;
}

Digest rootFromPath(const Digest& id, std::span<const MerkleStep> path) {
    Digest cur = leaf(id);
    for (const auto& s : path) cur = s.siblingOnLeft ? node(s.sibling, cur) : node(cur, s.sibling);
    return cur;
}

}  // namespace cloak::chain
