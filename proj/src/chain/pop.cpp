#include "cloak/chain/pop.hpp"

namespace cloak::chain {

Digest BlockHeader::computeHash() const {
    Bytes b;
    append(b, parent.view());
    appendU64(b, height);
    append(b, txRoot.view());
    return crypto::hash(b);
}

json BlockHeader::toJson() const {
    return {{"height", height}, {"parent", parent.hex()}, {"tx_root", txRoot.hex()}, {"hash", hash.hex()}};
}

BlockHeader BlockHeader::fromJson(const json& j) {
    BlockHeader h;
    h.height = j.at("height").get<std::uint64_t>();
    h.parent = Digest::fromHexString(j.at("parent").get<std::string>());
    h.txRoot = Digest::fromHexString(j.at("tx_root").get<std::string>());
    h.hash = Digest::fromHexString(j.at("hash").get<std::string>());
    return h;
}

const Inclusion* ProofOfPublication::find(const Digest& txId) const {
    for (const auto& i : inclusions)
        if (i.txId == txId) return &i;
    return nullptr;
}

json ProofOfPublication::toJson() const {
    json hs = json::array(), inc = json::array();
    for (const auto& h : headers) hs.push_back(h.toJson());
    for (const auto& i : inclusions) {
        json path = json::array();
        for (const auto& s : i.path) path.push_back({{"sibling", s.sibling.hex()}, {"left", s.siblingOnLeft}});
        inc.push_back({{"tx", i.txId.hex()}, {"block", i.blockIndex}, {"index", i.txIndex}, {"path", path}});
    }
    return {{"checkpoint", checkpoint.hex()}, {"headers", hs}, {"inclusions", inc}};
}

ProofOfPublication ProofOfPublication::fromJson(const json& j) {
    ProofOfPublication p;
    p.checkpoint = Digest::fromHexString(j.at("checkpoint").get<std::string>());
    for (const auto& h : j.at("headers")) p.headers.push_back(BlockHeader::fromJson(h));
    for (const auto& i : j.at("inclusions")) {
        Inclusion in;
        in.txId = Digest::fromHexString(i.at("tx").get<std::string>());
        in.blockIndex = i.at("block").get<std::size_t>();
        in.txIndex = i.at("index").get<std::size_t>();
        for (const auto& s : i.at("path")) in.path.push_back({Digest::fromHexString(s.at("sibling").get<std::string>()), s.at("left").get<bool>()});
        p.inclusions.push_back(std::move(in));
    }
    return p;
}

bool verifyHeaderChain(const Digest& checkpoint, const ProofOfPublication& pop) {
    if (pop.checkpoint != checkpoint || pop.headers.empty()) return false;
    const Digest* prev = &checkpoint;
    for (std::size_t i = 0; i < pop.headers.size(); ++i) {
        const auto& h = pop.headers[i];
        if (h.parent != *prev || h.computeHash() != h.hash) return false;
        if (i > 0 && h.height != pop.headers[i - 1].height + 1) return false;
        prev = &h.hash;
    }
    for (const auto& inc : pop.inclusions) {
        if (inc.blockIndex >= pop.headers.size()) return false;
        if (rootFromPath(inc.txId, inc.path) != pop.headers[inc.blockIndex].txRoot) return false;
    }
    return true;
}

bool verifyPoP(const Digest& checkpoint, const Transaction& tx, const ProofOfPublication& pop) {
    return checkTx(tx) && pop.find(tx.id) != nullptr && verifyHeaderChain(checkpoint, pop);
}

std::uint64_t inclusionHeight(const ProofOfPublication& pop, const Digest& txId) {
    const auto* inc = pop.find(txId);
    if (!inc) throw std::invalid_argument("transaction not in proof of publication");
    return pop.headers.at(inc->blockIndex).height;
}

}  // namespace cloak::chain
