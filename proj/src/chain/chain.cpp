#include "cloak/chain/chain.hpp"

#include <sstream>

namespace cloak::chain {

nlohmann::ordered_json TraceRecord::toJson() const {
    nlohmann::ordered_json j;
    j["height"] = height;
    j["kind"] = kind;
    j["sender"] = sender;
    j["status"] = status;
    j["payload_digest"] = payloadDigest;
    return j;
}

Chain::Chain() {
    Block g;
    g.header.height = 0;
    g.header.txRoot = merkleRoot({});
    g.header.hash = g.header.computeHash();
    blocks_.push_back(std::move(g));
}

Digest Chain::submit(Transaction tx) {
    if (!checkTx(tx)) throw ChainError("InvalidSignature: transaction " + tx.id.hex());
    if (!seen_.insert(tx.id).second) throw ChainError("DuplicateTx: transaction " + tx.id.hex() + " already submitted");
    Digest id = tx.id;
    pending_.push_back(std::move(tx));
    return id;
}

const Block& Chain::mineBlock() {
    Block b;
    b.header.height = height() + 1;
    b.header.parent = tipHash();
    std::vector<Digest> ids;
    while (!pending_.empty()) {
        Transaction tx = std::move(pending_.front());
        pending_.pop_front();
        Receipt r{b.header.height, b.txs.size(), true, "ok"};
        World snapshot = world_;
        try {
            world_.apply(tx, b.header.height);
        } catch (const Revert& e) {
            world_ = std::move(snapshot);
            r.ok = false;
            r.status = "revert:" + std::string(revertReasonName(e.reason));
        }
        trace_.push_back({b.header.height, std::string(txKindName(tx.kind)), tx.sender.str(), r.status, tx.payloadDigest().hex()});
        receipts_[tx.id] = r;
        ids.push_back(tx.id);
        b.txs.push_back(std::move(tx));
    }
    b.header.txRoot = merkleRoot(ids);
    b.header.hash = b.header.computeHash();
    blocks_.push_back(std::move(b));
    return blocks_.back();
}

const Receipt* Chain::receipt(const Digest& txId) const {
    auto it = receipts_.find(txId);
    return it == receipts_.end() ? nullptr : &it->second;
}

const Transaction* Chain::findTx(const Digest& txId) const {
    const auto* r = receipt(txId);
    return r ? &blocks_.at(r->height).txs.at(r->index) : nullptr;
}

std::vector<const Transaction*> Chain::transactions() const {
    std::vector<const Transaction*> out;
    for (const auto& b : blocks_)
        for (const auto& t : b.txs) out.push_back(&t);
    return out;
}

ProofOfPublication Chain::buildPoP(const Digest& since, const std::vector<Digest>& txIds, std::optional<std::uint64_t> upTo) const {
    std::optional<std::uint64_t> from;
    for (const auto& b : blocks_)
        if (b.header.hash == since) from = b.header.height;
    if (!from) throw ChainError("buildPoP: unknown checkpoint " + since.hex());
    std::uint64_t to = upTo.value_or(height());
    if (to <= *from || to > height()) throw ChainError("buildPoP: no headers after the checkpoint");
    ProofOfPublication pop;
    pop.checkpoint = since;
    for (std::uint64_t h = *from + 1; h <= to; ++h) pop.headers.push_back(blocks_[h].header);
    for (const auto& id : txIds) {
        const auto* r = receipt(id);
        if (!r || r->height <= *from || r->height > to) throw ChainError("buildPoP: transaction " + id.hex() + " not included in range");
        const auto& b = blocks_[r->height];
        std::vector<Digest> ids;
        for (const auto& t : b.txs) ids.push_back(t.id);
        pop.inclusions.push_back({id, static_cast<std::size_t>(r->height - *from - 1), r->index, merklePath(ids, r->index)});
    }
    return pop;
}

std::string Chain::traceJsonl() const {
    std::ostringstream out;
    for (const auto& t : trace_) out << t.toJson().dump() << '\n';
    return out.str();
}

}  // namespace cloak::chain
