// Single-chain simulator. Submitted transactions are included FIFO by the
// next mineBlock; each executes against a snapshot of the world and is
// rolled back alone when it reverts.
#pragma once

#include <deque>
#include <set>

#include "cloak/chain/pop.hpp"
#include "cloak/chain/service.hpp"

namespace cloak::chain {

class ChainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Block {
    BlockHeader header;
    std::vector<Transaction> txs;
};

struct Receipt {
    std::uint64_t height = 0;
    std::size_t index = 0;
    bool ok = true;
    std::string status;  // "ok" or "revert:<Reason>"
};

/// One line of trace.jsonl.
struct TraceRecord {
    std::uint64_t height = 0;
    std::string kind;
    std::string sender;
    std::string status;
    std::string payloadDigest;

    nlohmann::ordered_json toJson() const;
};

class Chain {
  public:
    Chain();

    /// Throws ChainError on an invalid signature or a duplicate id.
    Digest submit(Transaction tx);
    const Block& mineBlock();

    /// Height of the last mined block.
    std::uint64_t height() const { return blocks_.back().header.height; }
    const Block& block(std::uint64_t h) const { return blocks_.at(h); }
    const Digest& genesisHash() const { return blocks_.front().header.hash; }
    const Digest& tipHash() const { return blocks_.back().header.hash; }
    const World& world() const { return world_; }
    std::size_t pendingCount() const { return pending_.size(); }

    const Receipt* receipt(const Digest& txId) const;
    const Transaction* findTx(const Digest& txId) const;
    std::vector<const Transaction*> transactions() const;

    /// PoP from the block whose hash is `since` up to `upTo` (default: tip),
    /// with inclusions for every id. Throws ChainError when `since` is not a
    /// block hash or a transaction is not included after it.
    ProofOfPublication buildPoP(const Digest& since, const std::vector<Digest>& txIds, std::optional<std::uint64_t> upTo = {}) const;

    const std::vector<TraceRecord>& trace() const { return trace_; }
    std::string traceJsonl() const;

  private:
    std::vector<Block> blocks_;
    std::deque<Transaction> pending_;
    std::set<Digest> seen_;
    std::map<Digest, Receipt> receipts_;
    World world_;
    std::vector<TraceRecord> trace_;
};

}  // namespace cloak::chain
