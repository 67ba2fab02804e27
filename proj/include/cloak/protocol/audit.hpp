// Independent auditor: replays the published transactions into a fresh
// world and re-derives every completion check from chain data alone.
#pragma once

#include "cloak/chain/chain.hpp"

namespace cloak::protocol {

struct AuditEntry {
    Digest txId;
    std::uint64_t height = 0;
    bool accepted = false;  // re-derived verdict
    bool chainOk = false;   // receipt status
};

struct AuditReport {
    std::vector<AuditEntry> completions;
    /// Re-derived worlds agree with the chain's at every block.
    bool worldMatches = true;
    bool consistent() const;
};

AuditReport auditChain(const chain::Chain& c);

/// The world as it stood just before `txId` was applied.
chain::World worldBefore(const chain::Chain& c, const Digest& txId);

/// Re-derives acceptance of a TX_com payload against `w`: the payload must
/// parse, the proof fields must equal digests recomputed from the payload,
/// and the service checks must pass.
bool acceptsCompletion(const chain::World& w, const Address& sender, const nlohmann::json& payload);

}  // namespace cloak::protocol
