#include "cloak/protocol/metrics.hpp"

namespace cloak::protocol {

TxCounts countTxs(const chain::Chain& c, std::uint64_t from, std::uint64_t to, const std::optional<Digest>& idp) {
    TxCounts out;
    for (std::uint64_t h = from + 1; h <= to && h <= c.height(); ++h)
        for (const auto& tx : c.block(h).txs) {
            if (chain::isSetupKind(tx.kind)) {
                ++out.setup;
                continue;
            }
            if (idp && tx.payload.value("id_p", "") != idp->hex()) continue;
            ++out.mpt;
            ++out.byKind[std::string(chain::txKindName(tx.kind))];
            if (!c.receipt(tx.id)->ok) ++out.reverted;
        }
    return out;
}

bool conserved(const chain::World& w, chain::Coins deposited) { return w.totalCoins() == deposited; }

}  // namespace cloak::protocol
