#pragma once

#include "cloak/chain/chain.hpp"

namespace cloak::protocol {

struct TxCounts {
    std::size_t setup = 0;
    std::size_t mpt = 0;
    std::size_t reverted = 0;
    std::map<std::string, std::size_t> byKind;
};

/// Counts mined transactions in blocks (from, to]. With `idp`, per-MPT
/// transactions are limited to those naming that session.
TxCounts countTxs(const chain::Chain& c, std::uint64_t from, std::uint64_t to, const std::optional<Digest>& idp = std::nullopt);

/// Sum of balances equals the sum of deposits.
bool conserved(const chain::World& w, chain::Coins deposited);

}  // namespace cloak::protocol
