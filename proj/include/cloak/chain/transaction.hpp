// Signed transactions. The id is the digest of the canonical form of
// {kind, nonce, payload, sender, sender_pk}; the signature covers the id.
#pragma once

#include <optional>

#include "cloak/crypto/cryptobox.hpp"
#include "json.hpp"

namespace cloak::chain {

using json = nlohmann::json;

enum class TxKind { Register, Deposit, Propose, Challenge, Response, Punish, Complete, Timeout, Deploy };

/// TX_pk, TX_col, TX_p, TX_cha, TX_res, TX_pns, TX_com, TX_out, Deploy.
std::string_view txKindName(TxKind k);
std::optional<TxKind> txKindFromName(std::string_view name);
/// Global-setup kinds (register, deposit, deploy) as opposed to per-MPT kinds.
bool isSetupKind(TxKind k);

struct Transaction {
    Digest id;
    Address sender;
    crypto::PublicKey senderPk;
    TxKind kind = TxKind::Deploy;
    std::uint64_t nonce = 0;
    json payload = json::object();
    crypto::Signature sig;

    Digest computeId() const;
    Digest payloadDigest() const;
    json toJson() const;
    static Transaction fromJson(const json& j);
};

Transaction makeTx(const crypto::KeyPair& signer, TxKind kind, json payload, std::uint64_t nonce);

/// Id recomputes, sender matches the key, signature verifies.
bool checkTx(const Transaction& tx);

/// Compact dump of a JSON value with sorted keys.
std::string canonicalDump(const json& j);

}  // namespace cloak::chain
