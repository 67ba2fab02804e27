#include "cloak/chain/transaction.hpp"

#include <array>

namespace cloak::chain {

namespace {

constexpr std::array<std::pair<TxKind, std::string_view>, 9> kNames{{
    {TxKind::Register, "TX_pk"},
    {TxKind::Deposit, "TX_col"},
    {TxKind::Propose, "TX_p"},
    {TxKind::Challenge, "TX_cha"},
    {TxKind::Response, "TX_res"},
    {TxKind::Punish, "TX_pns"},
    {TxKind::Complete, "TX_com"},
    {TxKind::Timeout, "TX_out"},
    {TxKind::Deploy, "Deploy"},
}};

json idPreimage(const Transaction& tx) {
    return json{{"kind", txKindName(tx.kind)},
                {"nonce", tx.nonce},
                {"payload", tx.payload},
                {"sender", tx.sender.str()},
                {"sender_pk", tx.senderPk.hex()}};
}

}  // namespace

std::string_view txKindName(TxKind k) {
    for (const auto& [kind, name] : kNames)
        if (kind == k) return name;
    return "?";
}

std::optional<TxKind> txKindFromName(std::string_view name) {
    for (const auto& [kind, n] : kNames)
        if (n == name) return kind;
    return std::nullopt;
}

bool isSetupKind(TxKind k) { return k == TxKind::Register || k == TxKind::Deposit || k == TxKind::Deploy; }

std::string canonicalDump(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::strict); }

Digest Transaction::computeId() const { return crypto::hash(canonicalDump(idPreimage(*this))); }

Digest Transaction::payloadDigest() const { return crypto::hash(canonicalDump(payload)); }

json Transaction::toJson() const {
    json j = idPreimage(*this);
    j["id"] = id.hex();
    j["sig"] = sig.hex();
    return j;
}

Transaction Transaction::fromJson(const json& j) {
    Transaction tx;
    auto kind = txKindFromName(j.at("kind").get<std::string>());
    if (!kind) throw std::invalid_argument("unknown transaction kind " + j.at("kind").dump());
    tx.kind = *kind;
    tx.nonce = j.at("nonce").get<std::uint64_t>();
    tx.payload = j.at("payload");
    tx.sender = Address::parse(j.at("sender").get<std::string>());
    tx.senderPk.bytes = fromHex(j.at("sender_pk").get<std::string>());
    tx.id = Digest::fromHexString(j.at("id").get<std::string>());
    tx.sig = crypto::Signature::fromHexString(j.at("sig").get<std::string>());
    return tx;
}

Transaction makeTx(const crypto::KeyPair& signer, TxKind kind, json payload, std::uint64_t nonce) {
    Transaction tx;
    tx.sender = signer.addr;
    tx.senderPk = signer.pk;
    tx.kind = kind;
    tx.nonce = nonce;
    tx.payload = std::move(payload);
    tx.id = tx.computeId();
    tx.sig = crypto::sign(signer, tx.id.view());
    return tx;
}

bool checkTx(const Transaction& tx) {
    if (tx.senderPk.bytes.size() != crypto::kPublicKeySize) return false;
    if (crypto::addressOf(tx.senderPk) != tx.sender) return false;
    if (tx.computeId() != tx.id) return false;
    return crypto::verifySig(tx.senderPk, tx.id.view(), tx.sig);
}

}  // namespace cloak::chain
