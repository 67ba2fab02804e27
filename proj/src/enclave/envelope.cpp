#include "cloak/enclave/envelope.hpp"

#include "cloak/chain/transaction.hpp"

namespace cloak::enclave {

Bytes Envelope::signedBytes() const {
    json j{{"to", to.str()}, {"from", from.str()}, {"session", session.hex()}, {"kind", kind}, {"body", toHex(body.serialize())}};
    return toBytes(chain::canonicalDump(j));
}

json Envelope::toJson() const {
    return {{"to", to.str()},     {"from", from.str()},
            {"from_pk", fromPk.hex()}, {"session", session.hex()},
            {"kind", kind},       {"body", toHex(body.serialize())},
            {"sig", sig.hex()}};
}

Envelope Envelope::fromJson(const json& j) {
    Envelope e;
    e.to = Address::parse(j.at("to").get<std::string>());
    e.from = Address::parse(j.at("from").get<std::string>());
    e.fromPk.bytes = fromHex(j.at("from_pk").get<std::string>());
    e.session = Digest::fromHexString(j.at("session").get<std::string>());
    e.kind = j.at("kind").get<std::string>();
    e.body = crypto::Ciphertext::deserialize(fromHex(j.at("body").get<std::string>()));
    e.sig = crypto::Signature::fromHexString(j.at("sig").get<std::string>());
    return e;
}

Envelope seal(const crypto::KeyPair& from, const crypto::PublicKey& toPk, const Digest& session, std::string kind, ByteView plaintext,
              const crypto::Randomness& r) {
    Envelope e;
    e.to = crypto::addressOf(toPk);
    e.from = from.addr;
    e.fromPk = from.pk;
    e.session = session;
    e.kind = std::move(kind);
    e.body = crypto::encrypt(toPk, plaintext, r);
    e.sig = crypto::sign(from, e.signedBytes());
    return e;
}

Bytes unseal(const crypto::KeyPair& to, const Envelope& e) {
    if (e.to != to.addr) throw EnvelopeError("envelope addressed to " + e.to.str());
    if (e.fromPk.bytes.size() != crypto::kPublicKeySize || crypto::addressOf(e.fromPk) != e.from) throw EnvelopeError("sender key mismatch");
    if (!crypto::verifySig(e.fromPk, e.signedBytes(), e.sig)) throw EnvelopeError("bad envelope signature");
    return crypto::decrypt(to, e.body);
}

}  // namespace cloak::enclave
