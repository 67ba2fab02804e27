// Simulated secure channel: a body encrypted to the recipient and signed by
// the sender, tagged with the session it belongs to.
#pragma once

#include "cloak/crypto/cryptobox.hpp"
#include "json.hpp"

namespace cloak::enclave {

using json = nlohmann::json;

class EnvelopeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Envelope {
    Address to;
    Address from;
    crypto::PublicKey fromPk;
    Digest session;
    std::string kind;
    crypto::Ciphertext body;
    crypto::Signature sig;

    Bytes signedBytes() const;
    json toJson() const;
    static Envelope fromJson(const json& j);
};

Envelope seal(const crypto::KeyPair& from, const crypto::PublicKey& toPk, const Digest& session, std::string kind, ByteView plaintext,
              const crypto::Randomness& r);

/// Checks recipient, sender key and signature, then decrypts. Throws
/// EnvelopeError (or crypto::DecryptError).
Bytes unseal(const crypto::KeyPair& to, const Envelope& e);

}  // namespace cloak::enclave
