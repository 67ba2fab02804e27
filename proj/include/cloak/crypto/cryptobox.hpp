// Hashing, commitments, signatures and public-key encryption shared by every
// actor of the simulation. Everything here is deterministic in its inputs.
#pragma once

#include <stdexcept>

#include "cloak/crypto/bytes.hpp"

namespace cloak::crypto {

class DecryptError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Seed = FixedBytes<32>;
using Randomness = FixedBytes<32>;

/// SHA-256.
Digest hash(ByteView data);
inline Digest hash(std::string_view s) { return hash(ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size())); }

/// Hash of the concatenation of digests, in order.
Digest hashList(std::span<const Digest> items);

/// Derive a seed from a human-readable label (scenario files name seeds by string).
Seed seedFromLabel(std::string_view label);

// pk = ed25519 verify key (32) || x25519 public key (32)
// sk = ed25519 secret key (64) || x25519 secret key (32)
inline constexpr std::size_t kPublicKeySize = 64;
inline constexpr std::size_t kSecretKeySize = 96;
inline constexpr std::size_t kSignatureSize = 64;

struct PublicKey {
    Bytes bytes;
    std::string hex() const { return toHex(bytes); }
    bool operator==(const PublicKey&) const = default;
};

struct KeyPair {
    PublicKey pk;
    Bytes sk;
    Address addr;
};

/// Address of a public key: last 20 bytes of hash(pk).
Address addressOf(const PublicKey& pk);

KeyPair keygen(const Seed& seed);

struct Ciphertext {
    Bytes bytes;
    /// First 8 bytes of hash(recipient pk).
    FixedBytes<8> recipient;

    bool operator==(const Ciphertext&) const = default;
    Bytes serialize() const;
    static Ciphertext deserialize(ByteView raw);
};

FixedBytes<8> fingerprint(const PublicKey& pk);

/// Deterministic in (pk, plaintext, randomness).
Ciphertext encrypt(const PublicKey& pk, ByteView plaintext, const Randomness& randomness);
/// Throws DecryptError on a wrong key or tampered ciphertext.
Bytes decrypt(const KeyPair& keys, const Ciphertext& ct);

/// Commitment to a secret: Enc(pk, plaintext || randomness).
Ciphertext commit(const PublicKey& pk, ByteView plaintext, const Randomness& randomness);

struct Opening {
    Bytes plaintext;
    Randomness randomness;
};
/// Decrypts a commitment made with commit() and splits off the randomness.
Opening open(const KeyPair& keys, const Ciphertext& commitment);
/// True iff commit(pk, plaintext, randomness) reproduces `commitment` byte for byte.
bool checkOpening(const PublicKey& pk, ByteView plaintext, const Randomness& randomness, const Ciphertext& commitment);

using Signature = FixedBytes<kSignatureSize>;

Signature sign(const KeyPair& keys, ByteView msg);
bool verifySig(const PublicKey& pk, ByteView msg, const Signature& sig);

}  // namespace cloak::crypto
