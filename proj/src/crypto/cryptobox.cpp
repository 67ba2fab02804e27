#include "cloak/crypto/cryptobox.hpp"

#include <sodium.h>

#include <algorithm>
#include <mutex>

namespace cloak::crypto {

namespace {

void ensureSodium() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
    });
}

ByteView signPart(const PublicKey& pk) { return ByteView(pk.bytes).subspan(0, crypto_sign_PUBLICKEYBYTES); }
ByteView boxPart(const PublicKey& pk) { return ByteView(pk.bytes).subspan(crypto_sign_PUBLICKEYBYTES); }

void requireKeySize(const PublicKey& pk) {
    if (pk.bytes.size() != kPublicKeySize) throw std::invalid_argument("malformed public key");
}

}  // namespace

Digest hash(ByteView data) {
    ensureSodium();
    Digest out;
    crypto_hash_sha256(out.bytes.data(), data.data(), data.size());
    return out;
}

Digest hashList(std::span<const Digest> items) {
    Bytes buf;
    buf.reserve(items.size() * 32);
    for (const auto& d : items) append(buf, d.view());
    return hash(buf);
}

Seed seedFromLabel(std::string_view label) { return hash(label); }

Address addressOf(const PublicKey& pk) {
    Digest h = hash(pk.bytes);
    return Address(FixedBytes<20>::fromView(h.view().subspan(12)));
}

KeyPair keygen(const Seed& seed) {
    ensureSodium();
    static_assert(crypto_sign_SEEDBYTES == 32 && crypto_box_SEEDBYTES == 32);
    std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> spk{};
    std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> ssk{};
    crypto_sign_seed_keypair(spk.data(), ssk.data(), seed.bytes.data());

    Bytes boxSeedInput = toBytes("cloak/box");
    append(boxSeedInput, seed.view());
    Digest boxSeed = hash(boxSeedInput);
    std::array<std::uint8_t, crypto_box_PUBLICKEYBYTES> bpk{};
    std::array<std::uint8_t, crypto_box_SECRETKEYBYTES> bsk{};
    crypto_box_seed_keypair(bpk.data(), bsk.data(), boxSeed.bytes.data());

    KeyPair kp;
    kp.pk.bytes.assign(spk.begin(), spk.end());
    append(kp.pk.bytes, bpk);
    kp.sk.assign(ssk.begin(), ssk.end());
    append(kp.sk, bsk);
    kp.addr = addressOf(kp.pk);
    sodium_memzero(ssk.data(), ssk.size());
    sodium_memzero(bsk.data(), bsk.size());
    return kp;
}

FixedBytes<8> fingerprint(const PublicKey& pk) {
    return FixedBytes<8>::fromView(hash(pk.bytes).view().subspan(0, 8));
}

Bytes Ciphertext::serialize() const {
    Bytes out(recipient.bytes.begin(), recipient.bytes.end());
    append(out, bytes);
    return out;
}

Ciphertext Ciphertext::deserialize(ByteView raw) {
    if (raw.size() < 8) throw DecryptError("ciphertext too short");
    Ciphertext ct;
    ct.recipient = FixedBytes<8>::fromView(raw.subspan(0, 8));
    ct.bytes.assign(raw.begin() + 8, raw.end());
    return ct;
}

namespace {

std::array<std::uint8_t, crypto_box_NONCEBYTES> deriveNonce(ByteView epk, ByteView rpk) {
    Bytes buf = toBytes("cloak/nonce");
    append(buf, epk);
    append(buf, rpk);
    Digest h = hash(buf);
    std::array<std::uint8_t, crypto_box_NONCEBYTES> nonce{};
    std::copy_n(h.bytes.begin(), nonce.size(), nonce.begin());
    return nonce;
}

}  // namespace

Ciphertext encrypt(const PublicKey& pk, ByteView plaintext, const Randomness& randomness) {
    ensureSodium();
    requireKeySize(pk);
    // The ephemeral key depends on the message as well, so a reused randomness
    // never reuses a nonce under a different plaintext.
    Bytes seedInput = toBytes("cloak/eph");
    append(seedInput, randomness.view());
    append(seedInput, pk.bytes);
    append(seedInput, hash(plaintext).view());
    Digest ephSeed = hash(seedInput);

    std::array<std::uint8_t, crypto_box_PUBLICKEYBYTES> epk{};
    std::array<std::uint8_t, crypto_box_SECRETKEYBYTES> esk{};
    crypto_box_seed_keypair(epk.data(), esk.data(), ephSeed.bytes.data());
    auto rpk = boxPart(pk);
    auto nonce = deriveNonce(epk, rpk);

    Ciphertext ct;
    ct.recipient = fingerprint(pk);
    ct.bytes.resize(epk.size() + crypto_box_MACBYTES + plaintext.size());
    std::copy(epk.begin(), epk.end(), ct.bytes.begin());
    int rc = crypto_box_easy(ct.bytes.data() + epk.size(), plaintext.data(), plaintext.size(), nonce.data(), rpk.data(),
                             esk.data());
    sodium_memzero(esk.data(), esk.size());
    // Only fails for a recipient key that is a low-order point.
    if (rc != 0) throw std::invalid_argument("encrypt: unusable recipient key");
    return ct;
}

Bytes decrypt(const KeyPair& keys, const Ciphertext& ct) {
    ensureSodium();
    if (ct.bytes.size() < crypto_box_PUBLICKEYBYTES + crypto_box_MACBYTES) throw DecryptError("ciphertext too short");
    if (keys.sk.size() != kSecretKeySize) throw DecryptError("malformed secret key");
    ByteView raw(ct.bytes);
    auto epk = raw.subspan(0, crypto_box_PUBLICKEYBYTES);
    auto body = raw.subspan(crypto_box_PUBLICKEYBYTES);
    auto nonce = deriveNonce(epk, boxPart(keys.pk));
    Bytes out(body.size() - crypto_box_MACBYTES);
    const std::uint8_t* bsk = keys.sk.data() + crypto_sign_SECRETKEYBYTES;
    if (crypto_box_open_easy(out.data(), body.data(), body.size(), nonce.data(), epk.data(), bsk) != 0)
        throw DecryptError("authentication failed");
    return out;
}

Ciphertext commit(const PublicKey& pk, ByteView plaintext, const Randomness& randomness) {
    Bytes payload(plaintext.begin(), plaintext.end());
    append(payload, randomness.view());
    return encrypt(pk, payload, randomness);
}

Opening open(const KeyPair& keys, const Ciphertext& commitment) {
    Bytes payload = decrypt(keys, commitment);
    if (payload.size() < Randomness::size()) throw DecryptError("commitment payload too short");
    Opening o;
    auto split = payload.end() - static_cast<std::ptrdiff_t>(Randomness::size());
    o.plaintext.assign(payload.begin(), split);
    o.randomness = Randomness::fromView(ByteView(payload).subspan(o.plaintext.size()));
    return o;
}

bool checkOpening(const PublicKey& pk, ByteView plaintext, const Randomness& randomness, const Ciphertext& commitment) {
    return commit(pk, plaintext, randomness) == commitment;
}

Signature sign(const KeyPair& keys, ByteView msg) {
    ensureSodium();
    Signature sig;
    crypto_sign_detached(sig.bytes.data(), nullptr, msg.data(), msg.size(), keys.sk.data());
    return sig;
}

bool verifySig(const PublicKey& pk, ByteView msg, const Signature& sig) {
    ensureSodium();
    if (pk.bytes.size() != kPublicKeySize) return false;
    return crypto_sign_verify_detached(sig.bytes.data(), msg.data(), msg.size(), signPart(pk).data()) == 0;
}

}  // namespace cloak::crypto
