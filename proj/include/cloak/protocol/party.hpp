// Party client: keys, tracked openings of owned state cells, and the
// messages and transactions a party produces.
#pragma once

#include "cloak/chain/chain.hpp"
#include "cloak/crypto/rng.hpp"
#include "cloak/enclave/inputs.hpp"
#include "cloak/protocol/scenario.hpp"

namespace cloak::protocol {

class PartyClient {
  public:
    PartyClient(PartyConfig cfg, const crypto::Seed& rngSeed, const std::map<std::string, Address>& names);

    const PartyConfig& config() const { return cfg_; }
    const std::string& name() const { return cfg_.name; }
    const crypto::KeyPair& keys() const { return keys_; }
    const Address& address() const { return keys_.addr; }
    Behavior behavior() const { return cfg_.behavior; }
    /// Parameters with "@name" references resolved.
    const json& params() const { return params_; }

    chain::Transaction tx(chain::TxKind kind, json payload);

    /// Re-reads the party's cells from the verifier and opens them.
    void refreshOpenings(const chain::VerifierState& v);
    const std::vector<enclave::StateOpening>& openings() const { return openings_; }

    /// Fresh input for a session; MismatchedInputs parties keep a second,
    /// altered copy for what they later send.
    void prepare(const Digest& idp);
    enclave::Ack ack(const crypto::PublicKey& pkE) const;
    /// The input actually sent (altered for MismatchedInputs).
    enclave::Envelope inputEnvelope(const crypto::PublicKey& pkE);
    const enclave::PartyInput& committedInput() const { return committed_; }

    /// Reads what the party can of a TX_com's return commitments: public
    /// entries in the clear, its own entries decrypted, others as "encrypted".
    json decryptOutputs(const json& txComPayload) const;

  private:
    PartyConfig cfg_;
    crypto::KeyPair keys_;
    crypto::DetRng rng_;
    json params_;
    std::uint64_t nonce_ = 0;
    std::vector<enclave::StateOpening> openings_;
    Digest idp_;
    enclave::PartyInput committed_, sent_;
};

/// Return-value entries of a TX_com payload the holder of `keys` can read,
/// as {name: value string}. Throws crypto::DecryptError for an entry owned
/// by `keys` that does not open.
json readableOutputs(const crypto::KeyPair& keys, const json& txComPayload);

}  // namespace cloak::protocol
