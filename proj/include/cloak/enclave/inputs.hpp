// What parties hand to the enclave: acknowledgements carrying input
// commitments, and the openings of inputs and owned state cells.
#pragma once

#include "cloak/chain/verifier.hpp"
#include "cloak/codegen/policy.hpp"
#include "cloak/enclave/envelope.hpp"
#include "cloak/interp/partition.hpp"

namespace cloak::enclave {

struct StateOpening {
    interp::CellId cell;
    interp::Value value;
    crypto::Randomness r;
};

/// x_i with its randomness, plus openings of the party's state cells.
struct PartyInput {
    json params = json::object();
    crypto::Randomness rX;
    std::vector<StateOpening> states;

    Bytes paramBytes() const;
    Bytes encode() const;
    static PartyInput decode(ByteView raw);
};

/// C_xi = Enc(pk_i, x_i || r_xi)
crypto::Ciphertext inputCommitment(const crypto::PublicKey& pk, const PartyInput& in);
/// H_Cxi
Digest commitmentDigest(const crypto::Ciphertext& c);

/// ACK_i = ⟨id_p, C_xi⟩ signed by the party, with the names of the
/// parameters it supplies.
struct Ack {
    Digest idp;
    Address party;
    crypto::PublicKey pk;
    crypto::Ciphertext cx;
    std::vector<std::string> supplies;
    crypto::Signature sig;

    Bytes signedBytes() const;
    json toJson() const;
};

Ack makeAck(const crypto::KeyPair& keys, const Digest& idp, const crypto::Ciphertext& cx, std::vector<std::string> supplies);
bool verifyAck(const Ack& a);

class MergeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parameters a party can name in its supplies. Address arrays paired with
/// a data array are filled from the suppliers of that data array.
std::vector<std::string> suppliableParams(const codegen::FunctionPolicy& fp);

/// Builds the call parameters from per-party inputs, in party order. A data
/// array paired with `address[!t]` takes one element per supplying party and
/// the address array takes that party's address; every other parameter must
/// be supplied, with one agreed value.
std::map<std::string, interp::Value> mergeParams(const codegen::FunctionPolicy& fp, const std::vector<std::pair<Address, json>>& inputs);

/// "all", "tee" or the owner's 0x-address.
std::string ownerString(const interp::ResolvedOwner& o);

Bytes cellKeyBytes(const interp::CellId& c);
interp::CellId cellFromEntry(const chain::CommitEntry& e);

}  // namespace cloak::enclave
