// CloakService: registered keys, the coin ledger and proposal lifecycle,
// together with the verifier instances it talks to. All operations either
// apply fully or throw Revert.
#pragma once

#include <map>
#include <stdexcept>

#include "cloak/chain/verifier.hpp"

namespace cloak::chain {

enum class RevertReason {
    DuplicateProposal,
    InsufficientCoins,
    NotEnclave,
    BadStatus,
    NotParty,
    TooEarly,
    ProofRejected,
    UnknownProposal,
    UnknownVerifier,
    NotDeployed,
    BadPayload,
};
std::string_view revertReasonName(RevertReason r);

class Revert : public std::runtime_error {
  public:
    Revert(RevertReason r, const std::string& detail) : std::runtime_error(std::string(revertReasonName(r)) + ": " + detail), reason(r) {}
    RevertReason reason;
};

enum class ProposalStatus { Settle, Abort, Complete, Timeout };
std::string_view proposalStatusName(ProposalStatus s);

using Coins = std::uint64_t;

/// p' = ⟨adr_V, f, parties, H_Cx, q⟩
struct SettledProposal {
    Address adrV;
    std::string f;
    std::vector<Address> parties;
    std::vector<Digest> hCx;
    Coins q = 0;

    json toJson() const;
    static SettledProposal fromJson(const json& j);
    bool operator==(const SettledProposal&) const = default;
};

struct PartyRecord {
    Address addr;
    bool cha = false;
    std::optional<json> res;  // last response payload
};

struct ProposalRecord {
    Address V;
    std::string f;
    std::vector<PartyRecord> parties;
    std::vector<Digest> hCx;
    Coins q = 0;
    std::uint64_t tauRes = 0;
    std::uint64_t tauCom = 0;
    std::uint64_t hCp = 0;
    std::optional<std::vector<CommitEntry>> cR;
    ProposalStatus status = ProposalStatus::Settle;

    bool isParty(const Address& a) const;
};

/// Splits `total` evenly over `recipients`, flooring, with the remainder
/// going to the first recipient.
std::vector<std::pair<Address, Coins>> splitRefund(Coins total, const std::vector<Address>& recipients);

/// Per-recipient refund amounts before flooring, as exact rationals num/den.
struct Rational {
    Coins num = 0;
    Coins den = 1;
    bool operator==(const Rational&) const = default;
};
/// q * (1 + m / (n - m + 1))
Rational punishRefund(Coins q, std::size_t n, std::size_t m);
/// q * (1 + 1 / n)
Rational timeoutRefund(Coins q, std::size_t n);

struct World {
    bool serviceDeployed = false;
    crypto::PublicKey pkE;
    Address adrE;
    Address adrExec;

    std::map<Address, crypto::PublicKey> parPks;
    std::map<Address, Coins> coins;
    std::map<Digest, ProposalRecord> prpls;
    std::map<Address, VerifierState> verifiers;
    std::vector<std::string> warnings;

    Coins coinsOf(const Address& a) const;
    const ProposalRecord* proposal(const Digest& idp) const;
    const VerifierState* verifier(const Address& a) const;

    void deployService(const Address& sender, const crypto::PublicKey& pkE, const Address& adrExec);
    Address deployVerifier(const Digest& txId, const codegen::VerifierDescriptor& d);
    void initVerifierState(const Address& sender, const Address& adrV, const std::vector<CommitEntry>& cells);

    void csRegister(const Address& sender, const crypto::PublicKey& pk);
    void csDeposit(const Address& sender, Coins amount);
    void csPropose(const Address& sender, std::uint64_t height, const Digest& idp, const SettledProposal& p, std::uint64_t tauRes,
                   std::uint64_t tauCom);
    void csChallenge(const Address& sender, const Digest& idp, const std::vector<Address>& challenged);
    void csResponse(const Address& sender, const Digest& idp, const json& encryptedInputs);
    void csPunish(const Address& sender, std::uint64_t height, const Digest& idp, const std::vector<Address>& malicious);
    void csComplete(const Address& sender, const Digest& idp, const Proof& proof, const std::vector<CommitEntry>& cS,
                    const std::vector<CommitEntry>& cNew, const std::vector<CommitEntry>& cR);
    void csTimeout(const Address& sender, std::uint64_t height, const Digest& idp);

    /// The checks of csComplete without its effects: status, sender, old
    /// state snapshot and proof.
    std::optional<RevertReason> checkComplete(const Address& sender, const Digest& idp, const Proof& proof, const std::vector<CommitEntry>& cS,
                                              const std::vector<CommitEntry>& cNew, const std::vector<CommitEntry>& cR) const;

    /// Dispatches one transaction by kind. Throws Revert.
    void apply(const Transaction& tx, std::uint64_t height);

    Coins totalCoins() const;

  private:
    ProposalRecord& record(const Digest& idp);
    void requireEnclave(const Address& sender) const;
    void credit(const std::vector<std::pair<Address, Coins>>& amounts);
};

/// Address of the verifier created by a Deploy transaction.
Address verifierAddress(const Digest& deployTxId);

}  // namespace cloak::chain
