// The enclave program: key setup, deployment binding, proposal settlement,
// MPT execution with input verification, challenge and punishment, and
// proof emission. One logical actor; sessions are keyed by id_p.
#pragma once

#include <set>

#include "cloak/chain/pop.hpp"
#include "cloak/chain/service.hpp"
#include "cloak/crypto/rng.hpp"
#include "cloak/enclave/inputs.hpp"

namespace cloak::enclave {

enum class SessionStatus { GenerateIdp, Settle, Execute, Complete, Abort };
std::string_view sessionStatusName(SessionStatus s);
/// Edges of the session status graph.
bool allowedTransition(SessionStatus from, SessionStatus to);

enum class AbortReason { Timeout, PolicyUnmet, BadStatus, BadAckSignature, BadPoP, BindingMismatch, UnknownSession, UnknownDeployment };
std::string_view abortReasonName(AbortReason r);

class EnclaveAbort : public std::runtime_error {
  public:
    EnclaveAbort(AbortReason r, const std::string& detail) : std::runtime_error(std::string(abortReasonName(r)) + ": " + detail), reason(r) {}
    AbortReason reason;
};

struct AttestationReport {
    crypto::PublicKey pkE;
    Digest measurement;
    crypto::Signature issuerSig;
    json toJson() const;
};
const crypto::PublicKey& attestationIssuerKey();
Digest enclaveMeasurement();
bool verifyReport(const AttestationReport& r);

struct EnclaveConfig {
    std::uint64_t tauResMin = 5, tauResMax = 20;
    std::uint64_t tauComMin = 20, tauComMax = 60;
    /// τ_com is at least τ_res + this margin.
    std::uint64_t tauGap = 5;
};

/// Settlement conditions.
struct MeetPolicy {
    bool requireAllInputs = true;
    std::size_t minParties = 1;
};

/// p = ⟨f, q, t_n⟩ plus the caller and the target verifier.
struct Proposal {
    std::string f;
    chain::Coins q = 0;
    std::uint64_t tN = 0;  // last height at which settlement may happen
    Address proposer;
    Address adrV;
    MeetPolicy meet;

    json toJson() const;
};

struct SignedProposal {
    Digest idp;
    Proposal p;
    crypto::Signature sig;
    Bytes signedBytes() const;
};
bool verifySignedProposal(const crypto::PublicKey& pkE, const SignedProposal& sp);

struct ExecOutcome {
    bool executed = false;
    std::vector<Address> malicious;    // inputs missing or inconsistent
    std::optional<std::string> failure;  // consistent inputs, but execution failed
};

struct Adjudication {
    bool resumed = false;
    std::optional<std::string> failure;
    std::vector<Address> malicious;
    std::optional<chain::Transaction> punish;
};

class Enclave {
  public:
    Enclave(const crypto::Seed& keySeed, const crypto::Seed& rngSeed, const Digest& genesis, EnclaveConfig cfg = {});

    const AttestationReport& report() const { return report_; }
    const crypto::PublicKey& pk() const { return keys_.pk; }
    const Address& address() const { return keys_.addr; }
    std::uint64_t tauRes() const { return tauRes_; }
    std::uint64_t tauCom() const { return tauCom_; }
    const Digest& checkpoint() const { return bcp_; }

    /// Binds ⟨F, P, adr_V⟩ after checking the Deploy transaction of the
    /// verifier against the recomputed hashes. Returns adr_F.
    Address deploy(const frontend::ContractAst& F, const codegen::ContractPolicy& P, const chain::Transaction& deployTx,
                   const chain::ProofOfPublication& pop);

    /// Deploy(state_init) transaction committing the initial state.
    chain::Transaction initState(const Address& adrV, const interp::StateStore& s0, const std::map<Address, crypto::PublicKey>& registered);

    SignedProposal generateIDp(const Proposal& p);

    chain::Transaction settleProposal(const Digest& idp, const std::vector<Ack>& acks, const std::map<Address, crypto::PublicKey>& registered,
                                      std::uint64_t now);

    ExecOutcome executeMpt(const Digest& idp, const std::vector<Envelope>& inputs, const chain::Transaction& txP,
                           const chain::ProofOfPublication& popP, const std::vector<chain::CommitEntry>& onChainCs);

    /// nullopt when `malicious` is empty.
    std::optional<chain::Transaction> challengeParties(const Digest& idp, const std::vector<Address>& malicious);

    /// `pop` must include TX_cha and the responses and reach past h_cp + τ_res.
    Adjudication adjudicate(const Digest& idp, const chain::Transaction& txCha, const std::vector<chain::Transaction>& responses,
                            const chain::ProofOfPublication& pop);

    chain::Transaction emitComplete(const Digest& idp);

    /// TX_pns with an empty malicious set for a session whose execution
    /// failed on consistent inputs.
    chain::Transaction emitAbort(const Digest& idp);

    SessionStatus status(const Digest& idp) const;
    /// Every status change so far, in order.
    const std::vector<std::pair<SessionStatus, SessionStatus>>& transitions() const { return transitions_; }

  private:
    struct Deployment {
        frontend::ContractAst F;
        codegen::ContractPolicy P;
        Digest hF, hP;
        Address adrF;
    };
    struct Session {
        Proposal p;
        SessionStatus status = SessionStatus::GenerateIdp;
        chain::SettledProposal settled;
        std::vector<crypto::PublicKey> pks;
        std::vector<std::vector<std::string>> supplies;
        std::map<Address, crypto::PublicKey> registered;
        Digest txP;
        std::optional<std::uint64_t> hCp;
        std::vector<chain::CommitEntry> cS, cNew, cR;
        std::map<Address, PartyInput> collected;
        std::vector<Address> malicious;
        std::optional<std::string> failure;
    };

    Session& session(const Digest& idp);
    const Deployment& deployment(const Address& adrV) const;
    void setStatus(Session& s, SessionStatus to);
    chain::Transaction sign(chain::TxKind kind, json payload);
    crypto::Ciphertext encryptTo(const crypto::PublicKey& pk, const interp::Value& v);
    chain::CommitEntry commitValue(std::string var, Bytes key, const interp::ResolvedOwner& owner, const interp::Value& v,
                                   const std::map<Address, crypto::PublicKey>& pks);
    bool inputConsistent(const Session& s, std::size_t i, const PartyInput& in) const;
    std::optional<PartyInput> openInput(const Session& s, const Digest& idp, const Envelope& e) const;
    void run(Session& s);

    crypto::KeyPair keys_;
    crypto::DetRng rng_;
    EnclaveConfig cfg_;
    AttestationReport report_;
    std::uint64_t tauRes_ = 0, tauCom_ = 0;
    Digest bcp_;
    std::uint64_t nonce_ = 0;
    std::map<Address, Deployment> deployments_;
    std::map<Digest, Session> sessions_;
    std::vector<std::pair<SessionStatus, SessionStatus>> transitions_;
};

}  // namespace cloak::enclave
