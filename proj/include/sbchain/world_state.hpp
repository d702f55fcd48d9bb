#pragma once

#include <map>
#include <optional>
#include <string>

#include "sbchain/bytes.hpp"
#include "sbchain/digest.hpp"
#include "sbchain/signature.hpp"
#include "sbchain/types.hpp"

namespace sbchain {

enum class RejectReason : uint8_t {
    BadNonce,
    InsufficientBalance,
    GasTooLow,
    ExceedsBlockGas,
    BadSignature,
    Oversized,
    StaleNonce,
};

const char* to_string(RejectReason r);

enum class ValidationKind : uint8_t { Eager, Lazy };

struct ValidationVerdict {
    bool accepted = false;
    std::optional<RejectReason> reason;
    ValidationKind kind = ValidationKind::Eager;

    static ValidationVerdict accept(ValidationKind k) { return {true, std::nullopt, k}; }
    static ValidationVerdict reject(ValidationKind k, RejectReason r) { return {false, r, k}; }
};

// Per-node tallies of validations performed (accepting or rejecting).
struct ValidationCounters {
    uint64_t eager_count = 0;
    uint64_t lazy_count = 0;
};

struct AccountState {
    uint64_t balance = 0;
    uint64_t nonce = 0; // next expected

    bool operator==(const AccountState&) const = default;
};

enum class ExecStatus : uint8_t {
    Success,
    RevertedFault,       // payload op faulted; transfer reversed, nonce consumed
    RevertedBalance,     // balance short at execution point; reversed, nonce consumed
    RejectedUnauthorized // signature does not verify; no state change at all
};

struct ExecOutcome {
    ExecStatus status = ExecStatus::Success;
    bool executed() const { return status != ExecStatus::RejectedUnauthorized; }
    bool success() const { return status == ExecStatus::Success; }
};

// Payloads beginning with this marker deterministically fault at execution,
// exercising the reversal path.
inline constexpr const char* kFaultMarker = "FAULT";

bool payload_faults(const Bytes& payload);

// Balances, nonces and stored payloads plus a digest over their canonical
// serialization. Identical committed histories yield identical digests.
class WorldState {
  public:
    WorldState() = default;
    explicit WorldState(std::map<AccountId, uint64_t> genesis_balances);

    const AccountState& account(AccountId id) const;
    uint64_t balance(AccountId id) const { return account(id).balance; }
    uint64_t nonce(AccountId id) const { return account(id).nonce; }
    std::optional<Bytes> payload_at(AccountId id, uint64_t nonce) const;

    uint64_t height() const { return height_; }
    void bump_height() { height_ += 1; }

    uint64_t total_balance() const;

    // Canonical serialization (the digested form); also the snapshot export
    // layout, so snapshots from different nodes can be diffed byte-for-byte.
    Bytes serialize() const;
    static std::optional<WorldState> deserialize(const Bytes& b);
    Digest state_digest() const { return digest_of(serialize()); }

    const std::map<AccountId, AccountState>& accounts() const { return accounts_; }
    const std::map<std::pair<AccountId, uint64_t>, Bytes>& payload_store() const {
        return payloads_;
    }

    // Test/scenario setup only; committed execution goes through apply_transaction.
    void credit(AccountId id, uint64_t amount) { accounts_[id].balance += amount; }
    bool debit(AccountId id, uint64_t amount);

  private:
    friend ExecOutcome apply_transaction(Transaction const&, WorldState&, const ChainConfig&,
                                         const SignatureScheme&);

    std::map<AccountId, AccountState> accounts_;
    std::map<std::pair<AccountId, uint64_t>, Bytes> payloads_;
    uint64_t height_ = 0;
};

// Reception-time validation: nonce window, balance, gas, signature, size.
ValidationVerdict eager_validate(const Transaction& tx, const WorldState& state,
                                 const ChainConfig& cfg, ValidationCounters& counters,
                                 const SignatureScheme& scheme = default_scheme());

// Pre-execution validation: exact nonce and intrinsic gas only. Strictly
// fewer checks than eager validation; no signature, size or balance re-check.
ValidationVerdict lazy_validate(const Transaction& tx, const WorldState& state,
                                const ChainConfig& cfg, ValidationCounters& counters);

// Executes one lazily-validated transaction in place. On payload fault or a
// balance shortfall discovered at execution, every effect except the nonce
// increment is reversed. A transaction whose signature fails verification is
// rejected outright with no state change (the sender cannot be charged for a
// transaction it never authorized).
ExecOutcome apply_transaction(const Transaction& tx, WorldState& state, const ChainConfig& cfg,
                              const SignatureScheme& scheme = default_scheme());

} // namespace sbchain
