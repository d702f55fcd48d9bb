#include "sbchain/world_state.hpp"

#include <cstring>

namespace sbchain {

const char* to_string(RejectReason r) {
    switch (r) {
    case RejectReason::BadNonce: return "BadNonce";
    case RejectReason::InsufficientBalance: return "InsufficientBalance";
    case RejectReason::GasTooLow: return "GasTooLow";
    case RejectReason::ExceedsBlockGas: return "ExceedsBlockGas";
    case RejectReason::BadSignature: return "BadSignature";
    case RejectReason::Oversized: return "Oversized";
    case RejectReason::StaleNonce: return "StaleNonce";
    }
    return "?";
}

bool payload_faults(const Bytes& payload) {
    const size_t n = std::strlen(kFaultMarker);
    return payload.size() >= n && std::memcmp(payload.data(), kFaultMarker, n) == 0;
}

WorldState::WorldState(std::map<AccountId, uint64_t> genesis_balances) {
    for (const auto& [id, bal] : genesis_balances) accounts_[id] = AccountState{bal, 0};
}

const AccountState& WorldState::account(AccountId id) const {
    static const AccountState empty{};
    auto it = accounts_.find(id);
    return it == accounts_.end() ? empty : it->second;
}

std::optional<Bytes> WorldState::payload_at(AccountId id, uint64_t nonce) const {
    auto it = payloads_.find({id, nonce});
    if (it == payloads_.end()) return std::nullopt;
    return it->second;
}

uint64_t WorldState::total_balance() const {
    uint64_t sum = 0;
    for (const auto& [id, acct] : accounts_) sum += acct.balance;
    return sum;
}

bool WorldState::debit(AccountId id, uint64_t amount) {
    auto it = accounts_.find(id);
    if (it == accounts_.end() || it->second.balance < amount) return false;
    it->second.balance -= amount;
    return true;
}

Bytes WorldState::serialize() const {
    ByteWriter w;
    w.u64(height_);
    w.list_len(accounts_.size());
    for (const auto& [id, acct] : accounts_) {
        w.u64(id);
        w.u64(acct.balance);
        w.u64(acct.nonce);
    }
    w.list_len(payloads_.size());
    for (const auto& [key, payload] : payloads_) {
        w.u64(key.first);
        w.u64(key.second);
        w.bytes(payload);
    }
    return w.take();
}

std::optional<WorldState> WorldState::deserialize(const Bytes& b) {
    ByteReader r(b);
    WorldState s;
    s.height_ = r.u64();
    uint32_t n_accounts = r.list_len();
    if (!r.ok()) return std::nullopt;
    for (uint32_t i = 0; i < n_accounts; ++i) {
        AccountId id = r.u64();
        AccountState acct;
        acct.balance = r.u64();
        acct.nonce = r.u64();
        s.accounts_[id] = acct;
    }
    uint32_t n_payloads = r.list_len();
    if (!r.ok()) return std::nullopt;
    for (uint32_t i = 0; i < n_payloads; ++i) {
        AccountId id = r.u64();
        uint64_t nonce = r.u64();
        Bytes payload = r.bytes();
        if (!r.ok()) return std::nullopt;
        s.payloads_[{id, nonce}] = std::move(payload);
    }
    if (!r.at_end()) return std::nullopt;
    return s;
}

ValidationVerdict eager_validate(const Transaction& tx, const WorldState& state,
                                 const ChainConfig& cfg, ValidationCounters& counters,
                                 const SignatureScheme& scheme) {
    counters.eager_count += 1;
    const auto kind = ValidationKind::Eager;
    if (tx.size() > cfg.max_tx_size)
        return ValidationVerdict::reject(kind, RejectReason::Oversized);
    if (!scheme.verify(tx.sender, tx.encode_unsigned(), tx.signature))
        return ValidationVerdict::reject(kind, RejectReason::BadSignature);
    const auto& acct = state.account(tx.sender);
    if (tx.nonce < acct.nonce)
        return ValidationVerdict::reject(kind, RejectReason::StaleNonce);
    if (tx.nonce >= acct.nonce + cfg.nonce_window)
        return ValidationVerdict::reject(kind, RejectReason::BadNonce);
    if (acct.balance < tx.amount + cfg.flat_gas_fee)
        return ValidationVerdict::reject(kind, RejectReason::InsufficientBalance);
    if (tx.gas_limit < cfg.intrinsic_gas)
        return ValidationVerdict::reject(kind, RejectReason::GasTooLow);
    if (tx.gas_limit > cfg.max_block_gas)
        return ValidationVerdict::reject(kind, RejectReason::ExceedsBlockGas);
    return ValidationVerdict::accept(kind);
}

ValidationVerdict lazy_validate(const Transaction& tx, const WorldState& state,
                                const ChainConfig& cfg, ValidationCounters& counters) {
    counters.lazy_count += 1;
    const auto kind = ValidationKind::Lazy;
    const auto& acct = state.account(tx.sender);
    if (tx.nonce < acct.nonce)
        return ValidationVerdict::reject(kind, RejectReason::StaleNonce);
    if (tx.nonce > acct.nonce)
        return ValidationVerdict::reject(kind, RejectReason::BadNonce);
    if (tx.gas_limit < cfg.intrinsic_gas)
        return ValidationVerdict::reject(kind, RejectReason::GasTooLow);
    return ValidationVerdict::accept(kind);
}

ExecOutcome apply_transaction(const Transaction& tx, WorldState& state, const ChainConfig& cfg,
                              const SignatureScheme& scheme) {
    const auto& acct = state.account(tx.sender);
    if (tx.nonce != acct.nonce)
        throw ContractError("apply_transaction: nonce precondition violated");

    // geth derives the sender from the signature during execution; with an
    // explicit sender field that becomes an authorization check here. Failing
    // it must not consume the (claimed) sender's nonce.
    if (!scheme.verify(tx.sender, tx.encode_unsigned(), tx.signature))
        return {ExecStatus::RejectedUnauthorized};

    auto& sender = state.accounts_[tx.sender];
    sender.nonce += 1;

    const uint64_t charge = tx.amount + cfg.flat_gas_fee;
    if (sender.balance < charge) return {ExecStatus::RevertedBalance};

    sender.balance -= charge;
    if (tx.recipient) state.accounts_[*tx.recipient].balance += tx.amount;
    if (cfg.flat_gas_fee > 0) state.accounts_[kFeeAccount].balance += cfg.flat_gas_fee;
    if (!tx.payload.empty()) state.payloads_[{tx.sender, tx.nonce}] = tx.payload;

    if (payload_faults(tx.payload)) {
        // Reverse everything but the nonce increment.
        state.payloads_.erase({tx.sender, tx.nonce});
        if (cfg.flat_gas_fee > 0) state.accounts_[kFeeAccount].balance -= cfg.flat_gas_fee;
        if (tx.recipient) state.accounts_[*tx.recipient].balance -= tx.amount;
        state.accounts_[tx.sender].balance += charge;
        return {ExecStatus::RevertedFault};
    }
    return {ExecStatus::Success};
}

} // namespace sbchain
