#pragma once

#include <map>
#include <set>
#include <vector>

#include "sbchain/bytes.hpp"
#include "sbchain/digest.hpp"
#include "sbchain/types.hpp"

namespace sbchain {

using ShardId = uint32_t; // 0 is the beacon chain

// Payloads for the built-in sharding contract account.
//
// SPAWN commits on the beacon: it atomically debits every listed depositor
// and escrows the total for the new shard, whose genesis balances equal the
// deposits. WITHDRAW commits on the source shard and burns the amount;
// anyone holding the withdraw reference may then submit the matching CREDIT
// on the destination shard, which mints it exactly once (dedup by
// reference). The two commits are deliberately not atomic. A withdraw with
// destination 0 returns funds to the beacon (shard exit).
namespace sharding_payload {
inline constexpr uint8_t kSpawn = 3;
inline constexpr uint8_t kWithdraw = 4;
inline constexpr uint8_t kCredit = 5;

struct WithdrawRef {
    ShardId src_shard = 0;
    uint64_t src_index = 0; // consensus index of the withdraw commit
    NodeId src_slot = 0;    // block slot within that superblock
    Digest tx_digest;

    auto operator<=>(const WithdrawRef&) const = default;
};

Bytes encode_spawn(ShardId shard, const std::vector<std::pair<AccountId, uint64_t>>& deposits);
Bytes encode_withdraw(ShardId dst_shard, uint64_t amount);
Bytes encode_credit(const WithdrawRef& ref, AccountId account, uint64_t amount);

struct Decoded {
    uint8_t tag = 0;
    ShardId shard = 0; // spawn target / withdraw destination
    std::vector<std::pair<AccountId, uint64_t>> deposits;
    uint64_t amount = 0;
    WithdrawRef ref;
    AccountId account = 0;
};
std::optional<Decoded> decode(const Bytes& payload);
} // namespace sharding_payload

// Execution-side effects surfaced by the state node for the simulator and
// the conservation auditor.
struct BuiltinEvent {
    enum class Kind : uint8_t {
        ShardSpawned,
        SpawnRejected,
        Withdrawn,
        WithdrawRejected,
        Credited,
        CreditRejected,
    };
    Kind kind{};
    ShardId shard = 0; // spawn target / withdraw destination / credit source
    AccountId account = 0;
    uint64_t amount = 0;
    std::vector<std::pair<AccountId, uint64_t>> deposits; // spawn only
    sharding_payload::WithdrawRef ref;                    // withdraw/credit
};

// Directory view derived from committed logs: escrow per shard and pending
// cross-shard transfers. Maintained by the simulator's auditor, not trusted
// node state.
struct InFlightTransfer {
    sharding_payload::WithdrawRef ref;
    ShardId dst_shard = 0;
    AccountId account = 0;
    uint64_t amount = 0;
    bool withdraw_committed = false;
    bool credit_committed = false;
};

struct ShardDirectory {
    std::map<ShardId, uint64_t> escrow;           // genesis total escrowed per shard
    std::map<sharding_payload::WithdrawRef, InFlightTransfer> transfers;

    uint64_t in_flight_total() const {
        uint64_t sum = 0;
        for (const auto& [ref, t] : transfers)
            if (t.withdraw_committed && !t.credit_committed) sum += t.amount;
        return sum;
    }

    void apply(const BuiltinEvent& ev, ShardId src_shard);

    Bytes serialize() const; // snapshot export for conservation audits
};

} // namespace sbchain
