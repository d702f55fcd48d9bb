#pragma once

#include <map>

#include "sbchain/types.hpp"
#include "sbchain/world_state.hpp"

namespace sbchain {

enum class DropReason : uint8_t { Invalid, Overload, Duplicate };

const char* to_string(DropReason r);

struct SubmitResult {
    bool accepted = false;
    std::optional<DropReason> drop;
    std::optional<RejectReason> verdict_reason; // set when drop == Invalid
};

// Pending eager-validated transactions, unique per (sender, nonce), bounded
// by pool_capacity. Selection order for proposals: arrival order across
// senders, nonce-ascending within a sender, so a late-arriving lower nonce
// is pulled ahead of its successors.
class TxPool {
  public:
    TxPool() = default;
    explicit TxPool(uint32_t capacity) : capacity_(capacity) {}

    SubmitResult insert(const Transaction& tx);

    // Removes and returns `count` transactions, or nothing if fewer pend.
    std::optional<std::vector<Transaction>> take(uint32_t count);

    // Drop entries made stale by committed state (nonce below account nonce).
    void prune(const WorldState& state);

    size_t size() const { return entries_.size(); }
    uint32_t capacity() const { return capacity_; }
    uint64_t drop_count(DropReason r) const { return drops_[static_cast<size_t>(r)]; }
    uint64_t total_drops() const { return drops_[0] + drops_[1] + drops_[2]; }
    uint64_t pruned() const { return pruned_; }
    bool contains(AccountId sender, uint64_t nonce) const {
        return entries_.count({sender, nonce}) != 0;
    }

    void count_drop(DropReason r) { drops_[static_cast<size_t>(r)] += 1; }

  private:
    struct Entry {
        Transaction tx;
        uint64_t seq = 0; // arrival order
    };

    uint32_t capacity_ = 5000;
    uint64_t next_seq_ = 0;
    uint64_t pruned_ = 0;
    std::map<std::pair<AccountId, uint64_t>, Entry> entries_;
    std::array<uint64_t, 3> drops_{};
};

} // namespace sbchain
