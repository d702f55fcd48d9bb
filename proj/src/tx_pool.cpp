#include "sbchain/tx_pool.hpp"

#include <algorithm>

namespace sbchain {

const char* to_string(DropReason r) {
    switch (r) {
    case DropReason::Invalid: return "Invalid";
    case DropReason::Overload: return "Overload";
    case DropReason::Duplicate: return "Duplicate";
    }
    return "?";
}

SubmitResult TxPool::insert(const Transaction& tx) {
    if (entries_.size() >= capacity_) {
        count_drop(DropReason::Overload);
        return {false, DropReason::Overload, std::nullopt};
    }
    auto [it, inserted] = entries_.try_emplace({tx.sender, tx.nonce}, Entry{tx, next_seq_});
    if (!inserted) {
        count_drop(DropReason::Duplicate);
        return {false, DropReason::Duplicate, std::nullopt};
    }
    next_seq_ += 1;
    return {true, std::nullopt, std::nullopt};
}

std::optional<std::vector<Transaction>> TxPool::take(uint32_t count) {
    if (entries_.size() < count) return std::nullopt;

    // Arrival order decides which sender goes next; each pick takes that
    // sender's lowest pending nonce so nonce chains stay gap-free.
    std::vector<const std::pair<const std::pair<AccountId, uint64_t>, Entry>*> by_arrival;
    by_arrival.reserve(entries_.size());
    for (const auto& kv : entries_) by_arrival.push_back(&kv);
    std::sort(by_arrival.begin(), by_arrival.end(),
              [](auto* a, auto* b) { return a->second.seq < b->second.seq; });

    std::map<AccountId, std::map<uint64_t, const Transaction*>> per_sender;
    for (const auto& [key, entry] : entries_) per_sender[key.first][key.second] = &entry.tx;

    std::vector<Transaction> picked;
    picked.reserve(count);
    for (auto* kv : by_arrival) {
        if (picked.size() == count) break;
        auto sender_it = per_sender.find(kv->first.first);
        if (sender_it == per_sender.end() || sender_it->second.empty()) continue;
        auto lowest = sender_it->second.begin();
        picked.push_back(*lowest->second);
        sender_it->second.erase(lowest);
    }

    for (const auto& tx : picked) entries_.erase({tx.sender, tx.nonce});
    std::sort(picked.begin(), picked.end(), [](const Transaction& a, const Transaction& b) {
        return std::tie(a.sender, a.nonce) < std::tie(b.sender, b.nonce);
    });
    return picked;
}

void TxPool::prune(const WorldState& state) {
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (it->first.second < state.nonce(it->first.first)) {
            it = entries_.erase(it);
            pruned_ += 1;
        } else {
            ++it;
        }
    }
}

} // namespace sbchain
