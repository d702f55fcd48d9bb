#include "sbchain/sharding.hpp"

namespace sbchain {

namespace sharding_payload {

static void write_ref(ByteWriter& w, const WithdrawRef& ref) {
    w.u32(ref.src_shard);
    w.u64(ref.src_index);
    w.u32(ref.src_slot);
    write_digest(w, ref.tx_digest);
}

static WithdrawRef read_ref(ByteReader& r) {
    WithdrawRef ref;
    ref.src_shard = r.u32();
    ref.src_index = r.u64();
    ref.src_slot = r.u32();
    ref.tx_digest = read_digest(r);
    return ref;
}

Bytes encode_spawn(ShardId shard, const std::vector<std::pair<AccountId, uint64_t>>& deposits) {
    ByteWriter w;
    w.u8(kSpawn);
    w.u32(shard);
    w.list_len(deposits.size());
    for (const auto& [account, amount] : deposits) {
        w.u64(account);
        w.u64(amount);
    }
    return w.take();
}

Bytes encode_withdraw(ShardId dst_shard, uint64_t amount) {
    ByteWriter w;
    w.u8(kWithdraw);
    w.u32(dst_shard);
    w.u64(amount);
    return w.take();
}

Bytes encode_credit(const WithdrawRef& ref, AccountId account, uint64_t amount) {
    ByteWriter w;
    w.u8(kCredit);
    write_ref(w, ref);
    w.u64(account);
    w.u64(amount);
    return w.take();
}

std::optional<Decoded> decode(const Bytes& payload) {
    ByteReader r(payload);
    Decoded d;
    d.tag = r.u8();
    if (d.tag == kSpawn) {
        d.shard = r.u32();
        uint32_t n = r.list_len();
        if (!r.ok()) return std::nullopt;
        for (uint32_t i = 0; i < n; ++i) {
            AccountId account = r.u64();
            uint64_t amount = r.u64();
            d.deposits.emplace_back(account, amount);
        }
    } else if (d.tag == kWithdraw) {
        d.shard = r.u32();
        d.amount = r.u64();
    } else if (d.tag == kCredit) {
        d.ref = read_ref(r);
        d.account = r.u64();
        d.amount = r.u64();
    } else {
        return std::nullopt;
    }
    if (!r.at_end()) return std::nullopt;
    return d;
}

} // namespace sharding_payload

void ShardDirectory::apply(const BuiltinEvent& ev, ShardId src_shard) {
    switch (ev.kind) {
    case BuiltinEvent::Kind::ShardSpawned: {
        uint64_t total = 0;
        for (const auto& [account, amount] : ev.deposits) total += amount;
        escrow[ev.shard] += total;
        break;
    }
    case BuiltinEvent::Kind::Withdrawn: {
        auto& t = transfers[ev.ref];
        t.ref = ev.ref;
        t.dst_shard = ev.shard;
        t.account = ev.account;
        t.amount = ev.amount;
        t.withdraw_committed = true;
        (void)src_shard;
        break;
    }
    case BuiltinEvent::Kind::Credited: {
        auto it = transfers.find(ev.ref);
        if (it != transfers.end()) it->second.credit_committed = true;
        break;
    }
    default: break;
    }
}

Bytes ShardDirectory::serialize() const {
    ByteWriter w;
    w.list_len(escrow.size());
    for (const auto& [shard, total] : escrow) {
        w.u32(shard);
        w.u64(total);
    }
    w.list_len(transfers.size());
    for (const auto& [ref, t] : transfers) {
        w.u32(ref.src_shard);
        w.u64(ref.src_index);
        w.u32(ref.src_slot);
        w.raw(ref.tx_digest.value.data(), ref.tx_digest.value.size());
        w.u32(t.dst_shard);
        w.u64(t.account);
        w.u64(t.amount);
        w.flag(t.withdraw_committed);
        w.flag(t.credit_committed);
    }
    return w.take();
}

} // namespace sbchain
