#include "sbchain/reduction.hpp"

#include <algorithm>

namespace sbchain {

ConsensusEngine::IndexState& ConsensusEngine::index_state(uint64_t index) {
    auto it = indices_.find(index);
    if (it == indices_.end()) {
        IndexState st;
        st.blocks.resize(cfg_.n);
        st.dec.resize(cfg_.n);
        st.proposed.resize(cfg_.n, false);
        it = indices_.emplace(index, std::move(st)).first;
    }
    return it->second;
}

RbInstance& ConsensusEngine::rb(uint64_t index, NodeId slot) {
    auto key = std::make_pair(index, slot);
    auto it = rb_.find(key);
    if (it == rb_.end()) it = rb_.emplace(key, RbInstance(cfg_, self_, index, slot)).first;
    return it->second;
}

BinInstance& ConsensusEngine::bc(uint64_t index, NodeId slot) {
    auto key = std::make_pair(index, slot);
    auto it = bc_.find(key);
    if (it == bc_.end())
        it = bc_.emplace(key, BinInstance(cfg_, self_, index, slot, bc_timeout_base_)).first;
    return it->second;
}

const BinInstance* ConsensusEngine::bin_instance(uint64_t index, NodeId slot) const {
    auto it = bc_.find({index, slot});
    return it == bc_.end() ? nullptr : &it->second;
}

const RbInstance* ConsensusEngine::rb_instance(uint64_t index, NodeId slot) const {
    auto it = rb_.find({index, slot});
    return it == rb_.end() ? nullptr : &it->second;
}

std::vector<std::optional<Block>> ConsensusEngine::delivered_blocks(uint64_t index) const {
    auto it = indices_.find(index);
    if (it == indices_.end()) return std::vector<std::optional<Block>>(cfg_.n);
    return it->second.blocks;
}

void ConsensusEngine::enqueue_block(const Block& block, EngineOutputs& out) {
    if (!block.well_formed(cfg_) || block.proposer != self_)
        throw ContractError("enqueue_block: malformed proposal");
    block_queue_.push_back(block);
    try_start(out);
}

void ConsensusEngine::try_start(EngineOutputs& out) {
    if (own_active_ || block_queue_.empty()) return;
    next_own_index_ = std::max(next_own_index_, next_emit_index_);
    // Skip indices where this node's slot is already spoken for (a false
    // proposal was swept in, or the slot has decided).
    while (true) {
        IndexState& st = index_state(next_own_index_);
        const BinInstance* inst = bin_instance(next_own_index_, self_);
        if (!st.proposed[self_] && (!inst || !inst->decided())) break;
        next_own_index_ += 1;
    }
    const uint64_t index = next_own_index_;
    IndexState& st = index_state(index);
    st.my_block = block_queue_.front();
    own_active_ = true;
    own_index_ = index;
    next_own_index_ += 1;

    RbOutputs rbo;
    rb(index, self_).broadcast(*st.my_block, rbo);
    drain_rb(index, self_, rbo, out);
}

void ConsensusEngine::bc_propose(uint64_t index, NodeId slot, uint8_t bit, EngineOutputs& out) {
    index_state(index).proposed[slot] = true;
    if (slot == self_) next_own_index_ = std::max(next_own_index_, index + 1);
    BcOutputs bco;
    bc(index, slot).propose(bit, bco);
    drain_bc(index, slot, bco, out);
}

void ConsensusEngine::handle(const Msg& m, NodeId from, EngineOutputs& out) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RbInitMsg> || std::is_same_v<T, RbEchoMsg> ||
                          std::is_same_v<T, RbReadyMsg> || std::is_same_v<T, RbFetchMsg> ||
                          std::is_same_v<T, RbPayloadMsg>) {
                if (v.slot >= cfg_.n) {
                    dropped_ += 1;
                    return;
                }
                RbOutputs rbo;
                auto& inst = rb(v.index, v.slot);
                if constexpr (std::is_same_v<T, RbInitMsg>) inst.on_init(v.block, from, rbo);
                else if constexpr (std::is_same_v<T, RbEchoMsg>)
                    inst.on_echo(v.payload_digest, from, rbo);
                else if constexpr (std::is_same_v<T, RbReadyMsg>)
                    inst.on_ready(v.payload_digest, from, rbo);
                else if constexpr (std::is_same_v<T, RbFetchMsg>)
                    inst.on_fetch(v.payload_digest, from, rbo);
                else inst.on_payload(v.block, from, rbo);
                drain_rb(v.index, v.slot, rbo, out);
            } else if constexpr (std::is_same_v<T, BcEstMsg> || std::is_same_v<T, BcAuxMsg> ||
                                 std::is_same_v<T, BcCoordMsg> ||
                                 std::is_same_v<T, BcDecidedMsg>) {
                if (v.slot >= cfg_.n) {
                    dropped_ += 1;
                    return;
                }
                BcOutputs bco;
                auto& inst = bc(v.index, v.slot);
                if constexpr (std::is_same_v<T, BcEstMsg>) inst.on_est(v.round, v.bit, from, bco);
                else if constexpr (std::is_same_v<T, BcAuxMsg>)
                    inst.on_aux(v.round, v.bits, from, bco);
                else if constexpr (std::is_same_v<T, BcCoordMsg>)
                    inst.on_coord(v.round, v.bit, from, bco);
                else inst.on_decided(v.bit, from, bco);
                drain_bc(v.index, v.slot, bco, out);
            } else {
                dropped_ += 1; // client traffic does not belong here
            }
        },
        m);
}

void ConsensusEngine::handle_timer(const BcTimerKey& key, EngineOutputs& out) {
    if (key.slot >= cfg_.n) return;
    BcOutputs bco;
    bc(key.index, key.slot).on_timer(key.round, bco);
    drain_bc(key.index, key.slot, bco, out);
}

void ConsensusEngine::drain_rb(uint64_t index, NodeId slot, RbOutputs& rbo, EngineOutputs& out) {
    for (auto& m : rbo.broadcasts) out.broadcasts.push_back(std::move(m));
    for (auto& [to, m] : rbo.unicasts) out.unicasts.emplace_back(to, std::move(m));
    if (rbo.delivered) on_rb_deliver(index, slot, *rbo.delivered, out);
}

void ConsensusEngine::drain_bc(uint64_t index, NodeId slot, BcOutputs& bco, EngineOutputs& out) {
    for (auto& m : bco.broadcasts) out.broadcasts.push_back(std::move(m));
    for (auto& t : bco.timers) out.timers.push_back({BcTimerKey{index, slot, t.round}, t.delay});
    if (bco.decision) on_bc_decide(index, slot, *bco.decision, out);
}

void ConsensusEngine::on_rb_deliver(uint64_t index, NodeId slot, const Block& block,
                                    EngineOutputs& out) {
    IndexState& st = index_state(index);
    if (st.blocks[slot]) return; // idempotent
    st.blocks[slot] = block;
    const BinInstance* inst = bin_instance(index, slot);
    if (!st.proposed[slot] && (!inst || !inst->decided())) {
        bc_propose(index, slot, 1, out);
    } else {
        late_deliveries_ += 1; // retained for audit; never re-opens the slot
    }
    maybe_emit(index, out);
}

void ConsensusEngine::on_bc_decide(uint64_t index, NodeId slot, uint8_t bit, EngineOutputs& out) {
    IndexState& st = index_state(index);
    if (st.dec[slot]) return;
    st.dec[slot] = bit;
    st.dec_count += 1;
    if (bit == 1 && !st.false_sweep_done) {
        st.false_sweep_done = true;
        for (NodeId j = 0; j < cfg_.n; ++j) {
            if (st.blocks[j] || st.proposed[j]) continue;
            const BinInstance* inst = bin_instance(index, j);
            if (inst && inst->decided()) continue;
            bc_propose(index, j, 0, out);
        }
    }
    maybe_emit(index, out);
}

void ConsensusEngine::maybe_emit(uint64_t index, EngineOutputs& out) {
    {
        IndexState& st = index_state(index);
        if (st.emitted || ready_.count(index)) return;
        if (st.dec_count < cfg_.n) return;
        Superblock sb;
        sb.index = index;
        for (NodeId j = 0; j < cfg_.n; ++j) {
            if (st.dec[j] == std::optional<uint8_t>(1)) {
                if (!st.blocks[j]) return; // accepted slot, payload still in flight
                sb.blocks.push_back(*st.blocks[j]);
            }
        }
        ready_.emplace(index, std::move(sb));
    }
    // Emit strictly in index order; a concluded future index waits.
    while (true) {
        auto it = ready_.find(next_emit_index_);
        if (it == ready_.end()) break;
        Superblock& sb = it->second;
        IndexState& st = index_state(next_emit_index_);
        st.emitted = true;
        out.commits.push_back({next_emit_index_, sb.encode()});
        if (st.my_block) {
            bool included =
                std::find(sb.blocks.begin(), sb.blocks.end(), *st.my_block) != sb.blocks.end();
            if (included && !block_queue_.empty() && block_queue_.front() == *st.my_block)
                block_queue_.pop_front();
            if (own_index_ == next_emit_index_) own_active_ = false;
        }
        ready_.erase(it);
        next_emit_index_ += 1;
    }
    try_start(out);
}

} // namespace sbchain
