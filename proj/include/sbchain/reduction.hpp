#pragma once

#include <deque>
#include <map>

#include "sbchain/bincon.hpp"
#include "sbchain/rbcast.hpp"

namespace sbchain {

struct BcTimerKey {
    uint64_t index = 0;
    NodeId slot = 0;
    uint32_t round = 0;
    auto operator<=>(const BcTimerKey&) const = default;
};

struct EngineTimerReq {
    BcTimerKey key;
    uint64_t delay = 0;
};

// Emission onto the commit channel: the canonical superblock encoding is
// the exact boundary handed to the state node.
struct CommitRecord {
    uint64_t index = 0;
    Bytes superblock;
};

struct EngineOutputs {
    std::vector<Msg> broadcasts;
    std::vector<std::pair<NodeId, Msg>> unicasts;
    std::vector<EngineTimerReq> timers;
    std::vector<CommitRecord> commits; // in index order
};

// The multivalue consensus reduction: one reliable-broadcast instance and
// one binary consensus instance per (index, slot). A node proposes its
// queue head into the lowest index whose own slot it has not yet poisoned,
// proposes true for every slot whose block was reliably delivered, and on
// the first true decision proposes false for every still-undelivered slot.
// When all n slots have decided and every accepted slot's payload is held,
// the superblock is emitted; emissions are strictly index-ordered.
class ConsensusEngine {
  public:
    ConsensusEngine() = default;
    ConsensusEngine(ChainConfig cfg, NodeId self, uint64_t bc_timeout_base = 8)
        : cfg_(cfg), self_(self), bc_timeout_base_(bc_timeout_base) {}

    // State-node side: queue a proposal; may start a new consensus instance.
    void enqueue_block(const Block& block, EngineOutputs& out);

    void handle(const Msg& m, NodeId from, EngineOutputs& out);
    void handle_timer(const BcTimerKey& key, EngineOutputs& out);

    const std::deque<Block>& block_queue() const { return block_queue_; }
    uint64_t next_emit_index() const { return next_emit_index_; }
    bool proposal_in_flight() const { return own_active_; }
    uint64_t dropped_messages() const { return dropped_; }
    uint64_t late_deliveries() const { return late_deliveries_; }

    const BinInstance* bin_instance(uint64_t index, NodeId slot) const;
    const RbInstance* rb_instance(uint64_t index, NodeId slot) const;
    // Delivered blocks for an index (audit view).
    std::vector<std::optional<Block>> delivered_blocks(uint64_t index) const;

  private:
    struct IndexState {
        std::vector<std::optional<Block>> blocks;
        std::vector<std::optional<uint8_t>> dec;
        std::vector<bool> proposed; // slots this node bc_proposed (either bit)
        uint32_t dec_count = 0;
        bool false_sweep_done = false;
        bool emitted = false;
        std::optional<Block> my_block;
    };

    IndexState& index_state(uint64_t index);
    RbInstance& rb(uint64_t index, NodeId slot);
    BinInstance& bc(uint64_t index, NodeId slot);

    void try_start(EngineOutputs& out); // start_new_consensus
    void bc_propose(uint64_t index, NodeId slot, uint8_t bit, EngineOutputs& out);
    void on_rb_deliver(uint64_t index, NodeId slot, const Block& block, EngineOutputs& out);
    void on_bc_decide(uint64_t index, NodeId slot, uint8_t bit, EngineOutputs& out);
    void maybe_emit(uint64_t index, EngineOutputs& out);
    void drain_rb(uint64_t index, NodeId slot, RbOutputs& rbo, EngineOutputs& out);
    void drain_bc(uint64_t index, NodeId slot, BcOutputs& bco, EngineOutputs& out);

    ChainConfig cfg_;
    NodeId self_ = 0;
    uint64_t bc_timeout_base_ = 8;

    std::deque<Block> block_queue_;
    uint64_t next_emit_index_ = 1;
    uint64_t next_own_index_ = 1; // lowest index this node may still propose into
    bool own_active_ = false;
    uint64_t own_index_ = 0;
    uint64_t dropped_ = 0;
    uint64_t late_deliveries_ = 0;

    std::map<std::pair<uint64_t, NodeId>, RbInstance> rb_;
    std::map<std::pair<uint64_t, NodeId>, BinInstance> bc_;
    std::map<uint64_t, IndexState> indices_;
    std::map<uint64_t, Superblock> ready_; // concluded, awaiting ordered emission
};

} // namespace sbchain
