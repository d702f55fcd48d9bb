#pragma once

#include <array>
#include <map>
#include <set>

#include "sbchain/messages.hpp"
#include "sbchain/types.hpp"

namespace sbchain {

struct BcTimerReq {
    uint32_t round = 0;
    uint64_t delay = 0; // simulator ticks
};

struct BcOutputs {
    std::vector<Msg> broadcasts;
    std::vector<BcTimerReq> timers;
    std::optional<uint8_t> decision; // set when this transition decided
};

// Deterministic byzantine binary consensus for one (index, slot) pair,
// following the weak-coordinator construction: per-round binary-value
// broadcast (re-broadcast an estimate seen from f+1 senders, accept into
// bin_values at 2f+1), an AUX exchange over bin_values, a coordinator
// tie-break message awaited until the round timer fires, and a parity-based
// decision when the collected candidate set is the singleton matching
// round mod 2.
//
// Decisions are amplified with DECIDED broadcasts: f+1 matching DECIDED
// messages adopt the decision directly (at least one is from a correct
// node), and a node keeps participating in rounds until it has seen n-f
// DECIDED for the decided bit, which guarantees every correct node can
// adopt before this one goes quiet.
class BinInstance {
  public:
    BinInstance() = default;
    BinInstance(ChainConfig cfg, NodeId self, uint64_t index, NodeId slot, uint64_t timeout_base)
        : cfg_(cfg), self_(self), index_(index), slot_(slot), timeout_base_(timeout_base) {}

    // Contract error if this node already proposed the other bit and the
    // instance is still undecided; no-op on a decided instance.
    void propose(uint8_t bit, BcOutputs& out);

    void on_est(uint32_t round, uint8_t bit, NodeId from, BcOutputs& out);
    void on_aux(uint32_t round, uint8_t bits, NodeId from, BcOutputs& out);
    void on_coord(uint32_t round, uint8_t bit, NodeId from, BcOutputs& out);
    void on_decided(uint8_t bit, NodeId from, BcOutputs& out);
    void on_timer(uint32_t round, BcOutputs& out);

    std::optional<uint8_t> decided() const { return decided_; }
    std::optional<uint8_t> proposed() const { return proposed_; }
    uint32_t round() const { return round_; }
    bool halted() const { return halted_; }
    uint64_t dropped_malformed() const { return dropped_malformed_; }

    NodeId coordinator(uint32_t round) const { return round % cfg_.n; }

  private:
    struct RoundState {
        std::array<std::set<NodeId>, 2> est_from;
        std::array<bool, 2> est_sent{};
        uint8_t bin_values = 0; // mask
        std::optional<uint8_t> coord_bit;
        bool coord_sent = false;
        bool aux_sent = false;
        bool timer_fired = false;
        std::map<NodeId, uint8_t> aux_from; // sender -> mask, first kept
        bool concluded = false;
    };

    static bool singleton(uint8_t mask) { return mask == 1 || mask == 2; }
    static uint8_t mask_bit(uint8_t mask) { return mask == 2 ? 1 : 0; }

    RoundState& round_state(uint32_t r) { return rounds_[r]; }
    void enter_round(uint32_t r, BcOutputs& out);
    void send_est(uint32_t r, uint8_t bit, BcOutputs& out);
    void eval(BcOutputs& out);
    void conclude_round(uint8_t values, BcOutputs& out);
    void decide(uint8_t bit, BcOutputs& out);
    void check_halt();

    ChainConfig cfg_;
    NodeId self_ = 0;
    uint64_t index_ = 0;
    NodeId slot_ = 0;
    uint64_t timeout_base_ = 8;

    std::optional<uint8_t> proposed_;
    std::optional<uint8_t> est_;
    uint32_t round_ = 0; // 0 = not participating yet
    std::optional<uint8_t> decided_;
    bool decided_broadcast_ = false;
    bool halted_ = false;
    uint64_t dropped_malformed_ = 0;

    std::map<uint32_t, RoundState> rounds_;
    std::array<std::set<NodeId>, 2> decided_from_;
};

} // namespace sbchain
