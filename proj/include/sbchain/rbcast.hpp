#pragma once

#include <map>
#include <set>

#include "sbchain/messages.hpp"
#include "sbchain/types.hpp"

namespace sbchain {

// Outputs of one state transition: messages to broadcast to the whole group,
// unicasts, and at most one delivery.
struct RbOutputs {
    std::vector<Msg> broadcasts;
    std::vector<std::pair<NodeId, Msg>> unicasts;
    std::optional<Block> delivered;
};

enum class RbPhase : uint8_t { Init, Echoed, Ready, Delivered };

// One byzantine reliable broadcast instance, keyed by (consensus index,
// broadcaster slot). Echo/ready thresholds are Bracha's: echo after the
// first INIT, ready after 2f+1 echoes or f+1 readies, deliver after 2f+1
// readies. ECHO/READY carry only the payload digest; a node reaching the
// delivery threshold without the payload recovers it with FETCH/PAYLOAD
// from peers that hold it.
class RbInstance {
  public:
    RbInstance() = default;
    RbInstance(ChainConfig cfg, NodeId self, uint64_t index, NodeId slot)
        : cfg_(cfg), self_(self), index_(index), slot_(slot) {}

    // Broadcaster side: emits INIT with the block to all n nodes.
    // Contract error on a duplicate broadcast or a malformed block.
    void broadcast(const Block& block, RbOutputs& out);

    void on_init(const Block& block, NodeId from, RbOutputs& out);
    void on_echo(const Digest& d, NodeId from, RbOutputs& out);
    void on_ready(const Digest& d, NodeId from, RbOutputs& out);
    void on_fetch(const Digest& d, NodeId from, RbOutputs& out);
    void on_payload(const Block& block, NodeId from, RbOutputs& out);

    RbPhase phase() const { return phase_; }
    bool delivered() const { return phase_ == RbPhase::Delivered; }
    bool equivocation_detected() const { return equivocation_; }
    uint64_t dropped_invalid() const { return dropped_invalid_; }

    size_t echo_count(const Digest& d) const {
        auto it = echo_from_.find(d);
        return it == echo_from_.end() ? 0 : it->second.size();
    }

  private:
    void maybe_ready(const Digest& d, RbOutputs& out);
    void maybe_deliver(const Digest& d, RbOutputs& out);
    void deliver(const Block& block, RbOutputs& out);

    ChainConfig cfg_;
    NodeId self_ = 0;
    uint64_t index_ = 0;
    NodeId slot_ = 0;

    RbPhase phase_ = RbPhase::Init;
    bool broadcast_done_ = false;
    bool equivocation_ = false;
    bool fetch_sent_ = false;
    uint64_t dropped_invalid_ = 0;

    std::optional<Digest> init_digest_;       // first INIT payload seen
    std::map<Digest, Block> payloads_;        // digest -> block, from INIT/PAYLOAD
    std::map<Digest, std::set<NodeId>> echo_from_;
    std::map<Digest, std::set<NodeId>> ready_from_;
};

} // namespace sbchain
