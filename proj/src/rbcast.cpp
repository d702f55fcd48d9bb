#include "sbchain/rbcast.hpp"

namespace sbchain {

void RbInstance::broadcast(const Block& block, RbOutputs& out) {
    if (broadcast_done_) throw ContractError("rb_broadcast: duplicate broadcast for key");
    if (self_ != slot_) throw ContractError("rb_broadcast: broadcasting into a foreign slot");
    if (block.proposer != self_ || !block.well_formed(cfg_))
        throw ContractError("rb_broadcast: block fails type invariants");
    broadcast_done_ = true;
    out.broadcasts.push_back(RbInitMsg{index_, slot_, block});
}

void RbInstance::on_init(const Block& block, NodeId from, RbOutputs& out) {
    if (from != slot_ || block.proposer != slot_ || !block.well_formed(cfg_)) {
        dropped_invalid_ += 1;
        return;
    }
    Digest d = digest_of(block.encode());
    payloads_.emplace(d, block);
    if (!init_digest_) {
        init_digest_ = d;
        if (phase_ == RbPhase::Init) phase_ = RbPhase::Echoed;
        out.broadcasts.push_back(RbEchoMsg{index_, slot_, d});
    } else if (*init_digest_ != d) {
        equivocation_ = true; // conflicting INIT payloads; never echo a second value
    }
    maybe_deliver(d, out);
}

void RbInstance::on_echo(const Digest& d, NodeId from, RbOutputs& out) {
    echo_from_[d].insert(from);
    maybe_ready(d, out);
}

void RbInstance::on_ready(const Digest& d, NodeId from, RbOutputs& out) {
    ready_from_[d].insert(from);
    maybe_ready(d, out);
    maybe_deliver(d, out);
}

void RbInstance::on_fetch(const Digest& d, NodeId from, RbOutputs& out) {
    auto it = payloads_.find(d);
    if (it != payloads_.end())
        out.unicasts.emplace_back(from, RbPayloadMsg{index_, slot_, it->second});
}

void RbInstance::on_payload(const Block& block, NodeId from, RbOutputs& out) {
    (void)from;
    if (block.proposer != slot_ || !block.well_formed(cfg_)) {
        dropped_invalid_ += 1;
        return;
    }
    Digest d = digest_of(block.encode());
    payloads_.emplace(d, block);
    maybe_deliver(d, out);
}

void RbInstance::maybe_ready(const Digest& d, RbOutputs& out) {
    if (phase_ == RbPhase::Ready || phase_ == RbPhase::Delivered) return;
    bool echo_quorum = echo_from_[d].size() >= cfg_.quorum();
    bool ready_amplify = ready_from_[d].size() >= cfg_.weak_quorum();
    if (echo_quorum || ready_amplify) {
        phase_ = RbPhase::Ready;
        out.broadcasts.push_back(RbReadyMsg{index_, slot_, d});
    }
}

void RbInstance::maybe_deliver(const Digest& d, RbOutputs& out) {
    if (phase_ == RbPhase::Delivered) return;
    if (ready_from_[d].size() < cfg_.quorum()) return;
    auto it = payloads_.find(d);
    if (it != payloads_.end()) {
        deliver(it->second, out);
    } else if (!fetch_sent_) {
        fetch_sent_ = true;
        out.broadcasts.push_back(RbFetchMsg{index_, slot_, d});
    }
}

void RbInstance::deliver(const Block& block, RbOutputs& out) {
    phase_ = RbPhase::Delivered;
    out.delivered = block;
}

} // namespace sbchain
