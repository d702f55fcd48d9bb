#include "sbchain/bincon.hpp"

namespace sbchain {

void BinInstance::propose(uint8_t bit, BcOutputs& out) {
    if (bit > 1) throw ContractError("bc_propose: bit out of range");
    if (decided_) return; // absorbed
    if (proposed_) {
        if (*proposed_ != bit)
            throw ContractError("bc_propose: conflicting bits from one correct node");
        return; // idempotent
    }
    proposed_ = bit;
    est_ = bit;
    enter_round(1, out);
}

void BinInstance::enter_round(uint32_t r, BcOutputs& out) {
    round_ = r;
    out.timers.push_back(
        BcTimerReq{r, timeout_base_ << std::min<uint32_t>(r - 1, 16)});
    send_est(r, *est_, out);
    eval(out); // buffered messages for this round may already satisfy thresholds
}

void BinInstance::send_est(uint32_t r, uint8_t bit, BcOutputs& out) {
    auto& rs = round_state(r);
    if (rs.est_sent[bit]) return;
    rs.est_sent[bit] = true;
    out.broadcasts.push_back(BcEstMsg{index_, slot_, r, bit});
}

void BinInstance::on_est(uint32_t round, uint8_t bit, NodeId from, BcOutputs& out) {
    if (bit > 1 || round == 0) {
        dropped_malformed_ += 1;
        return;
    }
    round_state(round).est_from[bit].insert(from);
    if (round == round_ && !halted_) eval(out);
}

void BinInstance::on_aux(uint32_t round, uint8_t bits, NodeId from, BcOutputs& out) {
    if (bits == 0 || bits > 3 || round == 0) {
        dropped_malformed_ += 1;
        return;
    }
    round_state(round).aux_from.emplace(from, bits);
    if (round == round_ && !halted_) eval(out);
}

void BinInstance::on_coord(uint32_t round, uint8_t bit, NodeId from, BcOutputs& out) {
    if (bit > 1 || round == 0 || from != coordinator(round)) {
        dropped_malformed_ += 1;
        return;
    }
    auto& rs = round_state(round);
    if (!rs.coord_bit) rs.coord_bit = bit;
    if (round == round_ && !halted_) eval(out);
}

void BinInstance::on_timer(uint32_t round, BcOutputs& out) {
    auto& rs = round_state(round);
    rs.timer_fired = true;
    if (round == round_ && !halted_) eval(out);
}

void BinInstance::on_decided(uint8_t bit, NodeId from, BcOutputs& out) {
    if (bit > 1) {
        dropped_malformed_ += 1;
        return;
    }
    decided_from_[bit].insert(from);
    if (!decided_ && decided_from_[bit].size() >= cfg_.weak_quorum()) {
        decide(bit, out); // adoption: at least one DECIDED is from a correct node
    }
    check_halt();
}

void BinInstance::eval(BcOutputs& out) {
    if (round_ == 0 || halted_) return;
    auto& rs = round_state(round_);

    // Binary-value broadcast: echo at f+1, accept at 2f+1.
    for (uint8_t bit = 0; bit <= 1; ++bit) {
        if (rs.est_from[bit].size() >= cfg_.weak_quorum()) send_est(round_, bit, out);
        if (rs.est_from[bit].size() >= cfg_.quorum() && !(rs.bin_values & (1u << bit))) {
            rs.bin_values |= (1u << bit);
            if (self_ == coordinator(round_) && !rs.coord_sent) {
                rs.coord_sent = true;
                out.broadcasts.push_back(BcCoordMsg{index_, slot_, round_, bit});
            }
        }
    }

    // AUX: prefer the coordinator's value once it is justified by
    // bin_values; fall back to the whole bin_values set on timeout.
    if (!rs.aux_sent && rs.bin_values != 0) {
        std::optional<uint8_t> aux;
        if (rs.coord_bit && (rs.bin_values & (1u << *rs.coord_bit)))
            aux = static_cast<uint8_t>(1u << *rs.coord_bit);
        else if (rs.timer_fired)
            aux = rs.bin_values;
        if (aux) {
            rs.aux_sent = true;
            out.broadcasts.push_back(BcAuxMsg{index_, slot_, round_, *aux});
        }
    }

    // Collect n-f AUX messages whose values are all in bin_values.
    if (rs.aux_sent && !rs.concluded) {
        uint8_t union_mask = 0;
        uint32_t qualifying = 0;
        for (const auto& [sender, mask] : rs.aux_from) {
            if ((mask & ~rs.bin_values) == 0) {
                union_mask |= mask;
                qualifying += 1;
            }
        }
        if (qualifying >= cfg_.n - cfg_.f) {
            rs.concluded = true;
            conclude_round(union_mask, out);
        }
    }
}

void BinInstance::conclude_round(uint8_t values, BcOutputs& out) {
    const uint32_t r = round_;
    if (singleton(values)) {
        uint8_t b = mask_bit(values);
        est_ = b;
        if (!decided_ && b == (r % 2)) decide(b, out);
    } else {
        est_ = static_cast<uint8_t>(r % 2);
    }
    if (decided_) est_ = *decided_;
    if (halted_) return;
    enter_round(r + 1, out);
}

void BinInstance::decide(uint8_t bit, BcOutputs& out) {
    decided_ = bit;
    est_ = bit;
    out.decision = bit;
    if (!decided_broadcast_) {
        decided_broadcast_ = true;
        out.broadcasts.push_back(BcDecidedMsg{index_, slot_, bit});
    }
    check_halt();
}

void BinInstance::check_halt() {
    if (halted_ || !decided_) return;
    // Once n-f DECIDED for the bit exist, at least f+1 correct nodes have
    // broadcast it, so every correct node can adopt without our help.
    if (decided_from_[*decided_].size() >= cfg_.n - cfg_.f) halted_ = true;
}

} // namespace sbchain
