#include "sbchain/membership.hpp"

namespace sbchain {

const char* to_string(RegistryError e) {
    switch (e) {
    case RegistryError::Unauthorized: return "Unauthorized";
    case RegistryError::BadInput: return "BadInput";
    case RegistryError::Rejected: return "Rejected";
    }
    return "?";
}

std::optional<RegistryError>
CommitteeRegistry::add_participants(AccountId caller, const std::vector<std::string>& endpoints,
                                    uint32_t member, const std::vector<AccountId>& wallets) {
    if (caller != chairperson_) return RegistryError::Unauthorized;
    if (endpoints.size() != wallets.size() || endpoints.empty()) return RegistryError::BadInput;
    if (member == 0 || member > endpoints.size()) return RegistryError::BadInput;

    committee_.clear(); // committee.length = 0 semantics: replace prior committee
    wallet_to_endpoint_.clear();
    has_called_.clear();
    tally_ = {};
    for (size_t i = 0; i < endpoints.size(); ++i) {
        committee_.push_back(endpoints[i]);
        wallet_to_endpoint_[wallets[i]] = endpoints[i];
        has_called_[endpoints[i]] = false;
    }
    member_ = member;
    return std::nullopt;
}

CommitteeRegistry::VoteResult CommitteeRegistry::rotate_vote(AccountId caller, uint8_t val,
                                                             uint64_t at_height) {
    VoteResult res;
    if (val > 9 || committee_.empty()) {
        res.error = RegistryError::Rejected;
        return res;
    }
    auto it = wallet_to_endpoint_.find(caller);
    if (it == wallet_to_endpoint_.end() || has_called_[it->second]) {
        res.error = RegistryError::Rejected;
        return res;
    }
    has_called_[it->second] = true;
    tally_[val] += 1;
    res.accepted = true;

    if (tally_[val] == threshold()) {
        uint32_t select = size() / member_;
        uint32_t option = val % select;
        std::vector<std::string> selected(committee_.begin() + option * member_,
                                          committee_.begin() + (option + 1) * member_);
        selections_.push_back({selections_.size() + 1, at_height, selected});
        res.committee = std::move(selected);
        tally_ = {};
        for (auto& [endpoint, called] : has_called_) called = false;
    }
    return res;
}

const CommitteeSelection* CommitteeRegistry::active_committee(uint64_t height) const {
    const CommitteeSelection* best = nullptr;
    for (const auto& sel : selections_) {
        if (sel.at_height + 1 <= height) best = &sel;
    }
    return best;
}

namespace membership_payload {

Bytes encode_add_participants(const std::vector<std::string>& endpoints, uint32_t member,
                              const std::vector<AccountId>& wallets) {
    ByteWriter w;
    w.u8(kAddParticipants);
    w.u32(member);
    w.list_len(endpoints.size());
    for (const auto& e : endpoints) w.str(e);
    w.list_len(wallets.size());
    for (AccountId a : wallets) w.u64(a);
    return w.take();
}

Bytes encode_rotate_vote(uint8_t val) {
    ByteWriter w;
    w.u8(kRotateVote);
    w.u8(val);
    return w.take();
}

std::optional<Decoded> decode(const Bytes& payload) {
    ByteReader r(payload);
    Decoded d;
    d.tag = r.u8();
    if (d.tag == kAddParticipants) {
        d.member = r.u32();
        uint32_t n = r.list_len();
        if (!r.ok()) return std::nullopt;
        for (uint32_t i = 0; i < n; ++i) d.endpoints.push_back(r.str());
        uint32_t m = r.list_len();
        if (!r.ok()) return std::nullopt;
        for (uint32_t i = 0; i < m; ++i) d.wallets.push_back(r.u64());
    } else if (d.tag == kRotateVote) {
        d.val = r.u8();
    } else {
        return std::nullopt;
    }
    if (!r.at_end()) return std::nullopt;
    return d;
}

} // namespace membership_payload

} // namespace sbchain
