#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "sbchain/bytes.hpp"
#include "sbchain/types.hpp"

namespace sbchain {

enum class RegistryError : uint8_t { Unauthorized, BadInput, Rejected };

const char* to_string(RegistryError e);

struct CommitteeSelection {
    uint64_t sequence = 0;  // selection counter
    uint64_t at_height = 0; // committed height when selected; effective from at_height + 1
    std::vector<std::string> committee;

    bool operator==(const CommitteeSelection&) const = default;
};

// Threshold-gated pseudo-random committee selection. Registered voters
// submit a seed value 0..9; once (size-1)/3 + 1 distinct voters back the
// same seed, the slice endpoints[option*member, (option+1)*member) with
// option = seed mod (size/member) is emitted and all tallies reset. When
// size is not a multiple of member, trailing endpoints are never selectable.
class CommitteeRegistry {
  public:
    CommitteeRegistry() = default;
    explicit CommitteeRegistry(AccountId chairperson) : chairperson_(chairperson) {}

    // Replaces any prior committee. Only the chairperson may call.
    std::optional<RegistryError> add_participants(AccountId caller,
                                                  const std::vector<std::string>& endpoints,
                                                  uint32_t member,
                                                  const std::vector<AccountId>& wallets);

    struct VoteResult {
        bool accepted = false;
        std::optional<RegistryError> error;
        std::optional<std::vector<std::string>> committee; // set when threshold reached
    };
    VoteResult rotate_vote(AccountId caller, uint8_t val, uint64_t at_height = 0);

    uint32_t threshold() const { return size() == 0 ? 1 : (size() - 1) / 3 + 1; }
    uint32_t size() const { return static_cast<uint32_t>(committee_.size()); }
    uint32_t member() const { return member_; }
    AccountId chairperson() const { return chairperson_; }
    const std::vector<std::string>& endpoints() const { return committee_; }
    const std::vector<CommitteeSelection>& selections() const { return selections_; }

    // Latest selection effective at the given committed height, if any.
    const CommitteeSelection* active_committee(uint64_t height) const;

    bool operator==(const CommitteeRegistry&) const = default;

  private:
    AccountId chairperson_ = 0;
    std::vector<std::string> committee_;
    std::map<AccountId, std::string> wallet_to_endpoint_;
    std::map<std::string, bool> has_called_;
    std::array<uint32_t, 10> tally_{};
    uint32_t member_ = 0;
    std::vector<CommitteeSelection> selections_;
};

// Payload encodings for the built-in membership contract account.
namespace membership_payload {
inline constexpr uint8_t kAddParticipants = 1;
inline constexpr uint8_t kRotateVote = 2;

Bytes encode_add_participants(const std::vector<std::string>& endpoints, uint32_t member,
                              const std::vector<AccountId>& wallets);
Bytes encode_rotate_vote(uint8_t val);

struct Decoded {
    uint8_t tag = 0;
    std::vector<std::string> endpoints;
    uint32_t member = 0;
    std::vector<AccountId> wallets;
    uint8_t val = 0;
};
std::optional<Decoded> decode(const Bytes& payload);
} // namespace membership_payload

} // namespace sbchain
