#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sbchain/bytes.hpp"
#include "sbchain/digest.hpp"

namespace sbchain {

using AccountId = uint64_t;
using NodeId = uint32_t; // slot within one chain instance, 0..n-1

// Reserved built-in accounts, top of the id space.
inline constexpr AccountId kFeeAccount = 0xFFFF'FFFF'FFFF'0001ull;
inline constexpr AccountId kMembershipAccount = 0xFFFF'FFFF'FFFF'0002ull;
inline constexpr AccountId kShardingAccount = 0xFFFF'FFFF'FFFF'0003ull;
inline constexpr AccountId kChairpersonAccount = 0xFFFF'FFFF'FFFF'0004ull;

// Raised on contract violations (caller bugs), never on byzantine input.
class ContractError : public std::logic_error {
  public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

struct ChainConfig {
    uint32_t n = 4;                   // participants
    uint32_t f = 1;                   // byzantine bound, n > 3f
    uint32_t proposal_threshold = 5;  // transactions per proposed block
    uint32_t pool_capacity = 5000;
    uint32_t max_tx_size = 1024;       // bytes, canonical encoding
    uint64_t max_block_gas = 1u << 24; // per-transaction gas_limit cap
    uint64_t flat_gas_fee = 0;
    uint64_t intrinsic_gas = 21;
    uint32_t nonce_window = 64; // eager validation accepts nonces in [acct, acct+window)

    bool valid() const {
        return n >= 3 * f + 1 && proposal_threshold >= 1 && pool_capacity >= proposal_threshold;
    }
    // Bracha / DBFT thresholds.
    uint32_t quorum() const { return 2 * f + 1; }
    uint32_t weak_quorum() const { return f + 1; }
};

// A signed transfer or payload post. recipient is absent for payload-only
// posts (e.g. 140-char messages). The signature covers the canonical
// encoding of all prior fields (the unsigned form).
struct Transaction {
    AccountId sender = 0;
    std::optional<AccountId> recipient;
    uint64_t nonce = 0;
    uint64_t amount = 0;
    uint64_t gas_limit = 0;
    Bytes payload;
    Bytes signature;

    Bytes encode_unsigned() const;
    Bytes encode() const;
    static std::optional<Transaction> decode(ByteReader& r);
    static std::optional<Transaction> decode(const Bytes& b);

    size_t size() const { return encode().size(); }
    Digest digest() const { return digest_of(encode()); }

    bool operator==(const Transaction&) const = default;
};

// A proposer-tagged batch of transactions. parent_digest and digest are
// absent at proposal time and assigned only when the block commits.
struct Block {
    NodeId proposer = 0;
    std::vector<Transaction> transactions;
    uint64_t timestamp = 0;
    std::optional<Digest> parent_digest;
    std::optional<Digest> digest;

    Bytes encode() const;
    static std::optional<Block> decode(ByteReader& r);
    static std::optional<Block> decode(const Bytes& b);

    // Digest over the encoding with the digest field cleared; the block's
    // own digest can therefore be assigned without self-reference.
    Digest compute_digest() const;

    // Type invariants: transactions ordered by (sender, nonce), no duplicate
    // (sender, nonce) pairs, each within the size limit.
    bool well_formed(const ChainConfig& cfg) const;

    bool operator==(const Block&) const = default;
};

// The per-index consensus decision: accepted blocks in slot order.
struct Superblock {
    uint64_t index = 0;
    std::vector<Block> blocks; // ordered by proposer slot ascending

    Bytes encode() const;
    static std::optional<Superblock> decode(const Bytes& b);

    Digest digest() const { return digest_of(encode()); }

    bool well_formed(const ChainConfig& cfg) const;

    bool operator==(const Superblock&) const = default;
};

} // namespace sbchain
