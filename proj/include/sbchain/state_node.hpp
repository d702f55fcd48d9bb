#pragma once

#include <deque>
#include <set>

#include "sbchain/membership.hpp"
#include "sbchain/messages.hpp"
#include "sbchain/sharding.hpp"
#include "sbchain/tx_pool.hpp"
#include "sbchain/world_state.hpp"

namespace sbchain {

enum class StorageMode : uint8_t { PerBlock, WholeSuperblock };

struct LogRecord {
    uint64_t index = 0;
    NodeId slot = 0; // proposer slot; 0 for whole-superblock and empty records
    Digest block_digest;
    std::vector<Transaction> transactions; // executed (lazily valid) only
    uint64_t timestamp = 0;

    Bytes encode() const;
    static std::optional<LogRecord> decode(ByteReader& r);

    bool operator==(const LogRecord&) const = default;
};

// Append-only commit log. Replaying it from genesis reproduces the node's
// state digest.
class PersistedLog {
  public:
    void append(LogRecord rec) { records_.push_back(std::move(rec)); }
    const std::vector<LogRecord>& records() const { return records_; }
    size_t size() const { return records_.size(); }

    Bytes serialize() const; // length-prefixed records
    static std::optional<PersistedLog> deserialize(const Bytes& b);

  private:
    std::vector<LogRecord> records_;
};

// Everything a committed transaction touches beyond plain transfers:
// the membership registry, cross-shard dedup, and surfaced events.
struct ExecutionContext {
    CommitteeRegistry* registry = nullptr;
    std::set<sharding_payload::WithdrawRef>* credited_refs = nullptr;
    std::vector<BuiltinEvent>* events = nullptr;
};

// Applies one lazily-validated transaction including built-in contract
// side effects. Shared by the live commit pipeline and log replay so both
// reach the same state digest.
ExecOutcome apply_committed_transaction(const Transaction& tx, WorldState& state,
                                        const ChainConfig& cfg, const ExecutionContext& ctx,
                                        uint64_t index, NodeId slot);

// Replays a log against a genesis allocation; returns the resulting state.
WorldState replay_log(const PersistedLog& log, const std::map<AccountId, uint64_t>& genesis,
                      const ChainConfig& cfg);

struct CommitStepResult {
    bool did_work = false;
    uint64_t index = 0;
    uint64_t steps_remaining = 0;
    std::vector<Transaction> executed;
    uint64_t lazy_rejected = 0;
    bool superblock_completed = false;
};

// The SEVM-side node: transaction pool, proposal building, the superblock
// commit pipeline and the light-client read answer. Commit work is pulled
// one step at a time so the simulator can pace it: one block per step in
// PerBlock mode, the whole superblock in one step otherwise.
class StateNode {
  public:
    StateNode() = default;
    StateNode(ChainConfig cfg, NodeId self, std::map<AccountId, uint64_t> genesis,
              StorageMode mode = StorageMode::PerBlock);

    // -- client side -------------------------------------------------------
    SubmitResult submit_transaction(const Transaction& tx);
    // Adversarial path: pool without eager validation (byzantine proposers).
    void pool_unchecked(const Transaction& tx);

    // Returns a proposal when the pool holds at least proposal_threshold
    // transactions; the block carries this node's id and the given time.
    std::optional<Block> build_proposal(uint64_t now);

    // -- commit channel ----------------------------------------------------
    // Accepts the canonical superblock encoding emitted by consensus.
    // Returns false (and counts) on undecodable or out-of-order input.
    bool begin_commit(uint64_t index, const Bytes& superblock_encoding);
    bool busy() const { return !backlog_.empty(); }
    uint64_t pending_steps() const;
    // Blocks the next run_step will process (for pacing); >= 1 when busy.
    uint64_t next_step_cost() const;
    CommitStepResult run_step(uint64_t now);
    // Convenience for tests: decode-free synchronous commit.
    void commit_superblock(const Superblock& sb, uint64_t now);

    // -- reads ---------------------------------------------------------------
    ReadRespMsg read(const ReadReqMsg& req) const;

    // -- state access --------------------------------------------------------
    const WorldState& state() const { return state_; }
    const TxPool& pool() const { return pool_; }
    TxPool& pool() { return pool_; }
    const PersistedLog& log() const { return log_; }
    const ValidationCounters& counters() const { return counters_; }
    const CommitteeRegistry& registry() const { return registry_; }
    const std::map<AccountId, uint64_t>& genesis() const { return genesis_; }
    StorageMode mode() const { return mode_; }
    Digest last_block_digest() const { return last_block_digest_; }
    uint64_t last_timestamp() const { return last_timestamp_; }
    uint64_t malformed_commits() const { return malformed_commits_; }

    std::vector<BuiltinEvent> take_builtin_events() { return std::move(builtin_events_); }

    static Bytes encode_read_value(const std::optional<Bytes>& v);
    static Digest genesis_digest(const std::map<AccountId, uint64_t>& genesis);

  private:
    struct PendingCommit {
        uint64_t index = 0;
        Superblock sb;
        size_t next_block = 0;
        std::vector<Transaction> whole_executed; // whole-superblock accumulation
        uint64_t whole_last_ts = 0;
    };

    struct BlockResult {
        Block updated;
        std::vector<Transaction> executed;
        uint64_t lazy_rejected = 0;
    };
    BlockResult exec_block(uint64_t index, const Block& raw);
    void finish_superblock(CommitStepResult& res);

    ChainConfig cfg_;
    NodeId self_ = 0;
    StorageMode mode_ = StorageMode::PerBlock;
    std::map<AccountId, uint64_t> genesis_;

    WorldState state_;
    TxPool pool_;
    PersistedLog log_;
    ValidationCounters counters_;
    CommitteeRegistry registry_{kMembershipAccount};

    Digest last_block_digest_;
    uint64_t last_timestamp_ = 0;
    uint64_t next_commit_index_ = 1;
    uint64_t malformed_commits_ = 0;

    std::deque<PendingCommit> backlog_;
    std::set<sharding_payload::WithdrawRef> credited_refs_;
    std::vector<BuiltinEvent> builtin_events_;
};

} // namespace sbchain
