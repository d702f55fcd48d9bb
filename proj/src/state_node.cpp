#include "sbchain/state_node.hpp"

#include <algorithm>

namespace sbchain {

Bytes LogRecord::encode() const {
    ByteWriter w;
    w.u64(index);
    w.u32(slot);
    write_digest(w, block_digest);
    w.list_len(transactions.size());
    for (const auto& tx : transactions) w.bytes(tx.encode());
    w.u64(timestamp);
    return w.take();
}

std::optional<LogRecord> LogRecord::decode(ByteReader& r) {
    LogRecord rec;
    rec.index = r.u64();
    rec.slot = r.u32();
    rec.block_digest = read_digest(r);
    uint32_t count = r.list_len();
    if (!r.ok()) return std::nullopt;
    for (uint32_t i = 0; i < count; ++i) {
        Bytes tx_bytes = r.bytes();
        if (!r.ok()) return std::nullopt;
        auto tx = Transaction::decode(tx_bytes);
        if (!tx) return std::nullopt;
        rec.transactions.push_back(std::move(*tx));
    }
    rec.timestamp = r.u64();
    if (!r.ok()) return std::nullopt;
    return rec;
}

Bytes PersistedLog::serialize() const {
    ByteWriter w;
    w.list_len(records_.size());
    for (const auto& rec : records_) w.bytes(rec.encode());
    return w.take();
}

std::optional<PersistedLog> PersistedLog::deserialize(const Bytes& b) {
    ByteReader r(b);
    PersistedLog log;
    uint32_t count = r.list_len();
    if (!r.ok()) return std::nullopt;
    for (uint32_t i = 0; i < count; ++i) {
        Bytes rec_bytes = r.bytes();
        if (!r.ok()) return std::nullopt;
        ByteReader rr(rec_bytes);
        auto rec = LogRecord::decode(rr);
        if (!rec || !rr.at_end()) return std::nullopt;
        log.append(std::move(*rec));
    }
    if (!r.at_end()) return std::nullopt;
    return log;
}

static void run_builtin(const Transaction& tx, WorldState& state, const ExecutionContext& ctx,
                        uint64_t index, NodeId slot) {
    if (*tx.recipient == kMembershipAccount) {
        if (!ctx.registry) return;
        auto decoded = membership_payload::decode(tx.payload);
        if (!decoded) return;
        if (decoded->tag == membership_payload::kAddParticipants) {
            ctx.registry->add_participants(tx.sender, decoded->endpoints, decoded->member,
                                           decoded->wallets);
        } else {
            ctx.registry->rotate_vote(tx.sender, decoded->val, index);
        }
        return;
    }
    if (*tx.recipient != kShardingAccount) return;

    auto decoded = sharding_payload::decode(tx.payload);
    if (!decoded) return;
    BuiltinEvent ev;
    switch (decoded->tag) {
    case sharding_payload::kSpawn: {
        uint64_t total = 0;
        bool funded = !decoded->deposits.empty();
        std::map<AccountId, uint64_t> debits;
        for (const auto& [account, amount] : decoded->deposits) {
            debits[account] += amount;
            total += amount;
        }
        for (const auto& [account, amount] : debits)
            if (state.balance(account) < amount) funded = false;
        if (!funded) {
            ev.kind = BuiltinEvent::Kind::SpawnRejected;
        } else {
            for (const auto& [account, amount] : debits) state.debit(account, amount);
            ev.kind = BuiltinEvent::Kind::ShardSpawned;
            ev.deposits = decoded->deposits;
            ev.amount = total;
        }
        ev.shard = decoded->shard;
        break;
    }
    case sharding_payload::kWithdraw: {
        if (!state.debit(tx.sender, decoded->amount)) {
            ev.kind = BuiltinEvent::Kind::WithdrawRejected;
        } else {
            ev.kind = BuiltinEvent::Kind::Withdrawn;
            ev.ref = {0, index, slot, tx.digest()}; // src shard filled by the host
        }
        ev.shard = decoded->shard;
        ev.account = tx.sender;
        ev.amount = decoded->amount;
        break;
    }
    case sharding_payload::kCredit: {
        if (!ctx.credited_refs || ctx.credited_refs->count(decoded->ref)) {
            ev.kind = BuiltinEvent::Kind::CreditRejected;
        } else {
            ctx.credited_refs->insert(decoded->ref);
            state.credit(decoded->account, decoded->amount);
            ev.kind = BuiltinEvent::Kind::Credited;
        }
        ev.ref = decoded->ref;
        ev.shard = decoded->ref.src_shard;
        ev.account = decoded->account;
        ev.amount = decoded->amount;
        break;
    }
    default: return;
    }
    if (ctx.events) ctx.events->push_back(std::move(ev));
}

ExecOutcome apply_committed_transaction(const Transaction& tx, WorldState& state,
                                        const ChainConfig& cfg, const ExecutionContext& ctx,
                                        uint64_t index, NodeId slot) {
    ExecOutcome out = apply_transaction(tx, state, cfg);
    if (out.success() && tx.recipient) run_builtin(tx, state, ctx, index, slot);
    return out;
}

WorldState replay_log(const PersistedLog& log, const std::map<AccountId, uint64_t>& genesis,
                      const ChainConfig& cfg) {
    WorldState state(genesis);
    ValidationCounters scratch;
    CommitteeRegistry registry(kChairpersonAccount);
    std::set<sharding_payload::WithdrawRef> credited;
    ExecutionContext ctx{&registry, &credited, nullptr};
    const auto& records = log.records();
    for (size_t i = 0; i < records.size(); ++i) {
        for (const auto& tx : records[i].transactions) {
            auto verdict = lazy_validate(tx, state, cfg, scratch);
            if (!verdict.accepted)
                throw ContractError("replay: logged transaction fails lazy validation");
            apply_committed_transaction(tx, state, cfg, ctx, records[i].index, records[i].slot);
        }
        // Height advances once per superblock index, including empty ones.
        if (i + 1 == records.size() || records[i + 1].index != records[i].index)
            state.bump_height();
    }
    return state;
}

StateNode::StateNode(ChainConfig cfg, NodeId self, std::map<AccountId, uint64_t> genesis,
                     StorageMode mode)
    : cfg_(cfg), self_(self), mode_(mode), genesis_(std::move(genesis)), state_(genesis_),
      pool_(cfg.pool_capacity), registry_(kChairpersonAccount),
      last_block_digest_(genesis_digest(genesis_)) {}

Digest StateNode::genesis_digest(const std::map<AccountId, uint64_t>& genesis) {
    ByteWriter w;
    w.str("sbchain-genesis");
    w.list_len(genesis.size());
    for (const auto& [id, bal] : genesis) {
        w.u64(id);
        w.u64(bal);
    }
    return digest_of(w.data());
}

SubmitResult StateNode::submit_transaction(const Transaction& tx) {
    auto verdict = eager_validate(tx, state_, cfg_, counters_);
    if (!verdict.accepted) {
        pool_.count_drop(DropReason::Invalid);
        return {false, DropReason::Invalid, verdict.reason};
    }
    return pool_.insert(tx);
}

void StateNode::pool_unchecked(const Transaction& tx) { pool_.insert(tx); }

std::optional<Block> StateNode::build_proposal(uint64_t now) {
    auto txs = pool_.take(cfg_.proposal_threshold);
    if (!txs) return std::nullopt;
    Block b;
    b.proposer = self_;
    b.transactions = std::move(*txs);
    b.timestamp = now;
    return b;
}

bool StateNode::begin_commit(uint64_t index, const Bytes& superblock_encoding) {
    auto sb = Superblock::decode(superblock_encoding);
    if (!sb || sb->index != index || index != next_commit_index_ || !sb->well_formed(cfg_)) {
        malformed_commits_ += 1;
        return false;
    }
    next_commit_index_ += 1;
    PendingCommit pc;
    pc.index = index;
    pc.sb = std::move(*sb);
    backlog_.push_back(std::move(pc));
    return true;
}

uint64_t StateNode::pending_steps() const {
    uint64_t steps = 0;
    for (const auto& pc : backlog_) {
        if (mode_ == StorageMode::WholeSuperblock) {
            steps += 1;
        } else {
            uint64_t blocks = std::max<uint64_t>(1, pc.sb.blocks.size());
            steps += blocks - pc.next_block;
        }
    }
    return steps;
}

uint64_t StateNode::next_step_cost() const {
    if (backlog_.empty()) return 0;
    if (mode_ == StorageMode::WholeSuperblock)
        return std::max<uint64_t>(1, backlog_.front().sb.blocks.size());
    return 1;
}

StateNode::BlockResult StateNode::exec_block(uint64_t index, const Block& raw) {
    BlockResult res;
    Block b = raw;
    b.parent_digest = last_block_digest_;
    // Consecutive equal timestamps are legal; time never runs backwards.
    b.timestamp = std::max(raw.timestamp, last_timestamp_);
    b.digest = b.compute_digest();

    for (const auto& tx : b.transactions) {
        auto verdict = lazy_validate(tx, state_, cfg_, counters_);
        if (!verdict.accepted) {
            res.lazy_rejected += 1;
            continue;
        }
        ExecutionContext ctx{&registry_, &credited_refs_, &builtin_events_};
        ExecOutcome out = apply_committed_transaction(tx, state_, cfg_, ctx, index, raw.proposer);
        if (!out.executed()) {
            res.lazy_rejected += 1; // unauthorized: discarded, nothing persisted
            continue;
        }
        res.executed.push_back(tx);
    }

    last_block_digest_ = *b.digest;
    last_timestamp_ = b.timestamp;
    res.updated = std::move(b);
    return res;
}

CommitStepResult StateNode::run_step(uint64_t now) {
    (void)now;
    CommitStepResult res;
    if (backlog_.empty()) return res;
    PendingCommit& pc = backlog_.front();
    res.did_work = true;
    res.index = pc.index;

    if (mode_ == StorageMode::WholeSuperblock) {
        std::vector<Transaction> all;
        for (const Block& raw : pc.sb.blocks) {
            auto br = exec_block(pc.index, raw);
            res.lazy_rejected += br.lazy_rejected;
            all.insert(all.end(), br.executed.begin(), br.executed.end());
        }
        log_.append({pc.index, 0, pc.sb.digest(), all, last_timestamp_});
        res.executed = std::move(all);
        finish_superblock(res);
    } else if (pc.sb.blocks.empty()) {
        // Empty superblock: a marker record keeps heights aligned on replay.
        log_.append({pc.index, 0, pc.sb.digest(), {}, last_timestamp_});
        finish_superblock(res);
    } else {
        const Block& raw = pc.sb.blocks[pc.next_block];
        auto br = exec_block(pc.index, raw);
        res.lazy_rejected += br.lazy_rejected;
        log_.append({pc.index, raw.proposer, *br.updated.digest, br.executed,
                     br.updated.timestamp});
        res.executed = std::move(br.executed);
        pc.next_block += 1;
        if (pc.next_block == pc.sb.blocks.size()) finish_superblock(res);
    }
    res.steps_remaining = pending_steps();
    return res;
}

void StateNode::finish_superblock(CommitStepResult& res) {
    state_.bump_height();
    pool_.prune(state_);
    backlog_.pop_front();
    res.superblock_completed = true;
}

void StateNode::commit_superblock(const Superblock& sb, uint64_t now) {
    if (!begin_commit(sb.index, sb.encode()))
        throw ContractError("commit_superblock: rejected input");
    while (busy()) run_step(now);
}

Bytes StateNode::encode_read_value(const std::optional<Bytes>& v) {
    ByteWriter w;
    w.flag(v.has_value());
    if (v) w.bytes(*v);
    return w.take();
}

ReadRespMsg StateNode::read(const ReadReqMsg& req) const {
    ReadRespMsg resp;
    resp.request_id = req.request_id;
    resp.height = state_.height();
    resp.state_digest = state_.state_digest();
    resp.responder = self_;
    if (req.key.kind == ReadKind::Balance) {
        ByteWriter w;
        w.u64(state_.balance(req.key.account));
        resp.value = encode_read_value(w.take());
    } else {
        resp.value = encode_read_value(state_.payload_at(req.key.account, req.key.nonce));
    }
    return resp;
}

} // namespace sbchain
