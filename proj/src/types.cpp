#include "sbchain/types.hpp"

namespace sbchain {

static void encode_tx_fields(ByteWriter& w, const Transaction& tx) {
    w.u64(tx.sender);
    w.flag(tx.recipient.has_value());
    if (tx.recipient) w.u64(*tx.recipient);
    w.u64(tx.nonce);
    w.u64(tx.amount);
    w.u64(tx.gas_limit);
    w.bytes(tx.payload);
}

Bytes Transaction::encode_unsigned() const {
    ByteWriter w;
    encode_tx_fields(w, *this);
    return w.take();
}

Bytes Transaction::encode() const {
    ByteWriter w;
    encode_tx_fields(w, *this);
    w.bytes(signature);
    return w.take();
}

std::optional<Transaction> Transaction::decode(ByteReader& r) {
    Transaction tx;
    tx.sender = r.u64();
    if (r.flag()) tx.recipient = r.u64();
    tx.nonce = r.u64();
    tx.amount = r.u64();
    tx.gas_limit = r.u64();
    tx.payload = r.bytes();
    tx.signature = r.bytes();
    if (!r.ok()) return std::nullopt;
    return tx;
}

std::optional<Transaction> Transaction::decode(const Bytes& b) {
    ByteReader r(b);
    auto tx = decode(r);
    if (!tx || !r.at_end()) return std::nullopt;
    return tx;
}

static void encode_block(ByteWriter& w, const Block& b, bool with_digest) {
    w.u32(b.proposer);
    w.u64(b.timestamp);
    w.flag(b.parent_digest.has_value());
    if (b.parent_digest) write_digest(w, *b.parent_digest);
    w.list_len(b.transactions.size());
    for (const auto& tx : b.transactions) w.bytes(tx.encode());
    w.flag(with_digest && b.digest.has_value());
    if (with_digest && b.digest) write_digest(w, *b.digest);
}

Bytes Block::encode() const {
    ByteWriter w;
    encode_block(w, *this, true);
    return w.take();
}

std::optional<Block> Block::decode(ByteReader& r) {
    Block b;
    b.proposer = r.u32();
    b.timestamp = r.u64();
    if (r.flag()) b.parent_digest = read_digest(r);
    uint32_t count = r.list_len();
    if (!r.ok()) return std::nullopt;
    b.transactions.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        Bytes tx_bytes = r.bytes();
        if (!r.ok()) return std::nullopt;
        auto tx = Transaction::decode(tx_bytes);
        if (!tx) return std::nullopt;
        b.transactions.push_back(std::move(*tx));
    }
    if (r.flag()) b.digest = read_digest(r);
    if (!r.ok()) return std::nullopt;
    return b;
}

std::optional<Block> Block::decode(const Bytes& bytes) {
    ByteReader r(bytes);
    auto b = decode(r);
    if (!b || !r.at_end()) return std::nullopt;
    return b;
}

Digest Block::compute_digest() const {
    ByteWriter w;
    encode_block(w, *this, false);
    return digest_of(w.data());
}

bool Block::well_formed(const ChainConfig& cfg) const {
    for (size_t i = 0; i < transactions.size(); ++i) {
        const auto& tx = transactions[i];
        if (tx.size() > cfg.max_tx_size) return false;
        if (i > 0) {
            const auto& prev = transactions[i - 1];
            if (prev.sender > tx.sender ||
                (prev.sender == tx.sender && prev.nonce >= tx.nonce))
                return false;
        }
    }
    return true;
}

Bytes Superblock::encode() const {
    ByteWriter w;
    w.u64(index);
    w.list_len(blocks.size());
    for (const auto& b : blocks) w.bytes(b.encode());
    return w.take();
}

std::optional<Superblock> Superblock::decode(const Bytes& bytes) {
    ByteReader r(bytes);
    Superblock sb;
    sb.index = r.u64();
    uint32_t count = r.list_len();
    if (!r.ok()) return std::nullopt;
    sb.blocks.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        Bytes block_bytes = r.bytes();
        if (!r.ok()) return std::nullopt;
        auto b = Block::decode(block_bytes);
        if (!b) return std::nullopt;
        sb.blocks.push_back(std::move(*b));
    }
    if (!r.at_end()) return std::nullopt;
    return sb;
}

bool Superblock::well_formed(const ChainConfig& cfg) const {
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].proposer >= cfg.n) return false;
        if (i > 0 && blocks[i - 1].proposer >= blocks[i].proposer) return false;
        if (!blocks[i].well_formed(cfg)) return false;
    }
    return true;
}

} // namespace sbchain
