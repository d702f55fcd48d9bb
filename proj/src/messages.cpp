#include "sbchain/messages.hpp"

namespace sbchain {

const char* to_string(MsgType t) {
    switch (t) {
    case MsgType::RbInit: return "INIT";
    case MsgType::RbEcho: return "ECHO";
    case MsgType::RbReady: return "READY";
    case MsgType::BcEst: return "EST";
    case MsgType::BcAux: return "AUX";
    case MsgType::BcCoord: return "COORD";
    case MsgType::RbFetch: return "FETCH";
    case MsgType::RbPayload: return "PAYLOAD";
    case MsgType::BcDecided: return "DECIDED";
    case MsgType::ReadReq: return "READ_REQ";
    case MsgType::ReadResp: return "READ_RESP";
    case MsgType::SubmitTx: return "SUBMIT_TX";
    }
    return "?";
}

MsgType msg_type(const Msg& m) {
    return std::visit(
        [](const auto& v) -> MsgType {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RbInitMsg>) return MsgType::RbInit;
            else if constexpr (std::is_same_v<T, RbEchoMsg>) return MsgType::RbEcho;
            else if constexpr (std::is_same_v<T, RbReadyMsg>) return MsgType::RbReady;
            else if constexpr (std::is_same_v<T, RbFetchMsg>) return MsgType::RbFetch;
            else if constexpr (std::is_same_v<T, RbPayloadMsg>) return MsgType::RbPayload;
            else if constexpr (std::is_same_v<T, BcEstMsg>) return MsgType::BcEst;
            else if constexpr (std::is_same_v<T, BcAuxMsg>) return MsgType::BcAux;
            else if constexpr (std::is_same_v<T, BcCoordMsg>) return MsgType::BcCoord;
            else if constexpr (std::is_same_v<T, BcDecidedMsg>) return MsgType::BcDecided;
            else if constexpr (std::is_same_v<T, ReadReqMsg>) return MsgType::ReadReq;
            else if constexpr (std::is_same_v<T, ReadRespMsg>) return MsgType::ReadResp;
            else return MsgType::SubmitTx;
        },
        m);
}

static void write_key(ByteWriter& w, const ReadKey& k) {
    w.u8(static_cast<uint8_t>(k.kind));
    w.u64(k.account);
    w.u64(k.nonce);
}

static std::optional<ReadKey> read_key(ByteReader& r) {
    ReadKey k;
    uint8_t kind = r.u8();
    if (kind > 1) return std::nullopt;
    k.kind = static_cast<ReadKind>(kind);
    k.account = r.u64();
    k.nonce = r.u64();
    if (!r.ok()) return std::nullopt;
    return k;
}

Bytes encode_message(const Msg& m) {
    ByteWriter w;
    w.u8(static_cast<uint8_t>(msg_type(m)));
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RbInitMsg> || std::is_same_v<T, RbPayloadMsg>) {
                w.u64(v.index);
                w.u32(v.slot);
                w.bytes(v.block.encode());
            } else if constexpr (std::is_same_v<T, RbEchoMsg> || std::is_same_v<T, RbReadyMsg> ||
                                 std::is_same_v<T, RbFetchMsg>) {
                w.u64(v.index);
                w.u32(v.slot);
                write_digest(w, v.payload_digest);
            } else if constexpr (std::is_same_v<T, BcEstMsg> || std::is_same_v<T, BcCoordMsg>) {
                w.u64(v.index);
                w.u32(v.slot);
                w.u32(v.round);
                w.u8(v.bit);
            } else if constexpr (std::is_same_v<T, BcAuxMsg>) {
                w.u64(v.index);
                w.u32(v.slot);
                w.u32(v.round);
                w.u8(v.bits);
            } else if constexpr (std::is_same_v<T, BcDecidedMsg>) {
                w.u64(v.index);
                w.u32(v.slot);
                w.u8(v.bit);
            } else if constexpr (std::is_same_v<T, ReadReqMsg>) {
                w.u64(v.request_id);
                write_key(w, v.key);
            } else if constexpr (std::is_same_v<T, ReadRespMsg>) {
                w.u64(v.request_id);
                w.u64(v.height);
                write_digest(w, v.state_digest);
                w.bytes(v.value);
                w.u32(v.responder);
            } else if constexpr (std::is_same_v<T, SubmitTxMsg>) {
                w.bytes(v.tx.encode());
            }
        },
        m);
    return w.take();
}

std::optional<Msg> decode_message(const Bytes& b) {
    ByteReader r(b);
    uint8_t tag = r.u8();
    if (!r.ok()) return std::nullopt;

    auto finish = [&](Msg m) -> std::optional<Msg> {
        if (!r.ok() || !r.at_end()) return std::nullopt;
        return m;
    };

    switch (static_cast<MsgType>(tag)) {
    case MsgType::RbInit:
    case MsgType::RbPayload: {
        uint64_t index = r.u64();
        NodeId slot = r.u32();
        Bytes block_bytes = r.bytes();
        if (!r.ok()) return std::nullopt;
        auto block = Block::decode(block_bytes);
        if (!block) return std::nullopt;
        if (tag == static_cast<uint8_t>(MsgType::RbInit))
            return finish(RbInitMsg{index, slot, std::move(*block)});
        return finish(RbPayloadMsg{index, slot, std::move(*block)});
    }
    case MsgType::RbEcho:
    case MsgType::RbReady:
    case MsgType::RbFetch: {
        uint64_t index = r.u64();
        NodeId slot = r.u32();
        Digest d = read_digest(r);
        if (tag == static_cast<uint8_t>(MsgType::RbEcho)) return finish(RbEchoMsg{index, slot, d});
        if (tag == static_cast<uint8_t>(MsgType::RbReady))
            return finish(RbReadyMsg{index, slot, d});
        return finish(RbFetchMsg{index, slot, d});
    }
    case MsgType::BcEst:
    case MsgType::BcCoord: {
        uint64_t index = r.u64();
        NodeId slot = r.u32();
        uint32_t round = r.u32();
        uint8_t bit = r.u8();
        if (bit > 1) return std::nullopt;
        if (tag == static_cast<uint8_t>(MsgType::BcEst))
            return finish(BcEstMsg{index, slot, round, bit});
        return finish(BcCoordMsg{index, slot, round, bit});
    }
    case MsgType::BcAux: {
        uint64_t index = r.u64();
        NodeId slot = r.u32();
        uint32_t round = r.u32();
        uint8_t bits = r.u8();
        if (bits == 0 || bits > 3) return std::nullopt;
        return finish(BcAuxMsg{index, slot, round, bits});
    }
    case MsgType::BcDecided: {
        uint64_t index = r.u64();
        NodeId slot = r.u32();
        uint8_t bit = r.u8();
        if (bit > 1) return std::nullopt;
        return finish(BcDecidedMsg{index, slot, bit});
    }
    case MsgType::ReadReq: {
        uint64_t request_id = r.u64();
        auto key = read_key(r);
        if (!key) return std::nullopt;
        return finish(ReadReqMsg{request_id, *key});
    }
    case MsgType::ReadResp: {
        ReadRespMsg m;
        m.request_id = r.u64();
        m.height = r.u64();
        m.state_digest = read_digest(r);
        m.value = r.bytes();
        m.responder = r.u32();
        return finish(std::move(m));
    }
    case MsgType::SubmitTx: {
        Bytes tx_bytes = r.bytes();
        if (!r.ok()) return std::nullopt;
        auto tx = Transaction::decode(tx_bytes);
        if (!tx) return std::nullopt;
        return finish(SubmitTxMsg{std::move(*tx)});
    }
    }
    return std::nullopt;
}

} // namespace sbchain
