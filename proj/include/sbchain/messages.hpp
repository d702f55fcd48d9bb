#pragma once

#include <variant>

#include "sbchain/digest.hpp"
#include "sbchain/types.hpp"

namespace sbchain {

// Wire type tags. INIT..COORD are the fixed protocol tags; the later ones
// carry payload recovery, decision amplification and the client interface.
enum class MsgType : uint8_t {
    RbInit = 0,
    RbEcho = 1,
    RbReady = 2,
    BcEst = 3,
    BcAux = 4,
    BcCoord = 5,
    RbFetch = 6,
    RbPayload = 7,
    BcDecided = 8,
    ReadReq = 9,
    ReadResp = 10,
    SubmitTx = 11,
};

const char* to_string(MsgType t);

struct RbInitMsg {
    uint64_t index = 0;
    NodeId slot = 0; // broadcaster
    Block block;
    bool operator==(const RbInitMsg&) const = default;
};
struct RbEchoMsg {
    uint64_t index = 0;
    NodeId slot = 0;
    Digest payload_digest;
    bool operator==(const RbEchoMsg&) const = default;
};
struct RbReadyMsg {
    uint64_t index = 0;
    NodeId slot = 0;
    Digest payload_digest;
    bool operator==(const RbReadyMsg&) const = default;
};
struct RbFetchMsg {
    uint64_t index = 0;
    NodeId slot = 0;
    Digest payload_digest;
    bool operator==(const RbFetchMsg&) const = default;
};
struct RbPayloadMsg {
    uint64_t index = 0;
    NodeId slot = 0;
    Block block;
    bool operator==(const RbPayloadMsg&) const = default;
};

struct BcEstMsg {
    uint64_t index = 0;
    NodeId slot = 0;
    uint32_t round = 0;
    uint8_t bit = 0;
    bool operator==(const BcEstMsg&) const = default;
};
struct BcAuxMsg {
    uint64_t index = 0;
    NodeId slot = 0;
    uint32_t round = 0;
    uint8_t bits = 0; // mask: bit0 -> value 0, bit1 -> value 1
    bool operator==(const BcAuxMsg&) const = default;
};
struct BcCoordMsg {
    uint64_t index = 0;
    NodeId slot = 0;
    uint32_t round = 0;
    uint8_t bit = 0;
    bool operator==(const BcCoordMsg&) const = default;
};
struct BcDecidedMsg {
    uint64_t index = 0;
    NodeId slot = 0;
    uint8_t bit = 0;
    bool operator==(const BcDecidedMsg&) const = default;
};

enum class ReadKind : uint8_t { Balance = 0, Payload = 1 };

struct ReadKey {
    ReadKind kind = ReadKind::Balance;
    AccountId account = 0;
    uint64_t nonce = 0; // payload reads only
    auto operator<=>(const ReadKey&) const = default;
};

struct ReadReqMsg {
    uint64_t request_id = 0;
    ReadKey key;
    bool operator==(const ReadReqMsg&) const = default;
};

// A node's answer to a light-client read: the value plus the snapshot
// coordinates (height, state digest) the client matches on.
struct ReadRespMsg {
    uint64_t request_id = 0;
    uint64_t height = 0;
    Digest state_digest;
    Bytes value; // encoded optional: present flag + bytes
    NodeId responder = 0;
    bool operator==(const ReadRespMsg&) const = default;
};

struct SubmitTxMsg {
    Transaction tx;
    bool operator==(const SubmitTxMsg&) const = default;
};

using Msg = std::variant<RbInitMsg, RbEchoMsg, RbReadyMsg, RbFetchMsg, RbPayloadMsg, BcEstMsg,
                         BcAuxMsg, BcCoordMsg, BcDecidedMsg, ReadReqMsg, ReadRespMsg, SubmitTxMsg>;

MsgType msg_type(const Msg& m);
Bytes encode_message(const Msg& m);
std::optional<Msg> decode_message(const Bytes& b);

} // namespace sbchain
