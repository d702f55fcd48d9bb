#pragma once

#include <cstdint>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sbchain {

using Bytes = std::vector<uint8_t>;

// Thrown when an item exceeds the canonical encoding limits.
class EncodingLimitError : public std::runtime_error {
  public:
    explicit EncodingLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Hard caps baked into the canonical encoding so that length prefixes can
// never be abused by byzantine peers to allocate unbounded memory.
namespace limits {
inline constexpr size_t kMaxByteString = 1u << 24;
inline constexpr size_t kMaxListLen = 1u << 20;
} // namespace limits

// Canonical encoding layout: all integers little-endian fixed width, byte
// strings u32-length-prefixed, lists u32-count-prefixed, optionals a u8
// presence flag followed by the value. Field order is fixed per type.
class ByteWriter {
  public:
    ByteWriter() = default;

    void u8(uint8_t v) { buf_.push_back(v); }

    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }

    void raw(const uint8_t* p, size_t len) { buf_.insert(buf_.end(), p, p + len); }

    void bytes(const Bytes& b) {
        if (b.size() > limits::kMaxByteString) throw EncodingLimitError("byte string too long");
        u32(static_cast<uint32_t>(b.size()));
        raw(b.data(), b.size());
    }

    void str(std::string_view s) {
        if (s.size() > limits::kMaxByteString) throw EncodingLimitError("string too long");
        u32(static_cast<uint32_t>(s.size()));
        raw(reinterpret_cast<const uint8_t*>(s.data()), s.size());
    }

    void flag(bool b) { u8(b ? 1 : 0); }

    void list_len(size_t n) {
        if (n > limits::kMaxListLen) throw EncodingLimitError("list too long");
        u32(static_cast<uint32_t>(n));
    }

    const Bytes& data() const { return buf_; }
    Bytes take() { return std::move(buf_); }
    size_t size() const { return buf_.size(); }

  private:
    Bytes buf_;
};

// Non-throwing reader: every accessor reports failure via ok(). Decoders for
// wire data must check ok() and reject trailing garbage with at_end().
class ByteReader {
  public:
    explicit ByteReader(const Bytes& b) : p_(b.data()), end_(b.data() + b.size()) {}
    ByteReader(const uint8_t* p, size_t len) : p_(p), end_(p + len) {}

    bool ok() const { return ok_; }
    bool at_end() const { return ok_ && p_ == end_; }
    size_t remaining() const { return static_cast<size_t>(end_ - p_); }

    uint8_t u8() {
        if (!need(1)) return 0;
        return *p_++;
    }

    uint32_t u32() {
        if (!need(4)) return 0;
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(*p_++) << (8 * i);
        return v;
    }

    uint64_t u64() {
        if (!need(8)) return 0;
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(*p_++) << (8 * i);
        return v;
    }

    Bytes bytes() {
        uint32_t len = u32();
        if (len > limits::kMaxByteString) {
            ok_ = false;
            return {};
        }
        if (!need(len)) return {};
        Bytes out(p_, p_ + len);
        p_ += len;
        return out;
    }

    std::string str() {
        Bytes b = bytes();
        return std::string(b.begin(), b.end());
    }

    bool flag() {
        uint8_t v = u8();
        if (v > 1) ok_ = false;
        return v == 1;
    }

    uint32_t list_len() {
        uint32_t n = u32();
        if (n > limits::kMaxListLen) ok_ = false;
        return n;
    }

    bool raw(uint8_t* dst, size_t len) {
        if (!need(len)) return false;
        std::memcpy(dst, p_, len);
        p_ += len;
        return true;
    }

  private:
    bool need(size_t n) {
        if (!ok_ || remaining() < n) {
            ok_ = false;
            return false;
        }
        return true;
    }

    const uint8_t* p_;
    const uint8_t* end_;
    bool ok_ = true;
};

inline std::string to_hex(const uint8_t* p, size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(len * 2);
    for (size_t i = 0; i < len; ++i) {
        s.push_back(digits[p[i] >> 4]);
        s.push_back(digits[p[i] & 0xf]);
    }
    return s;
}

inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }

} // namespace sbchain
