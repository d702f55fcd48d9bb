#pragma once

#include <array>
#include <compare>
#include <cstdint>

#include "sbchain/bytes.hpp"

namespace sbchain {

// 32-byte collision-resistant digest over a canonical encoding (SHA-256).
struct Digest {
    std::array<uint8_t, 32> value{};

    auto operator<=>(const Digest&) const = default;

    std::string hex() const { return to_hex(value.data(), value.size()); }
    std::string short_hex() const { return hex().substr(0, 12); }

    bool is_zero() const {
        for (uint8_t b : value)
            if (b != 0) return false;
        return true;
    }
};

Digest digest_of(const uint8_t* data, size_t len);

inline Digest digest_of(const Bytes& b) { return digest_of(b.data(), b.size()); }

inline void write_digest(ByteWriter& w, const Digest& d) { w.raw(d.value.data(), d.value.size()); }

inline Digest read_digest(ByteReader& r) {
    Digest d;
    r.raw(d.value.data(), d.value.size());
    return d;
}

} // namespace sbchain
