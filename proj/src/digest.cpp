#include "sbchain/digest.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace sbchain {

Digest digest_of(const uint8_t* data, size_t len) {
    Digest out;
    unsigned int out_len = 0;
    if (EVP_Digest(data, len, out.value.data(), &out_len, EVP_sha256(), nullptr) != 1 ||
        out_len != out.value.size()) {
        throw std::runtime_error("sha256 failed");
    }
    return out;
}

} // namespace sbchain
