#pragma once

#include "sbchain/bytes.hpp"
#include "sbchain/digest.hpp"
#include "sbchain/types.hpp"

namespace sbchain {

// Pluggable signature scheme. The default is a deterministic keyed MAC so
// that simulations need no key infrastructure; a real asymmetric scheme can
// be swapped in without touching callers.
class SignatureScheme {
  public:
    virtual ~SignatureScheme() = default;
    virtual Bytes sign(AccountId account, const Bytes& message) const = 0;
    virtual bool verify(AccountId account, const Bytes& message, const Bytes& signature) const = 0;
};

// sig = SHA256(key(account) || message), key(account) = SHA256("sbchain-key" || account).
// The fixed-width key prefix keeps the MAC input unambiguous.
class MacScheme final : public SignatureScheme {
  public:
    Bytes sign(AccountId account, const Bytes& message) const override {
        Bytes input;
        Digest key = account_key(account);
        input.insert(input.end(), key.value.begin(), key.value.end());
        input.insert(input.end(), message.begin(), message.end());
        Digest mac = digest_of(input);
        return Bytes(mac.value.begin(), mac.value.end());
    }

    bool verify(AccountId account, const Bytes& message, const Bytes& signature) const override {
        return sign(account, message) == signature;
    }

    static Digest account_key(AccountId account) {
        ByteWriter w;
        w.str("sbchain-key");
        w.u64(account);
        return digest_of(w.data());
    }
};

inline const SignatureScheme& default_scheme() {
    static MacScheme scheme;
    return scheme;
}

// Convenience: fill tx.signature over the unsigned form.
inline void sign_transaction(Transaction& tx, const SignatureScheme& scheme = default_scheme()) {
    tx.signature = scheme.sign(tx.sender, tx.encode_unsigned());
}

inline bool verify_transaction(const Transaction& tx,
                               const SignatureScheme& scheme = default_scheme()) {
    return scheme.verify(tx.sender, tx.encode_unsigned(), tx.signature);
}

} // namespace sbchain
