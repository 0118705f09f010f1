#pragma once

#include <memory>

#include "tracemark/common/bits.hpp"
#include "tracemark/common/error.hpp"

namespace tracemark::payload {

/// p' failed MAC verification.
class AuthenticationFailure : public Error {
public:
    using Error::Error;
};

/// p' is too short to hold a MAC and a non-empty ciphertext.
class MalformedPayload : public Error {
public:
    using Error::Error;
};

/// Length-preserving encryption slot. The default is a keyed Feistel
/// permutation; an escrowed or asymmetric scheme can be plugged in here.
class PayloadCipher {
public:
    virtual ~PayloadCipher() = default;
    virtual Bytes encrypt(std::span<const std::uint8_t> plaintext) const = 0;
    virtual Bytes decrypt(std::span<const std::uint8_t> ciphertext) const = 0;
};

/// Four-round Feistel network over the bit string, HMAC-SHA256 round
/// functions. A pseudorandom permutation on every length >= 2 bits.
class FeistelCipher final : public PayloadCipher {
public:
    explicit FeistelCipher(Bytes key);
    Bytes encrypt(std::span<const std::uint8_t> plaintext) const override;
    Bytes decrypt(std::span<const std::uint8_t> ciphertext) const override;

private:
    Bits round_function(unsigned round, std::span<const std::uint8_t> half, std::size_t out_bits,
                        std::size_t total_bits) const;

    Bytes key_;
};

struct SealedPayload {
    Bytes ciphertext;
    Bytes mac;

    /// p' = c || phi
    Bytes bytes() const;
};

/// Encrypt-then-MAC with HMAC-SHA256 truncated to mac_length bytes.
class Sealer {
public:
    static constexpr std::size_t min_key_size = 16;

    Sealer(Bytes enc_key, Bytes mac_key, std::size_t mac_length = 8);
    Sealer(std::shared_ptr<const PayloadCipher> cipher, Bytes mac_key, std::size_t mac_length = 8);

    SealedPayload seal(std::span<const std::uint8_t> plaintext) const;

    /// Verifies the tag in constant time before decrypting.
    Bytes open(std::span<const std::uint8_t> sealed) const;

    /// MAC check only, without decryption.
    bool verify(std::span<const std::uint8_t> sealed) const;

    std::size_t mac_length() const noexcept { return mac_length_; }
    std::size_t sealed_length(std::size_t plaintext_length) const {
        return plaintext_length + mac_length_;
    }

private:
    Bytes tag(std::span<const std::uint8_t> ciphertext) const;

    std::shared_ptr<const PayloadCipher> cipher_;
    Bytes mac_key_;
    std::size_t mac_length_;
};

SealedPayload seal(std::span<const std::uint8_t> plaintext, const Bytes& enc_key,
                   const Bytes& mac_key, std::size_t mac_length = 8);
Bytes open(std::span<const std::uint8_t> sealed, const Bytes& enc_key, const Bytes& mac_key,
           std::size_t mac_length = 8);

} // namespace tracemark::payload
