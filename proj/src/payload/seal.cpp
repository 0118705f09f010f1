#include "tracemark/payload/seal.hpp"

#include <algorithm>

#include "tracemark/common/crypto.hpp"

namespace tracemark::payload {

namespace {

constexpr unsigned rounds = 4;

void xor_into(Bits& target, const Bits& mask) {
    for (std::size_t i = 0; i < target.size(); ++i) target[i] ^= mask[i];
}

} // namespace

FeistelCipher::FeistelCipher(Bytes key) : key_(std::move(key)) {
    if (key_.size() < Sealer::min_key_size) {
        throw ConfigurationError("encryption key must be at least 16 bytes");
    }
}

Bits FeistelCipher::round_function(unsigned round, std::span<const std::uint8_t> half,
                                   std::size_t out_bits, std::size_t total_bits) const {
    const Bytes packed = bits_to_bytes(half);
    Bits out;
    for (std::uint32_t block = 0; out.size() < out_bits; ++block) {
        Bytes msg = {'T', 'M', 'F', static_cast<std::uint8_t>(round)};
        for (int s = 24; s >= 0; s -= 8) msg.push_back(static_cast<std::uint8_t>(total_bits >> s));
        for (int s = 24; s >= 0; s -= 8) msg.push_back(static_cast<std::uint8_t>(block >> s));
        msg.insert(msg.end(), packed.begin(), packed.end());
        const Digest d = hmac_sha256(key_, msg);
        const Bits bits = bytes_to_bits(d);
        out.insert(out.end(), bits.begin(), bits.end());
    }
    out.resize(out_bits);
    return out;
}

Bytes FeistelCipher::encrypt(std::span<const std::uint8_t> plaintext) const {
    const Bits bits = bytes_to_bits(plaintext);
    const std::size_t n = bits.size();
    Bits left(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(n / 2));
    Bits right(bits.begin() + static_cast<std::ptrdiff_t>(n / 2), bits.end());
    for (unsigned r = 0; r < rounds; ++r) {
        if (r % 2 == 0) {
            xor_into(left, round_function(r, right, left.size(), n));
        } else {
            xor_into(right, round_function(r, left, right.size(), n));
        }
    }
    left.insert(left.end(), right.begin(), right.end());
    return bits_to_bytes(left);
}

Bytes FeistelCipher::decrypt(std::span<const std::uint8_t> ciphertext) const {
    const Bits bits = bytes_to_bits(ciphertext);
    const std::size_t n = bits.size();
    Bits left(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(n / 2));
    Bits right(bits.begin() + static_cast<std::ptrdiff_t>(n / 2), bits.end());
    for (unsigned r = rounds; r-- > 0;) {
        if (r % 2 == 0) {
            xor_into(left, round_function(r, right, left.size(), n));
        } else {
            xor_into(right, round_function(r, left, right.size(), n));
        }
    }
    left.insert(left.end(), right.begin(), right.end());
    return bits_to_bytes(left);
}

Bytes SealedPayload::bytes() const {
    Bytes out = ciphertext;
    out.insert(out.end(), mac.begin(), mac.end());
    return out;
}

Sealer::Sealer(Bytes enc_key, Bytes mac_key, std::size_t mac_length)
    : mac_key_(std::move(mac_key)), mac_length_(mac_length) {
    if (enc_key == mac_key_) {
        throw ConfigurationError("encryption and MAC keys must differ");
    }
    cipher_ = std::make_shared<FeistelCipher>(std::move(enc_key));
    if (mac_key_.size() < min_key_size) throw ConfigurationError("MAC key must be at least 16 bytes");
    if (mac_length_ < 4 || mac_length_ > 32) throw ConfigurationError("MAC length must be 4..32 bytes");
}

Sealer::Sealer(std::shared_ptr<const PayloadCipher> cipher, Bytes mac_key, std::size_t mac_length)
    : cipher_(std::move(cipher)), mac_key_(std::move(mac_key)), mac_length_(mac_length) {
    if (!cipher_) throw ConfigurationError("no payload cipher");
    if (mac_key_.size() < min_key_size) throw ConfigurationError("MAC key must be at least 16 bytes");
    if (mac_length_ < 4 || mac_length_ > 32) throw ConfigurationError("MAC length must be 4..32 bytes");
}

Bytes Sealer::tag(std::span<const std::uint8_t> ciphertext) const {
    const Digest d = hmac_sha256(mac_key_, ciphertext);
    return Bytes(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mac_length_));
}

SealedPayload Sealer::seal(std::span<const std::uint8_t> plaintext) const {
    if (plaintext.empty()) throw MalformedPayload("cannot seal an empty payload");
    SealedPayload out;
    out.ciphertext = cipher_->encrypt(plaintext);
    if (out.ciphertext.size() != plaintext.size()) {
        throw ConfigurationError("payload cipher must preserve length");
    }
    out.mac = tag(out.ciphertext);
    return out;
}

bool Sealer::verify(std::span<const std::uint8_t> sealed) const {
    if (sealed.size() <= mac_length_) return false;
    const auto c = sealed.first(sealed.size() - mac_length_);
    return equal_constant_time(tag(c), sealed.last(mac_length_));
}

Bytes Sealer::open(std::span<const std::uint8_t> sealed) const {
    if (sealed.size() <= mac_length_) {
        throw MalformedPayload("sealed payload of " + std::to_string(sealed.size()) +
                               " bytes is shorter than MAC plus one byte");
    }
    if (!verify(sealed)) throw AuthenticationFailure("payload MAC mismatch");
    return cipher_->decrypt(sealed.first(sealed.size() - mac_length_));
}

SealedPayload seal(std::span<const std::uint8_t> plaintext, const Bytes& enc_key,
                   const Bytes& mac_key, std::size_t mac_length) {
    return Sealer(enc_key, mac_key, mac_length).seal(plaintext);
}

Bytes open(std::span<const std::uint8_t> sealed, const Bytes& enc_key, const Bytes& mac_key,
           std::size_t mac_length) {
    return Sealer(enc_key, mac_key, mac_length).open(sealed);
}

} // namespace tracemark::payload
