#include "tracemark/common/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "tracemark/common/error.hpp"

namespace tracemark {

Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message) {
    Digest out{};
    unsigned int len = 0;
    static const std::uint8_t empty = 0;
    if (HMAC(EVP_sha256(), key.empty() ? &empty : key.data(), static_cast<int>(key.size()),
             message.empty() ? &empty : message.data(), message.size(), out.data(), &len) ==
            nullptr ||
        len != out.size()) {
        throw Error("HMAC-SHA256 failed");
    }
    return out;
}

bool equal_constant_time(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

} // namespace tracemark
