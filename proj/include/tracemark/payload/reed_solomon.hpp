#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tracemark::payload::rs {

/// GF(2^8) with primitive polynomial x^8+x^4+x^3+x^2+1 (0x11d), generator 2.
std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b);
std::uint8_t gf_div(std::uint8_t a, std::uint8_t b);
std::uint8_t gf_pow2(int exponent);

/// Parity symbols of a systematic, possibly shortened RS(n, n - nsym) code,
/// generator roots 2^0 .. 2^(nsym-1). Requires message.size() + nsym <= 255.
std::vector<std::uint8_t> encode(std::span<const std::uint8_t> message, unsigned nsym);

struct DecodeResult {
    std::vector<std::uint8_t> message;
    std::size_t errors = 0;
    std::size_t erasures = 0;
};

/// Corrects e errors and f erasures while 2e + f <= nsym. `erasures` are
/// indices into the codeword. Returns nullopt when the word is not decodable.
std::optional<DecodeResult> decode(std::span<const std::uint8_t> codeword, unsigned nsym,
                                   std::span<const std::size_t> erasures = {});

} // namespace tracemark::payload::rs
