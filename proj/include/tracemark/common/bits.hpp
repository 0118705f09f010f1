#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tracemark {

/// One element per bit, each 0 or 1. Byte conversions are MSB-first.
using Bits = std::vector<std::uint8_t>;
using Bytes = std::vector<std::uint8_t>;

Bits bytes_to_bits(std::span<const std::uint8_t> bytes);

/// Packs bits MSB-first; a trailing partial byte is zero-padded.
Bytes bits_to_bytes(std::span<const std::uint8_t> bits);

/// Appends the low `width` bits of `value`, most significant first.
void append_bits(Bits& out, std::uint64_t value, unsigned width);

/// Reads `width` bits starting at `offset`, most significant first.
std::uint64_t read_bits(std::span<const std::uint8_t> bits, std::size_t offset, unsigned width);

std::string to_hex(std::span<const std::uint8_t> bytes);

/// Accepts an optional "0x" prefix; throws ConfigurationError on odd length or bad digits.
Bytes from_hex(std::string_view hex);

} // namespace tracemark
