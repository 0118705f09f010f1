#include "tracemark/common/bits.hpp"

#include "tracemark/common/error.hpp"

namespace tracemark {

Bits bytes_to_bits(std::span<const std::uint8_t> bytes) {
    Bits bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t byte : bytes) {
        for (int k = 7; k >= 0; --k) {
            bits.push_back(static_cast<std::uint8_t>((byte >> k) & 1U));
        }
    }
    return bits;
}

Bytes bits_to_bytes(std::span<const std::uint8_t> bits) {
    Bytes bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0) {
            bytes[i / 8] |= static_cast<std::uint8_t>(0x80U >> (i % 8));
        }
    }
    return bytes;
}

void append_bits(Bits& out, std::uint64_t value, unsigned width) {
    for (int k = static_cast<int>(width) - 1; k >= 0; --k) {
        out.push_back(static_cast<std::uint8_t>((value >> k) & 1U));
    }
}

std::uint64_t read_bits(std::span<const std::uint8_t> bits, std::size_t offset, unsigned width) {
    if (offset + width > bits.size()) {
        throw Error("bit string too short");
    }
    std::uint64_t value = 0;
    for (unsigned k = 0; k < width; ++k) {
        value = (value << 1) | (bits[offset + k] & 1U);
    }
    return value;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0F]);
    }
    return out;
}

namespace {
int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
} // namespace

Bytes from_hex(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) {
        hex.remove_prefix(2);
    }
    if (hex.empty() || hex.size() % 2 != 0) {
        throw ConfigurationError("hex payload must have an even, non-zero number of digits");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_value(hex[i]);
        int lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw ConfigurationError("invalid hex digit in payload");
        }
        out.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
    }
    return out;
}

} // namespace tracemark
