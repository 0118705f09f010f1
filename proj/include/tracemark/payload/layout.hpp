#pragma once

#include <cstdint>

#include "tracemark/common/bits.hpp"
#include "tracemark/payload/timestamp.hpp"

namespace tracemark::payload {

struct LogIndependentLayout {
    unsigned user_id_bits = 32;
    TimestampMode timestamp = TimestampMode::unix32;
    unsigned nonce_bits = 8;

    unsigned bit_length() const { return user_id_bits + timestamp_bits(timestamp) + nonce_bits; }
    std::size_t byte_length() const { return (bit_length() + 7) / 8; }
};

/// user id, download time and a random nonce against chosen-message attacks.
struct LogIndependentPayload {
    std::uint64_t user_id = 0;
    UtcTime timestamp;
    std::uint8_t nonce = 0;

    bool operator==(const LogIndependentPayload&) const = default;
};

/// Fields MSB-first in declaration order, zero-padded to whole bytes.
Bytes encode(const LogIndependentPayload& p, const LogIndependentLayout& layout = {});
LogIndependentPayload decode_log_independent(std::span<const std::uint8_t> bytes,
                                             const LogIndependentLayout& layout = {});

/// Draws the nonce from the process CSPRNG.
LogIndependentPayload make_log_independent(std::uint64_t user_id, const UtcTime& timestamp);

struct LogDependentLayout {
    unsigned download_id_bits = 64;

    std::size_t byte_length() const { return (download_id_bits + 7) / 8; }
};

struct LogDependentPayload {
    std::uint64_t download_id = 0;

    bool operator==(const LogDependentPayload&) const = default;
};

Bytes encode(const LogDependentPayload& p, const LogDependentLayout& layout = {});
LogDependentPayload decode_log_dependent(std::span<const std::uint8_t> bytes,
                                         const LogDependentLayout& layout = {});

} // namespace tracemark::payload
