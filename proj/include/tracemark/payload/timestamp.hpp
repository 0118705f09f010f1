#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

#include "tracemark/common/bits.hpp"
#include "tracemark/common/error.hpp"

namespace tracemark::payload {

/// A timestamp component does not fit the selected encoding.
class RangeError : public Error {
public:
    RangeError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class TimestampMode { unix32, iso38, iso33 };

TimestampMode parse_timestamp_mode(std::string_view name);
std::string_view to_string(TimestampMode mode);
unsigned timestamp_bits(TimestampMode mode);

/// UTC time in ordinal-date form. second may be 60 (leap second), which only
/// the iso encodings can carry.
struct UtcTime {
    int year = 1970;
    unsigned day_of_year = 1;
    unsigned hour = 0;
    unsigned minute = 0;
    unsigned second = 0;

    bool operator==(const UtcTime&) const = default;
};

UtcTime from_sys(std::chrono::sys_seconds t);
/// A leap second maps onto the following instant.
std::chrono::sys_seconds to_sys(const UtcTime& t);

/// "YYYY-MM-DDThh:mm:ssZ"
std::string to_iso8601(const UtcTime& t);
UtcTime parse_iso8601(std::string_view text);

void append_timestamp(Bits& out, const UtcTime& t, TimestampMode mode);
UtcTime read_timestamp(std::span<const std::uint8_t> bits, std::size_t offset, TimestampMode mode);

Bits pack_timestamp(const UtcTime& t, TimestampMode mode);
UtcTime unpack_timestamp(std::span<const std::uint8_t> bits, TimestampMode mode);

} // namespace tracemark::payload
