#include "tracemark/payload/timestamp.hpp"

#include <cstdio>

namespace tracemark::payload {

using namespace std::chrono;

namespace {

bool leap_year(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_year(int y) { return leap_year(y) ? 366 : 365; }

void check_fields(const UtcTime& t) {
    if (t.day_of_year < 1 || t.day_of_year > days_in_year(t.year)) {
        throw RangeError("day_of_year", "out of range for year " + std::to_string(t.year));
    }
    if (t.hour > 23) throw RangeError("hour", "must be 0..23");
    if (t.minute > 59) throw RangeError("minute", "must be 0..59");
    if (t.second > 60) throw RangeError("second", "must be 0..60");
}

std::uint64_t field(std::span<const std::uint8_t> bits, std::size_t& offset, unsigned width) {
    std::uint64_t v = read_bits(bits, offset, width);
    offset += width;
    return v;
}

} // namespace

TimestampMode parse_timestamp_mode(std::string_view name) {
    if (name == "unix32") return TimestampMode::unix32;
    if (name == "iso38") return TimestampMode::iso38;
    if (name == "iso33") return TimestampMode::iso33;
    throw ConfigurationError("unknown timestamp mode '" + std::string(name) + "'");
}

std::string_view to_string(TimestampMode mode) {
    switch (mode) {
    case TimestampMode::unix32: return "unix32";
    case TimestampMode::iso38: return "iso38";
    case TimestampMode::iso33: return "iso33";
    }
    return "?";
}

unsigned timestamp_bits(TimestampMode mode) {
    switch (mode) {
    case TimestampMode::unix32: return 32;
    case TimestampMode::iso38: return 38;
    case TimestampMode::iso33: return 33;
    }
    return 0;
}

UtcTime from_sys(sys_seconds t) {
    const sys_days day = floor<days>(t);
    const year_month_day ymd{day};
    const int y = static_cast<int>(ymd.year());
    const auto jan1 = sys_days{year{y} / January / 1};
    const hh_mm_ss hms{t - day};
    UtcTime out;
    out.year = y;
    out.day_of_year = static_cast<unsigned>((day - jan1).count() + 1);
    out.hour = static_cast<unsigned>(hms.hours().count());
    out.minute = static_cast<unsigned>(hms.minutes().count());
    out.second = static_cast<unsigned>(hms.seconds().count());
    return out;
}

sys_seconds to_sys(const UtcTime& t) {
    check_fields(t);
    const sys_days jan1{year{t.year} / January / 1};
    return sys_seconds{jan1 + days{t.day_of_year - 1}} + hours{t.hour} + minutes{t.minute} +
           seconds{t.second};
}

std::string to_iso8601(const UtcTime& t) {
    check_fields(t);
    const sys_days day = sys_days{year{t.year} / January / 1} + days{t.day_of_year - 1};
    const year_month_day ymd{day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02u:%02u:%02uZ", t.year,
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), t.hour,
                  t.minute, t.second);
    return buf;
}

UtcTime parse_iso8601(std::string_view text) {
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char z = 0;
    const std::string str(text);
    if (std::sscanf(str.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%c", &y, &mo, &d, &h, &mi, &s, &z) != 7 ||
        z != 'Z' || str.size() != 20) {
        throw RangeError("timestamp", "expected YYYY-MM-DDThh:mm:ssZ, got '" + str + "'");
    }
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok()) throw RangeError("date", "invalid calendar date '" + str + "'");
    UtcTime t;
    t.year = y;
    t.day_of_year =
        static_cast<unsigned>((sys_days{ymd} - sys_days{year{y} / January / 1}).count() + 1);
    t.hour = h;
    t.minute = mi;
    t.second = s;
    check_fields(t);
    return t;
}

void append_timestamp(Bits& out, const UtcTime& t, TimestampMode mode) {
    check_fields(t);
    switch (mode) {
    case TimestampMode::unix32: {
        if (t.second == 60) throw RangeError("second", "unix32 cannot represent a leap second");
        const auto secs = to_sys(t).time_since_epoch().count();
        if (secs < 0 || secs > 0xFFFFFFFFLL) {
            throw RangeError("timestamp", "outside 1970-01-01..2106-02-07T06:28:15Z");
        }
        append_bits(out, static_cast<std::uint64_t>(secs), 32);
        return;
    }
    case TimestampMode::iso38:
        if (t.year < 0 || t.year > 4095) throw RangeError("year", "must be 0..4095");
        append_bits(out, static_cast<std::uint64_t>(t.year), 12);
        break;
    case TimestampMode::iso33:
        if (t.year < 2000 || t.year > 2099) throw RangeError("year", "must be 2000..2099");
        append_bits(out, static_cast<std::uint64_t>(t.year - 2000), 7);
        break;
    }
    append_bits(out, t.day_of_year, 9);
    append_bits(out, t.hour, 5);
    append_bits(out, t.minute, 6);
    append_bits(out, t.second, 6);
}

UtcTime read_timestamp(std::span<const std::uint8_t> bits, std::size_t offset, TimestampMode mode) {
    if (mode == TimestampMode::unix32) {
        return from_sys(sys_seconds{seconds{static_cast<std::int64_t>(read_bits(bits, offset, 32))}});
    }
    UtcTime t;
    if (mode == TimestampMode::iso38) {
        t.year = static_cast<int>(field(bits, offset, 12));
    } else {
        const auto yy = field(bits, offset, 7);
        if (yy > 99) throw RangeError("year", "two-digit year field exceeds 99");
        t.year = 2000 + static_cast<int>(yy);
    }
    t.day_of_year = static_cast<unsigned>(field(bits, offset, 9));
    t.hour = static_cast<unsigned>(field(bits, offset, 5));
    t.minute = static_cast<unsigned>(field(bits, offset, 6));
    t.second = static_cast<unsigned>(field(bits, offset, 6));
    check_fields(t);
    return t;
}

Bits pack_timestamp(const UtcTime& t, TimestampMode mode) {
    Bits out;
    append_timestamp(out, t, mode);
    return out;
}

UtcTime unpack_timestamp(std::span<const std::uint8_t> bits, TimestampMode mode) {
    if (bits.size() != timestamp_bits(mode)) {
        throw RangeError("timestamp", "expected " + std::to_string(timestamp_bits(mode)) + " bits");
    }
    return read_timestamp(bits, 0, mode);
}

} // namespace tracemark::payload
