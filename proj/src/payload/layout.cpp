#include "tracemark/payload/layout.hpp"

#include "tracemark/common/random.hpp"

namespace tracemark::payload {

namespace {

void check_width(std::uint64_t value, unsigned width, const char* name) {
    if (width == 0 || width > 64) throw ConfigurationError(std::string(name) + " width must be 1..64");
    if (width < 64 && (value >> width) != 0) {
        throw RangeError(name, "does not fit in " + std::to_string(width) + " bits");
    }
}

void check_length(std::span<const std::uint8_t> bytes, std::size_t expected) {
    if (bytes.size() != expected) {
        throw Error("payload has " + std::to_string(bytes.size()) + " bytes, layout expects " +
                    std::to_string(expected));
    }
}

} // namespace

Bytes encode(const LogIndependentPayload& p, const LogIndependentLayout& layout) {
    check_width(p.user_id, layout.user_id_bits, "user_id");
    check_width(p.nonce, layout.nonce_bits, "nonce");
    Bits bits;
    append_bits(bits, p.user_id, layout.user_id_bits);
    append_timestamp(bits, p.timestamp, layout.timestamp);
    append_bits(bits, p.nonce, layout.nonce_bits);
    return bits_to_bytes(bits);
}

LogIndependentPayload decode_log_independent(std::span<const std::uint8_t> bytes,
                                             const LogIndependentLayout& layout) {
    check_length(bytes, layout.byte_length());
    const Bits bits = bytes_to_bits(bytes);
    LogIndependentPayload p;
    std::size_t off = 0;
    p.user_id = read_bits(bits, off, layout.user_id_bits);
    off += layout.user_id_bits;
    p.timestamp = read_timestamp(bits, off, layout.timestamp);
    off += timestamp_bits(layout.timestamp);
    p.nonce = static_cast<std::uint8_t>(read_bits(bits, off, layout.nonce_bits));
    return p;
}

LogIndependentPayload make_log_independent(std::uint64_t user_id, const UtcTime& timestamp) {
    return {user_id, timestamp, Csprng::instance().next_u8()};
}

Bytes encode(const LogDependentPayload& p, const LogDependentLayout& layout) {
    check_width(p.download_id, layout.download_id_bits, "download_id");
    if (p.download_id == 0) throw RangeError("download_id", "must be non-zero");
    Bits bits;
    append_bits(bits, p.download_id, layout.download_id_bits);
    return bits_to_bytes(bits);
}

LogDependentPayload decode_log_dependent(std::span<const std::uint8_t> bytes,
                                         const LogDependentLayout& layout) {
    check_length(bytes, layout.byte_length());
    return {read_bits(bytes_to_bits(bytes), 0, layout.download_id_bits)};
}

} // namespace tracemark::payload
