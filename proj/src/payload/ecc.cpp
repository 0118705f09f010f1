#include "tracemark/payload/ecc.hpp"

#include <algorithm>

#include "tracemark/payload/reed_solomon.hpp"

namespace tracemark::payload {

namespace {

struct Block {
    std::size_t begin;
    std::size_t size;
};

std::vector<Block> blocks(std::size_t payload_length, unsigned t) {
    const std::size_t count = ecc_block_count(payload_length, t);
    std::vector<Block> out;
    std::size_t begin = 0;
    for (std::size_t b = 0; b < count; ++b) {
        const std::size_t size = payload_length / count + (b < payload_length % count ? 1 : 0);
        out.push_back({begin, size});
        begin += size;
    }
    return out;
}

} // namespace

std::size_t ecc_block_count(std::size_t payload_length, unsigned t) {
    if (t >= 255) throw Error("parity size must be below 255 symbols");
    if (payload_length == 0) return 1;
    const std::size_t room = 255 - t;
    return (payload_length + room - 1) / room;
}

std::size_t ecc_length(std::size_t payload_length, unsigned t) {
    return payload_length + static_cast<std::size_t>(t) * ecc_block_count(payload_length, t);
}

Bytes attach_ecc(std::span<const std::uint8_t> payload, unsigned t) {
    Bytes out(payload.begin(), payload.end());
    if (t == 0) return out;
    for (const Block& b : blocks(payload.size(), t)) {
        const auto parity = rs::encode(payload.subspan(b.begin, b.size), t);
        out.insert(out.end(), parity.begin(), parity.end());
    }
    return out;
}

std::optional<EccDecoded> decode_ecc(std::span<const std::uint8_t> encoded,
                                     std::size_t payload_length, unsigned t,
                                     std::span<const std::size_t> erased) {
    if (encoded.size() != ecc_length(payload_length, t)) {
        throw Error("encoded payload length does not match parity layout");
    }
    EccDecoded out;
    out.payload.assign(encoded.begin(), encoded.begin() + static_cast<std::ptrdiff_t>(payload_length));
    if (t == 0) return out;

    const auto layout = blocks(payload_length, t);
    for (std::size_t bi = 0; bi < layout.size(); ++bi) {
        const Block& b = layout[bi];
        const std::size_t parity_at = payload_length + bi * t;
        std::vector<std::uint8_t> word(encoded.begin() + static_cast<std::ptrdiff_t>(b.begin),
                                       encoded.begin() + static_cast<std::ptrdiff_t>(b.begin + b.size));
        word.insert(word.end(), encoded.begin() + static_cast<std::ptrdiff_t>(parity_at),
                    encoded.begin() + static_cast<std::ptrdiff_t>(parity_at + t));
        std::vector<std::size_t> local;
        for (std::size_t e : erased) {
            if (e >= b.begin && e < b.begin + b.size) {
                local.push_back(e - b.begin);
            } else if (e >= parity_at && e < parity_at + t) {
                local.push_back(b.size + (e - parity_at));
            }
        }
        auto decoded = rs::decode(word, t, local);
        if (!decoded) return std::nullopt;
        std::copy(decoded->message.begin(), decoded->message.end(),
                  out.payload.begin() + static_cast<std::ptrdiff_t>(b.begin));
        out.corrected_errors += decoded->errors;
        out.corrected_erasures += decoded->erasures;
    }
    return out;
}

std::vector<std::size_t> erased_symbols(std::span<const std::uint8_t> bit_erasures) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bit_erasures.size(); ++i) {
        if (bit_erasures[i] && (out.empty() || out.back() != i / 8)) out.push_back(i / 8);
    }
    return out;
}

unsigned size_parity(std::size_t touchable_count, std::size_t payload_length,
                     const std::function<bool(unsigned)>& trial) {
    const std::size_t symbols = touchable_count / 8;
    if (payload_length == 0 || symbols < payload_length) {
        throw EmbeddingCapacityError("carrier holds " + std::to_string(touchable_count) +
                                     " bits, payload needs " + std::to_string(8 * payload_length));
    }
    const std::size_t start = std::min<std::size_t>(symbols - payload_length, 254);
    for (std::size_t t = start + 1; t-- > 0;) {
        const auto tt = static_cast<unsigned>(t);
        if (8 * ecc_length(payload_length, tt) > touchable_count) continue;
        if (!trial || trial(tt)) return tt;
    }
    throw EmbeddingCapacityError("no parity size lets the payload embed");
}

} // namespace tracemark::payload
