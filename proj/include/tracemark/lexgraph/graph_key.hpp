#pragma once

#include <span>
#include <string_view>

#include "tracemark/common/bits.hpp"
#include "tracemark/common/error.hpp"

namespace tracemark::lexgraph {

/// Secret k_G that labels homograph edges. Never stored in graph files.
class GraphKey {
public:
    static constexpr std::size_t min_size = 16;

    explicit GraphKey(Bytes key);

    std::span<const std::uint8_t> bytes() const noexcept { return key_; }

private:
    Bytes key_;
};

/// LSB of HMAC-SHA256(k_G, canonical(x) || 0x00 || canonical(y)).
/// Ordered: label(x, y) and label(y, x) are independent bits.
unsigned label(std::string_view x, std::string_view y, const GraphKey& key);

} // namespace tracemark::lexgraph
