#pragma once

#include <array>
#include <span>

#include "tracemark/common/bits.hpp"

namespace tracemark {

using Digest = std::array<std::uint8_t, 32>;

Digest hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> message);

/// Constant-time equality; lengths are not secret.
bool equal_constant_time(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

} // namespace tracemark
