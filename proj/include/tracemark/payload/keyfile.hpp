#pragma once

#include <filesystem>

#include "tracemark/common/bits.hpp"
#include "tracemark/common/error.hpp"

namespace tracemark::payload {

struct KeySet {
    Bytes enc;
    Bytes mac;
    Bytes graph;
};

/// Fresh 32-byte keys from the process CSPRNG.
KeySet generate_keys(std::size_t size = 32);

/// "TRACEMARK-KEYS\0\0" followed by enc, mac and graph keys, each prefixed by a
/// big-endian 16-bit length.
Bytes serialize_keys(const KeySet& keys);
KeySet parse_keys(std::span<const std::uint8_t> data);

KeySet load_keys(const std::filesystem::path& path);
void save_keys(const KeySet& keys, const std::filesystem::path& path);

} // namespace tracemark::payload
