#pragma once

#include <functional>
#include <optional>

#include "tracemark/common/bits.hpp"
#include "tracemark/common/error.hpp"

namespace tracemark::payload {

/// The carrier cannot hold the payload, whatever the parity size.
class EmbeddingCapacityError : public Error {
public:
    using Error::Error;
};

/// Splits p' into the fewest blocks whose length plus t fits RS(255).
std::size_t ecc_block_count(std::size_t payload_length, unsigned t);

/// |p''| in bytes for a given |p'| and parity size.
std::size_t ecc_length(std::size_t payload_length, unsigned t);

/// p'' = p' || ecc(p'). Parity of every block is appended after p' in block order.
Bytes attach_ecc(std::span<const std::uint8_t> payload, unsigned t);

struct EccDecoded {
    Bytes payload;
    std::size_t corrected_errors = 0;
    std::size_t corrected_erasures = 0;
};

/// Recovers p' from p''. `erased_symbols` are byte indices into p'' known to
/// be unreliable. nullopt when any block is undecodable.
std::optional<EccDecoded> decode_ecc(std::span<const std::uint8_t> encoded,
                                     std::size_t payload_length, unsigned t,
                                     std::span<const std::size_t> erased_symbols = {});

/// Byte indices of p'' touched by any flagged bit.
std::vector<std::size_t> erased_symbols(std::span<const std::uint8_t> bit_erasures);

/// Largest parity size whose p'' fits `touchable_count` embeddable bits and
/// for which `trial` (if given) succeeds, scanning downwards.
unsigned size_parity(std::size_t touchable_count, std::size_t payload_length,
                     const std::function<bool(unsigned)>& trial = {});

} // namespace tracemark::payload
