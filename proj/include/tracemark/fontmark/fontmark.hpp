#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tracemark/common/bits.hpp"
#include "tracemark/pdfio/document.hpp"

namespace tracemark::fontmark {

class CapacityError : public Error {
public:
    using Error::Error;
};

/// The document has no embedded font to carry the mark.
class ChannelUnavailable : public Error {
public:
    using Error::Error;
};

/// The recovered code map is not one this module writes.
class TamperSuspected : public Error {
public:
    using Error::Error;
};

/// Involution over slots 0..n-1 built from transpositions (2i, 2i+1).
/// Pair 0 is always swapped; pair i + 1 is swapped when bit i of p is set.
struct Sip {
    std::vector<std::size_t> map;

    std::size_t size() const noexcept { return map.size(); }
    std::size_t operator()(std::size_t i) const { return map.at(i); }
    bool involution() const;
    bool identity() const;
};

/// Payload bits a permutation over n slots can hold.
std::size_t capacity(std::size_t n_slots);

Sip int_to_sip(std::uint64_t p, std::size_t n_slots);
std::uint64_t sip_to_int(const Sip& pi);
/// Same construction for a bit string read as a big-endian integer of `bits.size()` bits.
Sip bits_to_sip(const Bits& bits, std::size_t n_slots);
Bits sip_to_bits(const Sip& pi, std::size_t n_bits);

/// Codes with a glyph in the font, ascending. For a subset font these are the codes in use.
std::vector<std::uint8_t> slots(const pdfio::Font& f);

/// Embedded fonts of the document by resource name (first page that uses each name).
std::vector<const pdfio::Font*> embedded_fonts(const pdfio::Document& doc);

/// One patch per embedded font, each carrying the whole payload.
std::vector<pdfio::FontPatch> patches(const pdfio::Document& doc, const Bits& payload);

/// Permutation of `watermarked`'s font relative to the same resource in `reference`.
/// nullopt when the font is unmarked.
std::optional<Sip> recover(const pdfio::Document& watermarked, const pdfio::Document& reference,
                           const std::string& resource);

/// Payload of `n_bits` bits; nullopt when no font carries a mark.
std::optional<Bits> extract(const pdfio::Document& watermarked, const pdfio::Document& reference, std::size_t n_bits);

/// Text obtained by decoding every shown code through the reference fonts'
/// code-to-character tables, words joined by single spaces.
std::string copy_text(const pdfio::Document& doc, const pdfio::Document& reference);

} // namespace tracemark::fontmark
