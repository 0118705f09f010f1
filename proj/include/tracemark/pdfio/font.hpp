#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "tracemark/pdfio/file.hpp"

namespace tracemark::pdfio {

/// Simple (single-byte) font as seen by the text layer.
struct Font {
    std::string resource;
    std::optional<Ref> ref;
    std::string subtype;
    std::string base_font;
    bool embedded = false;
    bool known_widths = true;
    std::array<std::string, 256> glyph{};
    /// Advance widths in thousandths of the font size.
    std::array<double, 256> width{};
    std::array<char32_t, 256> unicode{};

    std::optional<std::uint8_t> code_for(char32_t cp) const;
    /// UTF-8 text to codes; nullopt when a character has no code in this font.
    std::optional<std::string> encode(std::string_view utf8) const;
};

Font load_font(const PdfFile& file, const std::string& resource, const Object& font_ref_or_dict);

/// Unicode value for a glyph name, 0 when unknown.
char32_t glyph_unicode(std::string_view name);
/// Standard glyph name for a code in WinAnsiEncoding, empty when unassigned.
std::string winansi_glyph(std::uint8_t code);
/// Helvetica advance width, used when a stock font carries no /Widths.
double helvetica_width(std::uint8_t code);

std::string utf8_encode(char32_t cp);
std::u32string utf8_decode(std::string_view s);

} // namespace tracemark::pdfio
