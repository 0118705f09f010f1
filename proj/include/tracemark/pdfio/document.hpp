#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tracemark/pdfio/content.hpp"
#include "tracemark/pdfio/file.hpp"
#include "tracemark/pdfio/font.hpp"

namespace tracemark::pdfio {

/// Default boundary between kerning and inter-word spaces: TJ adjustments
/// larger than this (in thousandths of an em) separate words.
inline constexpr double kSpaceThreshold = 200.0;

class EditError : public Error {
public:
    using Error::Error;
};

/// One element of a text-showing operator: a character code or a TJ number.
struct Atom {
    bool is_code = true;
    std::uint8_t code = 0;
    double value = 0;
};

struct ShowOp {
    std::size_t page = 0;
    std::size_t op = 0;
    std::string font;
    double font_size = 0;
    std::vector<Atom> atoms;
};

struct Word {
    std::string text;
    std::size_t page = 0;
    std::size_t line = 0;
    std::size_t show = 0;
    std::size_t atom_begin = 0;
    std::size_t atom_end = 0;
    std::string font;
    double font_size = 0;
    double x = 0;
    double y = 0;
    double x_end = 0;
    /// Advance in thousandths of the font size, in-word kerning included.
    double width = 0;
    /// Tc contribution per glyph, same unit.
    double char_spacing = 0;
};

/// Inter-word space between words `left` and `left + 1` of the same line.
struct Gap {
    std::size_t left = 0;
    double width = 0;
    /// False when the space comes from text positioning between operators.
    bool adjustable = false;
    std::size_t show = 0;
    std::size_t atom_begin = 0;
    std::size_t atom_end = 0;
};

struct Line {
    std::size_t page = 0;
    double baseline = 0;
    std::vector<std::size_t> words;
    std::vector<std::size_t> gaps;
};

struct Page {
    Ref ref;
    double media_top = 0;
    std::vector<Ref> contents;
    bool flate = false;
    std::string stream;
    std::vector<ContentOp> ops;
    std::map<std::string, Font> fonts;
};

/// Code permutation applied to one font: content bytes and the font's
/// code-to-glyph tables move together, so rendering is unchanged.
struct FontPatch {
    std::string resource;
    std::map<std::uint8_t, std::uint8_t> code_map;
};

struct Edits {
    std::map<std::size_t, std::string> replace;
    std::map<std::size_t, std::vector<std::string>> insert_after;
    std::set<std::size_t> remove;
    std::map<std::size_t, double> gap_width;
    std::set<std::size_t> remove_lines;
    std::vector<FontPatch> font_patches;
    /// Font resource name to a replacement font dictionary.
    std::map<std::string, Object> font_replacements;
    bool rejustify = false;
    bool strip_metadata = false;

    bool empty() const;
};

class Document {
public:
    static Document parse(std::string bytes, double space_threshold = kSpaceThreshold);
    static Document load(const std::string& path, double space_threshold = kSpaceThreshold);

    double space_threshold() const noexcept { return space_threshold_; }

    const std::vector<Word>& words() const noexcept { return words_; }
    const std::vector<Gap>& gaps() const noexcept { return gaps_; }
    const std::vector<Line>& lines() const noexcept { return lines_; }
    const std::vector<Page>& pages() const noexcept { return pages_; }
    const std::vector<ShowOp>& shows() const noexcept { return shows_; }
    const PdfFile& file() const noexcept { return file_; }

    const Font& font(std::size_t page, const std::string& resource) const;
    const Font& font_of(const Word& w) const { return font(w.page, w.font); }
    /// Gap index between word i and i+1, if they share a line.
    std::optional<std::size_t> gap_after(std::size_t word) const;

    /// Baseline spacing (median over consecutive lines).
    double leading() const;
    /// Advance of `text` set in the given font, thousandths of the font size.
    double measure(std::string_view text, const Font& f, double char_spacing = 0) const;
    bool encodable(std::string_view text, const Font& f) const { return f.encode(text).has_value(); }

    /// Character codes used by text in a font resource (all pages).
    std::set<std::uint8_t> used_codes(const std::string& resource) const;

    std::string write(const Edits& edits) const;
    void save(const std::string& path, const Edits& edits) const;

    nlohmann::json dump() const;

private:
    void read_pages();
    void read_text(std::size_t page_index);
    void build_lines();
    std::string page_content(std::size_t page, const Edits& edits, const std::vector<double>& gap_targets) const;

    PdfFile file_;
    std::vector<Page> pages_;
    std::vector<ShowOp> shows_;
    std::vector<Word> words_;
    std::vector<Gap> gaps_;
    std::vector<Line> lines_;
    double space_threshold_ = kSpaceThreshold;
};

/// Non-embedded Helvetica dictionary that keeps a font's current code map and widths.
Object stock_font_dict(const Font& f);

} // namespace tracemark::pdfio
