#include "tracemark/pdfio/font.hpp"

#include <unicode/unistr.h>

#include <cstdlib>
#include <unordered_map>

namespace tracemark::pdfio {

namespace {

const std::unordered_map<std::string_view, char32_t>& glyph_table() {
    static const std::unordered_map<std::string_view, char32_t> table = {
        {"space", U' '},        {"exclam", U'!'},       {"quotedbl", U'"'},     {"numbersign", U'#'},
        {"dollar", U'$'},       {"percent", U'%'},      {"ampersand", U'&'},    {"quotesingle", U'\''},
        {"parenleft", U'('},    {"parenright", U')'},   {"asterisk", U'*'},     {"plus", U'+'},
        {"comma", U','},        {"hyphen", U'-'},       {"period", U'.'},       {"slash", U'/'},
        {"zero", U'0'},         {"one", U'1'},          {"two", U'2'},          {"three", U'3'},
        {"four", U'4'},         {"five", U'5'},         {"six", U'6'},          {"seven", U'7'},
        {"eight", U'8'},        {"nine", U'9'},         {"colon", U':'},        {"semicolon", U';'},
        {"less", U'<'},         {"equal", U'='},        {"greater", U'>'},      {"question", U'?'},
        {"at", U'@'},           {"bracketleft", U'['},  {"backslash", U'\\'},   {"bracketright", U']'},
        {"asciicircum", U'^'},  {"underscore", U'_'},   {"grave", U'`'},        {"braceleft", U'{'},
        {"bar", U'|'},          {"braceright", U'}'},   {"asciitilde", U'~'},   {"quoteright", U'’'},
        {"quoteleft", U'‘'}, {"quotedblleft", U'“'}, {"quotedblright", U'”'},
        {"endash", U'–'},  {"emdash", U'—'},  {"bullet", U'•'},  {"ellipsis", U'…'},
        {"fi", U'ﬁ'},      {"fl", U'ﬂ'},      {"eacute", U'é'},  {"egrave", U'è'},
        {"agrave", U'à'},  {"udieresis", U'ü'}, {"odieresis", U'ö'}, {"adieresis", U'ä'},
        {"ccedilla", U'ç'}, {"nbspace", U' '},
    };
    return table;
}

// WinAnsi assignments above 126 that differ from Latin-1.
const std::unordered_map<std::uint8_t, std::string_view>& winansi_high() {
    static const std::unordered_map<std::uint8_t, std::string_view> table = {
        {0x85, "ellipsis"},  {0x91, "quoteleft"}, {0x92, "quoteright"}, {0x93, "quotedblleft"},
        {0x94, "quotedblright"}, {0x95, "bullet"}, {0x96, "endash"}, {0x97, "emdash"},
        {0xA0, "nbspace"}, {0xE0, "agrave"}, {0xE7, "ccedilla"}, {0xE8, "egrave"}, {0xE9, "eacute"},
        {0xE4, "adieresis"}, {0xF6, "odieresis"}, {0xFC, "udieresis"},
    };
    return table;
}

constexpr double kHelvetica[] = {
    278, 278, 355, 556, 556, 889, 667, 191, 333, 333, 389, 584, 278, 333, 278, 278, 556, 556, 556,
    556, 556, 556, 556, 556, 556, 556, 278, 278, 584, 584, 584, 556, 1015, 667, 667, 722, 722, 667,
    611, 778, 722, 278, 500, 667, 556, 833, 722, 778, 667, 778, 722, 667, 611, 722, 667, 944, 667,
    667, 611, 278, 278, 278, 469, 556, 333, 556, 556, 500, 556, 556, 278, 556, 556, 222, 222, 500,
    222, 833, 556, 556, 556, 556, 333, 500, 278, 556, 500, 722, 500, 500, 500, 334, 260, 334, 584};

std::uint32_t hex_value(const std::string& bytes) {
    std::uint32_t v = 0;
    for (unsigned char c : bytes) v = (v << 8) | c;
    return v;
}

char32_t first_code_point(const std::string& utf16be) {
    if (utf16be.size() < 2) return utf16be.empty() ? 0 : static_cast<unsigned char>(utf16be[0]);
    char32_t hi = (static_cast<unsigned char>(utf16be[0]) << 8) | static_cast<unsigned char>(utf16be[1]);
    if (hi >= 0xD800 && hi < 0xDC00 && utf16be.size() >= 4) {
        char32_t lo = (static_cast<unsigned char>(utf16be[2]) << 8) | static_cast<unsigned char>(utf16be[3]);
        return 0x10000 + ((hi - 0xD800) << 10) + (lo - 0xDC00);
    }
    return hi;
}

void apply_to_unicode(const std::string& cmap, std::array<char32_t, 256>& out) {
    Lexer lx(cmap);
    std::vector<Object> operands;
    enum class Mode { none, bfchar, bfrange } mode = Mode::none;
    for (;;) {
        lx.skip_whitespace();
        if (lx.pos() >= cmap.size()) break;
        std::string kw;
        std::optional<Object> obj;
        try {
            obj = lx.next(&kw);
        } catch (const PdfSyntaxError&) {
            lx.seek(lx.pos() + 1);
            continue;
        }
        if (obj) {
            operands.push_back(std::move(*obj));
            continue;
        }
        if (kw == "beginbfchar") mode = Mode::bfchar;
        else if (kw == "beginbfrange") mode = Mode::bfrange;
        else if (kw == "endbfchar" || kw == "endbfrange") {
            if (mode == Mode::bfchar) {
                for (std::size_t i = 0; i + 1 < operands.size(); i += 2) {
                    if (!operands[i].is(Object::Kind::string) || !operands[i + 1].is(Object::Kind::string)) continue;
                    const auto code = hex_value(operands[i].as_string());
                    if (code < 256) out[code] = first_code_point(operands[i + 1].as_string());
                }
            } else if (mode == Mode::bfrange) {
                for (std::size_t i = 0; i + 2 < operands.size(); i += 3) {
                    const auto lo = hex_value(operands[i].as_string());
                    const auto hi = hex_value(operands[i + 1].as_string());
                    const Object& dst = operands[i + 2];
                    for (std::uint32_t c = lo; c <= hi && c < 256; ++c) {
                        if (dst.is(Object::Kind::string)) {
                            out[c] = first_code_point(dst.as_string()) + (c - lo);
                        } else if (dst.is(Object::Kind::array) && c - lo < dst.items().size()) {
                            out[c] = first_code_point(dst.items()[c - lo].as_string());
                        }
                    }
                }
            }
            mode = Mode::none;
        }
        operands.clear();
    }
}

} // namespace

char32_t glyph_unicode(std::string_view name) {
    if (name.size() == 1 && static_cast<unsigned char>(name[0]) < 128) return static_cast<char32_t>(name[0]);
    auto it = glyph_table().find(name);
    if (it != glyph_table().end()) return it->second;
    if (name.size() == 7 && name.substr(0, 3) == "uni") {
        return static_cast<char32_t>(std::strtoul(std::string(name.substr(3)).c_str(), nullptr, 16));
    }
    return 0;
}

std::string winansi_glyph(std::uint8_t code) {
    if (code == 32) return "space";
    if (code > 32 && code < 127) {
        for (const auto& [name, cp] : glyph_table()) {
            if (cp == code && name != "quoteright" && name != "quoteleft") return std::string(name);
        }
        return std::string(1, static_cast<char>(code));
    }
    auto it = winansi_high().find(code);
    return it == winansi_high().end() ? std::string() : std::string(it->second);
}

double helvetica_width(std::uint8_t code) {
    if (code >= 32 && code <= 126) return kHelvetica[code - 32];
    return 556;
}

std::string utf8_encode(char32_t cp) {
    std::string out;
    icu::UnicodeString(static_cast<UChar32>(cp)).toUTF8String(out);
    return out;
}

std::u32string utf8_decode(std::string_view s) {
    icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    std::u32string out(static_cast<std::size_t>(u.countChar32()), U'\0');
    UErrorCode status = U_ZERO_ERROR;
    u.toUTF32(reinterpret_cast<UChar32*>(out.data()), static_cast<int32_t>(out.size()), status);
    return out;
}

std::optional<std::uint8_t> Font::code_for(char32_t cp) const {
    for (int c = 0; c < 256; ++c) {
        if (unicode[c] == cp && !glyph[c].empty()) return static_cast<std::uint8_t>(c);
    }
    return std::nullopt;
}

std::optional<std::string> Font::encode(std::string_view utf8) const {
    std::string out;
    for (char32_t cp : utf8_decode(utf8)) {
        auto c = code_for(cp);
        if (!c) return std::nullopt;
        out.push_back(static_cast<char>(*c));
    }
    return out;
}

Font load_font(const PdfFile& file, const std::string& resource, const Object& font_obj) {
    Font f;
    f.resource = resource;
    if (font_obj.is(Object::Kind::ref)) f.ref = font_obj.as_ref();
    const Object& d = file.resolve(font_obj);
    if (!d.is_dict_like()) throw UnsupportedLayout("font resource is not a dictionary", "/" + resource);
    if (const Object* s = d.get("Subtype")) f.subtype = file.resolve(*s).as_name();
    if (const Object* b = d.get("BaseFont")) f.base_font = file.resolve(*b).as_name();
    if (f.subtype == "Type0") throw UnsupportedLayout("composite (Type0) font", "/" + resource);

    double scale = 1.0;
    if (f.subtype == "Type3") {
        f.embedded = true;
        if (const Object* m = d.get("FontMatrix")) scale = file.resolve(*m).items()[0].as_number() * 1000.0;
    } else if (const Object* fd = d.get("FontDescriptor")) {
        const Object& desc = file.resolve(*fd);
        f.embedded = desc.get("FontFile") || desc.get("FontFile2") || desc.get("FontFile3");
    }

    // Base encoding: WinAnsi for stock fonts; Type3 fonts start empty.
    std::string base = f.subtype == "Type3" ? "" : "WinAnsiEncoding";
    const Object* differences = nullptr;
    if (const Object* e = d.get("Encoding")) {
        const Object& enc = file.resolve(*e);
        if (enc.is(Object::Kind::name)) {
            base = enc.as_name();
        } else if (enc.is_dict_like()) {
            if (const Object* b = enc.get("BaseEncoding")) base = file.resolve(*b).as_name();
            if (const Object* diff = enc.get("Differences")) differences = &file.resolve(*diff);
        }
    }
    if (!base.empty()) {
        for (int c = 0; c < 256; ++c) {
            f.glyph[c] = winansi_glyph(static_cast<std::uint8_t>(c));
            if (base == "StandardEncoding") {
                if (c == 39) f.glyph[c] = "quoteright";
                if (c == 96) f.glyph[c] = "quoteleft";
                if (c > 126) f.glyph[c].clear();
            }
        }
    }
    if (differences) {
        int code = 0;
        for (const Object& item : differences->items()) {
            if (item.is_number()) {
                code = static_cast<int>(item.as_int());
            } else if (item.is(Object::Kind::name) && code >= 0 && code < 256) {
                f.glyph[code++] = item.as_name();
            }
        }
    }
    for (int c = 0; c < 256; ++c) f.unicode[c] = glyph_unicode(f.glyph[c]);
    if (const Object* tu = d.get("ToUnicode")) {
        const Object& cmap = file.resolve(*tu);
        if (cmap.is(Object::Kind::stream)) apply_to_unicode(file.decode_stream(cmap), f.unicode);
    }

    if (const Object* w = d.get("Widths")) {
        const int first = static_cast<int>(file.resolve(*d.get("FirstChar")).as_int());
        const auto& items = file.resolve(*w).items();
        for (std::size_t i = 0; i < items.size(); ++i) {
            const int c = first + static_cast<int>(i);
            if (c >= 0 && c < 256) f.width[c] = file.resolve(items[i]).as_number() * scale;
        }
    } else if (f.subtype == "Type3") {
        throw UnsupportedLayout("Type3 font without /Widths", "/" + resource);
    } else {
        const bool helvetica = f.base_font.rfind("Helvetica", 0) == 0 || f.base_font.rfind("Arial", 0) == 0;
        f.known_widths = helvetica;
        for (int c = 0; c < 256; ++c) {
            const char32_t u = f.unicode[c];
            f.width[c] = helvetica_width(u > 0 && u < 127 ? static_cast<std::uint8_t>(u) : static_cast<std::uint8_t>(c));
        }
    }
    return f;
}

} // namespace tracemark::pdfio
