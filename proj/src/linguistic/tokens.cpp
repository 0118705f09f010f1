#include "tracemark/linguistic/tokens.hpp"

#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <fstream>
#include <sstream>

#include "tracemark/common/error.hpp"
#include "tracemark/common/text.hpp"

namespace tracemark::linguistic {

namespace {

std::u32string decode(const std::string& s) {
    icu::UnicodeString u = icu::UnicodeString::fromUTF8(s);
    std::u32string out(static_cast<std::size_t>(u.countChar32()), U'\0');
    UErrorCode status = U_ZERO_ERROR;
    u.toUTF32(reinterpret_cast<UChar32*>(out.data()), static_cast<int32_t>(out.size()), status);
    return out;
}

std::string encode(std::u32string_view s) {
    icu::UnicodeString u = icu::UnicodeString::fromUTF32(reinterpret_cast<const UChar32*>(s.data()),
                                                         static_cast<int32_t>(s.size()));
    std::string out;
    u.toUTF8String(out);
    return out;
}

bool is_open_quote(char32_t c) { return c == U'"' || c == U'“' || c == U'‘' || c == U'«'; }
bool is_close_quote(char32_t c) { return c == U'"' || c == U'”' || c == U'’' || c == U'»'; }

} // namespace

WordSequence tokenize(const std::vector<std::string>& words, const std::vector<std::size_t>& lines,
                      const TokenizeOptions& options) {
    if (words.size() != lines.size()) throw Error("tokenize: words and line numbers differ in length");
    WordSequence out;
    out.reserve(words.size());
    bool sentence_start = true;
    bool quoted = false;
    for (std::size_t i = 0; i < words.size(); ++i) {
        Token t;
        t.text = words[i];
        t.line = lines[i];
        const std::u32string cps = decode(words[i]);
        std::size_t b = 0, e = cps.size();
        while (b < e && !u_isalpha(static_cast<UChar32>(cps[b])) && !u_isdigit(static_cast<UChar32>(cps[b]))) ++b;
        while (e > b && !u_isalpha(static_cast<UChar32>(cps[e - 1])) && !u_isdigit(static_cast<UChar32>(cps[e - 1]))) --e;
        const std::u32string_view all(cps);
        t.prefix = encode(all.substr(0, b));
        t.core = encode(all.substr(b, e - b));
        t.suffix = encode(all.substr(e));
        t.canon = canonical(t.core);

        bool opens = false, closes = false;
        for (std::size_t k = 0; k < b; ++k) opens = opens || is_open_quote(cps[k]);
        for (std::size_t k = e; k < cps.size(); ++k) closes = closes || is_close_quote(cps[k]);

        bool digit = false;
        for (std::size_t k = b; k < e; ++k) digit = digit || u_isdigit(static_cast<UChar32>(cps[k]));
        const bool capital = b < e && u_isupper(static_cast<UChar32>(cps[b]));

        t.untouchable = t.core.empty() || digit || (capital && !sentence_start) || quoted || opens ||
                        options.stop_words.count(t.canon) != 0;
        if (opens && !closes) quoted = true;
        if (closes) quoted = false;

        sentence_start = false;
        for (std::size_t k = e; k < cps.size(); ++k) {
            if (cps[k] == U'.' || cps[k] == U'?' || cps[k] == U'!') sentence_start = true;
        }
        out.push_back(std::move(t));
    }
    return out;
}

WordSequence tokenize_text(const std::string& text, const TokenizeOptions& options) {
    std::vector<std::string> words;
    std::vector<std::size_t> lines;
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        std::istringstream ws(line);
        std::string w;
        while (ws >> w) {
            words.push_back(w);
            lines.push_back(n);
        }
        ++n;
    }
    return tokenize(words, lines, options);
}

std::vector<std::string> texts(const WordSequence& seq) {
    std::vector<std::string> out;
    out.reserve(seq.size());
    for (const Token& t : seq) out.push_back(t.text);
    return out;
}

std::set<std::string> read_stop_words(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stop-word file " + path);
    std::set<std::string> out;
    std::string w;
    while (in >> w) {
        if (w[0] == '#') {
            std::getline(in, w);
            continue;
        }
        out.insert(canonical(w));
    }
    return out;
}

} // namespace tracemark::linguistic
