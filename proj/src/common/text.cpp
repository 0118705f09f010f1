#include "tracemark/common/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "tracemark/common/error.hpp"

namespace tracemark {

namespace {

const icu::Normalizer2& nfc() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status) || norm == nullptr) {
        throw Error("ICU NFC normalizer unavailable");
    }
    return *norm;
}

std::string to_utf8(const icu::UnicodeString& s) {
    std::string out;
    s.toUTF8String(out);
    return out;
}

} // namespace

std::string canonical(std::string_view utf8) {
    icu::UnicodeString s = icu::UnicodeString::fromUTF8(
        icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    s.foldCase();
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString normalized = nfc().normalize(s, status);
    if (U_FAILURE(status)) {
        throw Error("NFC normalization failed");
    }
    std::string out = to_utf8(normalized);
    for (char& c : out) {
        if (c == '_') c = ' ';
    }
    return out;
}

std::string copy_case_pattern(std::string_view original, std::string_view replacement) {
    icu::UnicodeString orig = icu::UnicodeString::fromUTF8(
        icu::StringPiece(original.data(), static_cast<int32_t>(original.size())));
    icu::UnicodeString repl = icu::UnicodeString::fromUTF8(
        icu::StringPiece(replacement.data(), static_cast<int32_t>(replacement.size())));

    int32_t letters = 0;
    int32_t upper = 0;
    for (int32_t i = 0; i < orig.length(); i = orig.moveIndex32(i, 1)) {
        UChar32 c = orig.char32At(i);
        if (u_isalpha(c)) {
            ++letters;
            if (u_isupper(c)) ++upper;
        }
    }
    repl.toLower();
    if (letters > 1 && upper == letters) {
        repl.toUpper();
    } else if (letters > 0 && u_isupper(orig.char32At(0)) && repl.length() > 0) {
        UChar32 first = repl.char32At(0);
        int32_t len = U16_LENGTH(first);
        repl.replace(0, len, icu::UnicodeString(u_toupper(first)));
    }
    return to_utf8(repl);
}

std::size_t letter_count(std::string_view utf8) {
    std::size_t n = 0;
    for (unsigned char c : utf8) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

} // namespace tracemark
