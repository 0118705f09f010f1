#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tracemark/common/bits.hpp"
#include "tracemark/common/error.hpp"

namespace tracemark::pdfio {

class PdfSyntaxError : public Error {
public:
    PdfSyntaxError(std::size_t offset, const std::string& what)
        : Error("PDF syntax error at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

struct Ref {
    std::uint32_t num = 0;
    std::uint16_t gen = 0;

    bool operator==(const Ref&) const = default;
    auto operator<=>(const Ref&) const = default;
};

/// A PDF value. Dictionaries keep key order so rewritten objects stay diffable.
class Object {
public:
    enum class Kind { null, boolean, integer, real, name, string, array, dict, ref, stream };

    Object() = default;
    static Object boolean(bool v);
    static Object integer(std::int64_t v);
    static Object real(double v);
    static Object name(std::string v);
    static Object string(std::string bytes, bool hex = false);
    static Object array(std::vector<Object> items = {});
    static Object dict();
    static Object reference(Ref r);

    Kind kind() const noexcept { return kind_; }
    bool is(Kind k) const noexcept { return kind_ == k; }
    bool is_number() const noexcept { return kind_ == Kind::integer || kind_ == Kind::real; }
    bool is_dict_like() const noexcept { return kind_ == Kind::dict || kind_ == Kind::stream; }

    bool as_bool() const;
    std::int64_t as_int() const;
    double as_number() const;
    const std::string& as_name() const;
    /// Raw bytes of a string object.
    const std::string& as_string() const;
    bool hex_string() const noexcept { return hex_; }
    const std::vector<Object>& items() const;
    std::vector<Object>& items();
    Ref as_ref() const;

    /// Dictionary (or stream dictionary) access.
    const Object* get(std::string_view key) const;
    void set(std::string key, Object value);
    void erase(std::string_view key);
    const std::vector<std::pair<std::string, Object>>& entries() const { return dict_; }

    /// Encoded stream payload, exactly as stored in the file.
    const std::string& stream_data() const;
    void set_stream(std::string data);
    void make_stream(std::string data);

private:
    Kind kind_ = Kind::null;
    bool bool_ = false;
    bool hex_ = false;
    std::int64_t int_ = 0;
    double real_ = 0;
    std::string text_;
    std::vector<Object> items_;
    std::vector<std::pair<std::string, Object>> dict_;
    Ref ref_;
};

/// Tokenizer/parser over a byte range. Also used for content streams, where
/// bare keywords come back as operators.
class Lexer {
public:
    explicit Lexer(std::string_view data, std::size_t pos = 0) : data_(data), pos_(pos) {}

    std::size_t pos() const noexcept { return pos_; }
    void seek(std::size_t pos) { pos_ = pos; }
    bool at_end();
    void skip_whitespace();

    /// Next value; keywords (operators, "obj", "stream", ...) are returned via `keyword`.
    std::optional<Object> next(std::string* keyword);
    Object parse_object();
    std::string read_keyword();

    std::string_view data() const noexcept { return data_; }

private:
    Object parse_after_token(char c);
    std::string read_literal_string();
    std::string read_hex_string();
    std::string read_name();

    std::string_view data_;
    std::size_t pos_;
};

bool is_pdf_whitespace(char c);
bool is_pdf_delimiter(char c);

std::string write_object(const Object& obj);
std::string write_number(double v);
std::string write_string(std::string_view bytes);

} // namespace tracemark::pdfio
