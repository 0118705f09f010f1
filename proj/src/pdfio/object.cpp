#include "tracemark/pdfio/object.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace tracemark::pdfio {

bool is_pdf_whitespace(char c) {
    return c == ' ' || c == '\n' || c == '\r' || c == '\t' || c == '\f' || c == '\0';
}

bool is_pdf_delimiter(char c) {
    switch (c) {
    case '(': case ')': case '<': case '>': case '[': case ']':
    case '{': case '}': case '/': case '%':
        return true;
    default:
        return false;
    }
}

Object Object::boolean(bool v) {
    Object o;
    o.kind_ = Kind::boolean;
    o.bool_ = v;
    return o;
}

Object Object::integer(std::int64_t v) {
    Object o;
    o.kind_ = Kind::integer;
    o.int_ = v;
    return o;
}

Object Object::real(double v) {
    Object o;
    o.kind_ = Kind::real;
    o.real_ = v;
    return o;
}

Object Object::name(std::string v) {
    Object o;
    o.kind_ = Kind::name;
    o.text_ = std::move(v);
    return o;
}

Object Object::string(std::string bytes, bool hex) {
    Object o;
    o.kind_ = Kind::string;
    o.text_ = std::move(bytes);
    o.hex_ = hex;
    return o;
}

Object Object::array(std::vector<Object> items) {
    Object o;
    o.kind_ = Kind::array;
    o.items_ = std::move(items);
    return o;
}

Object Object::dict() {
    Object o;
    o.kind_ = Kind::dict;
    return o;
}

Object Object::reference(Ref r) {
    Object o;
    o.kind_ = Kind::ref;
    o.ref_ = r;
    return o;
}

bool Object::as_bool() const {
    if (kind_ != Kind::boolean) throw Error("PDF object is not a boolean");
    return bool_;
}

std::int64_t Object::as_int() const {
    if (kind_ == Kind::integer) return int_;
    if (kind_ == Kind::real) return static_cast<std::int64_t>(std::llround(real_));
    throw Error("PDF object is not a number");
}

double Object::as_number() const {
    if (kind_ == Kind::integer) return static_cast<double>(int_);
    if (kind_ == Kind::real) return real_;
    throw Error("PDF object is not a number");
}

const std::string& Object::as_name() const {
    if (kind_ != Kind::name) throw Error("PDF object is not a name");
    return text_;
}

const std::string& Object::as_string() const {
    if (kind_ != Kind::string) throw Error("PDF object is not a string");
    return text_;
}

const std::vector<Object>& Object::items() const {
    if (kind_ != Kind::array) throw Error("PDF object is not an array");
    return items_;
}

std::vector<Object>& Object::items() {
    if (kind_ != Kind::array) throw Error("PDF object is not an array");
    return items_;
}

Ref Object::as_ref() const {
    if (kind_ != Kind::ref) throw Error("PDF object is not a reference");
    return ref_;
}

const Object* Object::get(std::string_view key) const {
    if (!is_dict_like()) return nullptr;
    for (const auto& [k, v] : dict_) {
        if (k == key) return &v;
    }
    return nullptr;
}

void Object::set(std::string key, Object value) {
    if (!is_dict_like()) throw Error("PDF object is not a dictionary");
    for (auto& [k, v] : dict_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    dict_.emplace_back(std::move(key), std::move(value));
}

void Object::erase(std::string_view key) {
    std::erase_if(dict_, [&](const auto& kv) { return kv.first == key; });
}

const std::string& Object::stream_data() const {
    if (kind_ != Kind::stream) throw Error("PDF object is not a stream");
    return text_;
}

void Object::set_stream(std::string data) {
    if (kind_ != Kind::stream) throw Error("PDF object is not a stream");
    text_ = std::move(data);
    set("Length", integer(static_cast<std::int64_t>(text_.size())));
}

void Object::make_stream(std::string data) {
    if (kind_ != Kind::dict && kind_ != Kind::stream) throw Error("stream needs a dictionary");
    kind_ = Kind::stream;
    set_stream(std::move(data));
}

bool Lexer::at_end() {
    skip_whitespace();
    return pos_ >= data_.size();
}

void Lexer::skip_whitespace() {
    while (pos_ < data_.size()) {
        const char c = data_[pos_];
        if (is_pdf_whitespace(c)) {
            ++pos_;
        } else if (c == '%') {
            while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r') ++pos_;
        } else {
            break;
        }
    }
}

std::string Lexer::read_keyword() {
    skip_whitespace();
    const std::size_t start = pos_;
    while (pos_ < data_.size() && !is_pdf_whitespace(data_[pos_]) && !is_pdf_delimiter(data_[pos_])) {
        ++pos_;
    }
    return std::string(data_.substr(start, pos_ - start));
}

std::string Lexer::read_literal_string() {
    // Opening parenthesis already consumed.
    std::string out;
    int depth = 1;
    while (pos_ < data_.size()) {
        char c = data_[pos_++];
        if (c == '\\') {
            if (pos_ >= data_.size()) break;
            char e = data_[pos_++];
            switch (e) {
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            case 't': out.push_back('\t'); break;
            case 'b': out.push_back('\b'); break;
            case 'f': out.push_back('\f'); break;
            case '\r':
                if (pos_ < data_.size() && data_[pos_] == '\n') ++pos_;
                break;
            case '\n': break;
            default:
                if (e >= '0' && e <= '7') {
                    int v = e - '0';
                    for (int k = 0; k < 2 && pos_ < data_.size() && data_[pos_] >= '0' && data_[pos_] <= '7'; ++k) {
                        v = v * 8 + (data_[pos_++] - '0');
                    }
                    out.push_back(static_cast<char>(v & 0xFF));
                } else {
                    out.push_back(e);
                }
            }
            continue;
        }
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            if (--depth == 0) return out;
        }
        out.push_back(c);
    }
    throw PdfSyntaxError(pos_, "unterminated string");
}

std::string Lexer::read_hex_string() {
    std::string out;
    int pending = -1;
    while (pos_ < data_.size()) {
        const char c = data_[pos_++];
        if (c == '>') {
            if (pending >= 0) out.push_back(static_cast<char>(pending << 4));
            return out;
        }
        if (is_pdf_whitespace(c)) continue;
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw PdfSyntaxError(pos_ - 1, "bad hex digit");
        if (pending < 0) {
            pending = v;
        } else {
            out.push_back(static_cast<char>((pending << 4) | v));
            pending = -1;
        }
    }
    throw PdfSyntaxError(pos_, "unterminated hex string");
}

std::string Lexer::read_name() {
    // Slash already consumed.
    std::string out;
    while (pos_ < data_.size() && !is_pdf_whitespace(data_[pos_]) && !is_pdf_delimiter(data_[pos_])) {
        char c = data_[pos_++];
        if (c == '#' && pos_ + 1 < data_.size()) {
            out.push_back(static_cast<char>(std::strtol(std::string(data_.substr(pos_, 2)).c_str(), nullptr, 16)));
            pos_ += 2;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

namespace {

bool looks_numeric(std::string_view s) {
    if (s.empty()) return false;
    bool digit = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c >= '0' && c <= '9') {
            digit = true;
        } else if ((c == '+' || c == '-') && i == 0) {
        } else if (c != '.') {
            return false;
        }
    }
    return digit;
}

bool is_integer_text(std::string_view s) { return s.find('.') == std::string_view::npos; }

} // namespace

std::optional<Object> Lexer::next(std::string* keyword) {
    skip_whitespace();
    if (pos_ >= data_.size()) return std::nullopt;
    const char c = data_[pos_];
    if (c == '/' || c == '(' || c == '<' || c == '[') {
        ++pos_;
        return parse_after_token(c);
    }
    if (c == ']' || c == '>' || c == ')' || c == '{' || c == '}') {
        throw PdfSyntaxError(pos_, std::string("unexpected '") + c + "'");
    }
    const std::size_t start = pos_;
    std::string word = read_keyword();
    if (word.empty()) throw PdfSyntaxError(start, "empty token");
    if (looks_numeric(word)) {
        if (is_integer_text(word)) {
            // Possible "num gen R".
            const std::size_t after = pos_;
            skip_whitespace();
            const std::size_t gen_start = pos_;
            std::string gen = read_keyword();
            if (looks_numeric(gen) && is_integer_text(gen)) {
                skip_whitespace();
                if (pos_ < data_.size() && data_[pos_] == 'R' &&
                    (pos_ + 1 >= data_.size() || is_pdf_whitespace(data_[pos_ + 1]) ||
                     is_pdf_delimiter(data_[pos_ + 1]))) {
                    ++pos_;
                    return Object::reference({static_cast<std::uint32_t>(std::stoul(word)),
                                              static_cast<std::uint16_t>(std::stoul(gen))});
                }
            }
            (void)gen_start;
            pos_ = after;
            return Object::integer(std::stoll(word));
        }
        return Object::real(std::strtod(word.c_str(), nullptr));
    }
    if (word == "true") return Object::boolean(true);
    if (word == "false") return Object::boolean(false);
    if (word == "null") return Object();
    if (keyword == nullptr) throw PdfSyntaxError(start, "unexpected keyword '" + word + "'");
    *keyword = std::move(word);
    return std::nullopt;
}

Object Lexer::parse_after_token(char c) {
    switch (c) {
    case '/':
        return Object::name(read_name());
    case '(':
        return Object::string(read_literal_string(), false);
    case '[': {
        Object arr = Object::array();
        for (;;) {
            skip_whitespace();
            if (pos_ >= data_.size()) throw PdfSyntaxError(pos_, "unterminated array");
            if (data_[pos_] == ']') {
                ++pos_;
                return arr;
            }
            arr.items().push_back(parse_object());
        }
    }
    case '<':
        if (pos_ < data_.size() && data_[pos_] == '<') {
            ++pos_;
            Object d = Object::dict();
            for (;;) {
                skip_whitespace();
                if (pos_ + 1 < data_.size() && data_[pos_] == '>' && data_[pos_ + 1] == '>') {
                    pos_ += 2;
                    return d;
                }
                if (pos_ >= data_.size() || data_[pos_] != '/') {
                    throw PdfSyntaxError(pos_, "dictionary key must be a name");
                }
                ++pos_;
                std::string key = read_name();
                d.set(std::move(key), parse_object());
            }
        }
        return Object::string(read_hex_string(), true);
    default:
        throw PdfSyntaxError(pos_, "unexpected token");
    }
}

Object Lexer::parse_object() {
    std::string kw;
    auto obj = next(&kw);
    if (!obj) {
        if (kw.empty()) throw PdfSyntaxError(pos_, "unexpected end of data");
        throw PdfSyntaxError(pos_, "unexpected keyword '" + kw + "'");
    }
    return *obj;
}

std::string write_number(double v) {
    if (std::abs(v - std::round(v)) < 1e-9 && std::abs(v) < 1e15) {
        return std::to_string(static_cast<long long>(std::llround(v)));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

std::string write_string(std::string_view bytes) {
    std::string out = "(";
    for (unsigned char c : bytes) {
        switch (c) {
        case '(': out += "\\("; break;
        case ')': out += "\\)"; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        default:
            if (c < 32 || c > 126) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\%03o", c);
                out += buf;
            } else {
                out.push_back(static_cast<char>(c));
            }
        }
    }
    out.push_back(')');
    return out;
}

namespace {

std::string write_name(std::string_view n) {
    std::string out = "/";
    for (unsigned char c : n) {
        if (c < 33 || c > 126 || c == '#' || is_pdf_delimiter(static_cast<char>(c))) {
            char buf[4];
            std::snprintf(buf, sizeof buf, "#%02X", c);
            out += buf;
        } else {
            out.push_back(static_cast<char>(c));
        }
    }
    return out;
}

std::string write_hex(std::string_view bytes) {
    static const char* digits = "0123456789ABCDEF";
    std::string out = "<";
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 15]);
    }
    out.push_back('>');
    return out;
}

void write_into(std::string& out, const Object& o) {
    switch (o.kind()) {
    case Object::Kind::null: out += "null"; break;
    case Object::Kind::boolean: out += o.as_bool() ? "true" : "false"; break;
    case Object::Kind::integer: out += std::to_string(o.as_int()); break;
    case Object::Kind::real: out += write_number(o.as_number()); break;
    case Object::Kind::name: out += write_name(o.as_name()); break;
    case Object::Kind::string:
        out += o.hex_string() ? write_hex(o.as_string()) : write_string(o.as_string());
        break;
    case Object::Kind::ref:
        out += std::to_string(o.as_ref().num) + " " + std::to_string(o.as_ref().gen) + " R";
        break;
    case Object::Kind::array: {
        out += "[";
        bool first = true;
        for (const Object& i : o.items()) {
            if (!first) out += " ";
            first = false;
            write_into(out, i);
        }
        out += "]";
        break;
    }
    case Object::Kind::dict:
    case Object::Kind::stream: {
        out += "<<";
        for (const auto& [k, v] : o.entries()) {
            out += " " + write_name(k) + " ";
            write_into(out, v);
        }
        out += " >>";
        if (o.kind() == Object::Kind::stream) {
            out += "\nstream\n";
            out += o.stream_data();
            out += "\nendstream";
        }
        break;
    }
    }
}

} // namespace

std::string write_object(const Object& obj) {
    std::string out;
    write_into(out, obj);
    return out;
}

} // namespace tracemark::pdfio
