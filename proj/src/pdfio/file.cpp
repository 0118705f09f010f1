#include "tracemark/pdfio/file.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>

namespace tracemark::pdfio {

std::string inflate(std::string_view data) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw Error("zlib init failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    zs.avail_in = static_cast<uInt>(data.size());
    std::string out;
    char buf[16384];
    int rc;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof buf;
        rc = ::inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR) {
            inflateEnd(&zs);
            throw Error("corrupt FlateDecode stream");
        }
        out.append(buf, sizeof buf - zs.avail_out);
        if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

std::string deflate(std::string_view data) {
    uLongf len = compressBound(static_cast<uLong>(data.size()));
    std::string out(len, '\0');
    if (compress2(reinterpret_cast<Bytef*>(out.data()), &len, reinterpret_cast<const Bytef*>(data.data()),
                  static_cast<uLong>(data.size()), Z_BEST_COMPRESSION) != Z_OK) {
        throw Error("zlib compression failed");
    }
    out.resize(len);
    return out;
}

PdfFile PdfFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

PdfFile::Raw PdfFile::parse_indirect(std::size_t offset, Ref expected, Object& out) const {
    Lexer lx(bytes_, offset);
    std::string kw;
    auto num = lx.next(nullptr);
    auto gen = lx.next(nullptr);
    if (!num || !gen || !num->is(Object::Kind::integer) || !gen->is(Object::Kind::integer) ||
        static_cast<std::uint32_t>(num->as_int()) != expected.num) {
        throw PdfSyntaxError(offset, "object " + std::to_string(expected.num) + " not found at xref offset");
    }
    if (lx.read_keyword() != "obj") throw PdfSyntaxError(lx.pos(), "expected 'obj'");
    out = lx.parse_object();
    lx.skip_whitespace();
    std::size_t p = lx.pos();
    if (bytes_.compare(p, 6, "stream") == 0) {
        p += 6;
        if (p < bytes_.size() && bytes_[p] == '\r') ++p;
        if (p < bytes_.size() && bytes_[p] == '\n') ++p;
        std::size_t length = std::string::npos;
        if (const Object* l = out.get("Length")) {
            if (l->is(Object::Kind::integer)) {
                length = static_cast<std::size_t>(l->as_int());
            } else if (l->is(Object::Kind::ref) && objects_.count(l->as_ref().num)) {
                length = static_cast<std::size_t>(objects_.at(l->as_ref().num).second.as_int());
            }
        }
        std::size_t data_end = 0;
        if (length != std::string::npos && p + length <= bytes_.size()) {
            Lexer chk(bytes_, p + length);
            if (chk.read_keyword() == "endstream") {
                data_end = p + length;
            } else {
                length = std::string::npos;
            }
        }
        if (length == std::string::npos) {
            data_end = bytes_.find("endstream", p);
            if (data_end == std::string::npos) throw PdfSyntaxError(p, "missing endstream");
            std::size_t e = data_end;
            if (e > p && bytes_[e - 1] == '\n') --e;
            if (e > p && bytes_[e - 1] == '\r') --e;
            data_end = e;
        }
        out.make_stream(bytes_.substr(p, data_end - p));
        Lexer after(bytes_, data_end);
        after.read_keyword();
        lx.seek(after.pos());
    }
    if (lx.read_keyword() != "endobj") throw PdfSyntaxError(lx.pos(), "expected 'endobj'");
    return {offset, lx.pos()};
}

void PdfFile::read_xref(std::size_t offset, std::map<std::uint32_t, std::pair<std::uint16_t, std::size_t>>& table,
                        int depth) {
    if (depth > 32) throw PdfSyntaxError(offset, "xref chain too long");
    Lexer lx(bytes_, offset);
    const std::string kw = lx.read_keyword();
    if (kw != "xref") {
        bool xref_stream = false;
        try {
            Lexer obj(bytes_, offset);
            obj.parse_object();
            obj.parse_object();
            if (obj.read_keyword() == "obj") {
                const Object d = obj.parse_object();
                const Object* type = d.get("Type");
                xref_stream = type && type->is(Object::Kind::name) && type->as_name() == "XRef";
            }
        } catch (const Error&) {
        }
        if (xref_stream) throw UnsupportedLayout("cross-reference streams", "offset " + std::to_string(offset));
        throw PdfSyntaxError(offset, "startxref does not point at a cross-reference table");
    }
    for (;;) {
        lx.skip_whitespace();
        const std::size_t mark = lx.pos();
        std::string word = lx.read_keyword();
        if (word == "trailer") break;
        lx.seek(mark);
        const auto first = lx.parse_object().as_int();
        const auto count = lx.parse_object().as_int();
        for (std::int64_t i = 0; i < count; ++i) {
            const auto off = lx.parse_object().as_int();
            const auto gen = lx.parse_object().as_int();
            const std::string type = lx.read_keyword();
            const auto num = static_cast<std::uint32_t>(first + i);
            if (type == "n" && off > 0 && !table.count(num)) {
                table[num] = {static_cast<std::uint16_t>(gen), static_cast<std::size_t>(off)};
            } else if (type != "n" && type != "f") {
                throw PdfSyntaxError(lx.pos(), "bad xref entry");
            }
        }
    }
    Object trailer = lx.parse_object();
    if (depth == 0) trailer_ = trailer;
    if (const Object* prev = trailer.get("Prev")) {
        read_xref(static_cast<std::size_t>(prev->as_int()), table, depth + 1);
    }
}

void PdfFile::scan_objects(std::map<std::uint32_t, std::pair<std::uint16_t, std::size_t>>& table) const {
    static const std::regex header(R"((\d+)[ \t\r\n]+(\d+)[ \t\r\n]+obj\b)");
    for (auto it = std::sregex_iterator(bytes_.begin(), bytes_.end(), header); it != std::sregex_iterator(); ++it) {
        const auto pos = static_cast<std::size_t>(it->position(0));
        if (pos > 0 && !is_pdf_whitespace(bytes_[pos - 1])) continue;
        table[static_cast<std::uint32_t>(std::stoul((*it)[1]))] = {
            static_cast<std::uint16_t>(std::stoul((*it)[2])), pos};
    }
}

PdfFile PdfFile::parse(std::string bytes) {
    PdfFile f;
    f.bytes_ = std::move(bytes);
    if (f.bytes_.compare(0, 5, "%PDF-") != 0) throw PdfSyntaxError(0, "missing %PDF header");
    f.header_ = f.bytes_.substr(0, f.bytes_.find_first_of("\r\n"));

    std::map<std::uint32_t, std::pair<std::uint16_t, std::size_t>> table;
    const std::size_t sx = f.bytes_.rfind("startxref");
    bool have_xref = false;
    if (sx != std::string::npos) {
        Lexer lx(f.bytes_, sx + 9);
        auto off = lx.next(nullptr);
        if (off && off->is(Object::Kind::integer) && static_cast<std::size_t>(off->as_int()) < f.bytes_.size()) {
            try {
                f.read_xref(static_cast<std::size_t>(off->as_int()), table, 0);
                have_xref = true;
            } catch (const PdfSyntaxError&) {
                table.clear();
            }
        }
    }
    if (!have_xref) {
        f.scan_objects(table);
        const std::size_t t = f.bytes_.rfind("trailer");
        if (t == std::string::npos) throw PdfSyntaxError(0, "no trailer found");
        Lexer lx(f.bytes_, t + 7);
        f.trailer_ = lx.parse_object();
    }
    if (f.trailer_.get("Encrypt")) throw UnsupportedLayout("encrypted document", "trailer /Encrypt");

    // Non-stream objects first so indirect /Length values resolve.
    std::vector<std::pair<std::uint32_t, std::pair<std::uint16_t, std::size_t>>> pending(table.begin(), table.end());
    for (int pass = 0; pass < 2 && !pending.empty(); ++pass) {
        std::vector<std::pair<std::uint32_t, std::pair<std::uint16_t, std::size_t>>> retry;
        for (const auto& [num, entry] : pending) {
            Object o;
            try {
                Raw raw = f.parse_indirect(entry.second, {num, entry.first}, o);
                f.objects_[num] = {entry.first, std::move(o)};
                f.raw_[num] = raw;
            } catch (const PdfSyntaxError&) {
                if (pass == 1) throw;
                retry.push_back({num, entry});
            }
        }
        pending = std::move(retry);
    }
    return f;
}

const Object& PdfFile::get(Ref r) const {
    auto it = objects_.find(r.num);
    if (it == objects_.end()) throw PdfSyntaxError(0, "missing object " + std::to_string(r.num));
    return it->second.second;
}

const Object& PdfFile::resolve(const Object& o) const {
    const Object* cur = &o;
    for (int i = 0; i < 32 && cur->is(Object::Kind::ref); ++i) {
        auto it = objects_.find(cur->as_ref().num);
        if (it == objects_.end()) {
            static const Object null_object;
            return null_object;
        }
        cur = &it->second.second;
    }
    return *cur;
}

void PdfFile::replace(Ref r, Object value) {
    const std::uint16_t gen = objects_.count(r.num) ? objects_[r.num].first : r.gen;
    objects_[r.num] = {gen, std::move(value)};
    dirty_[r.num] = true;
}

Ref PdfFile::add(Object value) {
    const std::uint32_t num = objects_.empty() ? 1 : objects_.rbegin()->first + 1;
    objects_[num] = {0, std::move(value)};
    dirty_[num] = true;
    return {num, 0};
}

std::string PdfFile::decode_stream(const Object& stream) const {
    const Object* filter = stream.get("Filter");
    if (!filter) return stream.stream_data();
    const Object& fv = resolve(*filter);
    std::vector<std::string> names;
    if (fv.is(Object::Kind::name)) {
        names.push_back(fv.as_name());
    } else if (fv.is(Object::Kind::array)) {
        for (const Object& n : fv.items()) names.push_back(resolve(n).as_name());
    }
    std::string data = stream.stream_data();
    for (const std::string& n : names) {
        if (n == "FlateDecode" || n == "Fl") {
            if (stream.get("DecodeParms")) throw UnsupportedLayout("predictor on content stream");
            data = inflate(data);
        } else {
            throw UnsupportedLayout("stream filter /" + n);
        }
    }
    return data;
}

Object PdfFile::make_stream(Object dict, const std::string& data, bool flate) {
    dict.erase("DecodeParms");
    if (flate) {
        dict.set("Filter", Object::name("FlateDecode"));
        dict.make_stream(deflate(data));
    } else {
        dict.erase("Filter");
        dict.make_stream(data);
    }
    return dict;
}

std::string PdfFile::write() const {
    std::string out = header_ + "\n%\xE2\xE3\xCF\xD3\n";
    std::map<std::uint32_t, std::size_t> offsets;
    for (const auto& [num, entry] : objects_) {
        offsets[num] = out.size();
        auto raw = raw_.find(num);
        if (raw != raw_.end() && !dirty_.count(num)) {
            out.append(bytes_, raw->second.begin, raw->second.end - raw->second.begin);
        } else {
            out += std::to_string(num) + " " + std::to_string(entry.first) + " obj\n";
            out += write_object(entry.second);
            out += "\nendobj";
        }
        out += "\n";
    }
    const std::uint32_t size = objects_.empty() ? 1 : objects_.rbegin()->first + 1;
    const std::size_t xref = out.size();
    out += "xref\n0 " + std::to_string(size) + "\n0000000000 65535 f \n";
    char line[32];
    for (std::uint32_t n = 1; n < size; ++n) {
        auto it = offsets.find(n);
        if (it == offsets.end()) {
            out += "0000000000 65535 f \n";
        } else {
            std::snprintf(line, sizeof line, "%010zu %05u n \n", it->second, objects_.at(n).first);
            out += line;
        }
    }
    Object trailer = trailer_;
    trailer.erase("Prev");
    trailer.erase("XRefStm");
    trailer.set("Size", Object::integer(size));
    out += "trailer\n" + write_object(trailer) + "\nstartxref\n" + std::to_string(xref) + "\n%%EOF\n";
    return out;
}

} // namespace tracemark::pdfio
