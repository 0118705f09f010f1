#pragma once

#include <map>
#include <string>

#include "tracemark/pdfio/object.hpp"

namespace tracemark::pdfio {

/// Raised for inputs outside the supported layout class (encrypted files,
/// cross-reference streams, multi-column text, unknown filters, ...).
class UnsupportedLayout : public Error {
public:
    UnsupportedLayout(const std::string& what, const std::string& where = {})
        : Error("unsupported layout: " + what + (where.empty() ? "" : " (" + where + ")")),
          where_(where) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

/// Indirect objects of a classic-xref PDF, with their original bytes so
/// untouched objects can be written back unchanged.
class PdfFile {
public:
    static PdfFile parse(std::string bytes);
    static PdfFile load(const std::string& path);

    const Object& trailer() const noexcept { return trailer_; }
    Object& trailer() noexcept { return trailer_; }

    bool has(Ref r) const { return objects_.count(r.num) != 0; }
    const Object& get(Ref r) const;
    /// Follows references until a direct object is reached.
    const Object& resolve(const Object& o) const;

    /// Replaces an object; it will be re-serialized on write.
    void replace(Ref r, Object value);
    Ref add(Object value);

    /// Decoded content of a stream object (FlateDecode or unfiltered).
    std::string decode_stream(const Object& stream) const;
    /// Builds a stream object, compressing when `flate` is set.
    static Object make_stream(Object dict, const std::string& data, bool flate);

    std::string header() const { return header_; }
    std::string write() const;

    const std::map<std::uint32_t, std::pair<std::uint16_t, Object>>& objects() const { return objects_; }

private:
    struct Raw {
        std::size_t begin = 0;
        std::size_t end = 0;
    };

    void read_xref(std::size_t offset, std::map<std::uint32_t, std::pair<std::uint16_t, std::size_t>>& table,
                   int depth);
    void scan_objects(std::map<std::uint32_t, std::pair<std::uint16_t, std::size_t>>& table) const;
    Raw parse_indirect(std::size_t offset, Ref expected, Object& out) const;

    std::string bytes_;
    std::string header_ = "%PDF-1.4";
    Object trailer_;
    std::map<std::uint32_t, std::pair<std::uint16_t, Object>> objects_;
    std::map<std::uint32_t, Raw> raw_;
    std::map<std::uint32_t, bool> dirty_;
};

std::string inflate(std::string_view data);
std::string deflate(std::string_view data);

} // namespace tracemark::pdfio
