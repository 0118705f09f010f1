#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tracemark/common/error.hpp"

struct sqlite3;

namespace tracemark::tracelog {

class StoreError : public Error {
public:
    using Error::Error;
};

enum class KeyMode {
    /// download_id alone is unique.
    download_id,
    /// (download_id, document_id) is unique; ids may recur across documents.
    composite,
};

struct DownloadRecord {
    std::uint64_t download_id = 0;
    std::uint64_t document_id = 0;
    std::string user_id;
    /// UTC seconds since the epoch.
    std::int64_t timestamp = 0;
    /// Normalized textual IPv4 or IPv6 address.
    std::string ip_addr;
    std::string attributes;

    bool operator==(const DownloadRecord&) const = default;
};

/// Canonical text of an IPv4/IPv6 address; throws StoreError on garbage.
std::string normalize_ip(const std::string& addr);

/// Append-only download log in a single SQLite file. Rows cannot be updated
/// or deleted, not even through the file: triggers abort such statements.
/// Each Store owns one connection; open several for concurrent writers.
class Store {
public:
    static constexpr int max_attempts = 8;

    static Store open(const std::string& path, KeyMode mode = KeyMode::download_id);
    ~Store();
    Store(Store&&) noexcept;
    Store& operator=(Store&&) noexcept;

    KeyMode mode() const noexcept { return mode_; }

    /// Persists a record under a fresh random non-zero download id.
    std::uint64_t record_download(std::uint64_t document_id, const std::string& user_id, const std::string& ip_addr,
                                  std::int64_t timestamp, const std::string& attributes = {});

    std::vector<DownloadRecord> lookup(std::uint64_t download_id,
                                       std::optional<std::uint64_t> document_id = std::nullopt) const;
    std::size_t size() const;

    /// RFC 4180 CSV, header first, columns in schema order.
    void export_csv(std::ostream& out) const;

    /// Replaces the id source (tests use it to force collisions).
    void set_id_source(std::function<std::uint64_t()> source) { id_source_ = std::move(source); }

private:
    Store(sqlite3* db, KeyMode mode) : db_(db), mode_(mode) {}

    sqlite3* db_ = nullptr;
    KeyMode mode_;
    std::function<std::uint64_t()> id_source_;
};

std::string to_string(KeyMode m);
KeyMode parse_key_mode(const std::string& name);

} // namespace tracemark::tracelog
