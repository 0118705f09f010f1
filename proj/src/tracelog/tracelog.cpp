#include "tracemark/tracelog/tracelog.hpp"

#include <arpa/inet.h>
#include <sqlite3.h>

#include <chrono>
#include <thread>

#include "tracemark/common/random.hpp"

namespace tracemark::tracelog {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS meta (key TEXT PRIMARY KEY, value TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS downloads (
  download_id INTEGER NOT NULL,
  document_id INTEGER NOT NULL,
  user_id TEXT NOT NULL,
  timestamp INTEGER NOT NULL,
  ip_addr TEXT NOT NULL,
  attributes TEXT NOT NULL DEFAULT ''
);
CREATE INDEX IF NOT EXISTS downloads_id ON downloads (download_id);
CREATE TRIGGER IF NOT EXISTS downloads_no_update BEFORE UPDATE ON downloads
  BEGIN SELECT RAISE(ABORT, 'download log is append-only'); END;
CREATE TRIGGER IF NOT EXISTS downloads_no_delete BEFORE DELETE ON downloads
  BEGIN SELECT RAISE(ABORT, 'download log is append-only'); END;
)sql";

class Statement {
public:
    Statement(sqlite3* db, const char* sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
            throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db));
        }
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    void bind(int i, std::int64_t v) { sqlite3_bind_int64(stmt_, i, v); }
    void bind(int i, const std::string& v) {
        sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    }
    int step() { return sqlite3_step(stmt_); }
    std::int64_t int64(int col) const { return sqlite3_column_int64(stmt_, col); }
    std::string text(int col) const {
        const auto* p = sqlite3_column_text(stmt_, col);
        return p ? std::string(reinterpret_cast<const char*>(p)) : std::string();
    }
    sqlite3* db() const { return db_; }

private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

void exec(sqlite3* db, const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown error";
        sqlite3_free(err);
        throw StoreError("store: " + msg);
    }
}

std::int64_t as_db(std::uint64_t v) { return static_cast<std::int64_t>(v); }
std::uint64_t from_db(std::int64_t v) { return static_cast<std::uint64_t>(v); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string to_string(KeyMode m) { return m == KeyMode::composite ? "composite" : "download_id"; }

KeyMode parse_key_mode(const std::string& name) {
    if (name == "download_id") return KeyMode::download_id;
    if (name == "composite") return KeyMode::composite;
    throw ConfigurationError("unknown log key mode '" + name + "'");
}

std::string normalize_ip(const std::string& addr) {
    unsigned char buf[16];
    char text[INET6_ADDRSTRLEN];
    if (inet_pton(AF_INET, addr.c_str(), buf) == 1) {
        inet_ntop(AF_INET, buf, text, sizeof text);
        return text;
    }
    if (inet_pton(AF_INET6, addr.c_str(), buf) == 1) {
        inet_ntop(AF_INET6, buf, text, sizeof text);
        return text;
    }
    throw StoreError("not an IP address: '" + addr + "'");
}

Store Store::open(const std::string& path, KeyMode mode) {
    sqlite3* db = nullptr;
    if (sqlite3_open_v2(path.c_str(), &db, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                        nullptr) != SQLITE_OK) {
        std::string msg = db ? sqlite3_errmsg(db) : "out of memory";
        sqlite3_close(db);
        throw StoreError("cannot open log '" + path + "': " + msg);
    }
    Store store(db, mode);
    sqlite3_busy_timeout(db, 10000);
    exec(db, "PRAGMA journal_mode=WAL;");
    exec(db, "BEGIN IMMEDIATE;");
    try {
        exec(db, kSchema);
        Statement get(db, "SELECT value FROM meta WHERE key = 'key_mode'");
        if (get.step() == SQLITE_ROW) {
            if (get.text(0) != to_string(mode)) {
                throw StoreError("log was created in " + get.text(0) + " mode, opened as " + to_string(mode));
            }
        } else {
            Statement put(db, "INSERT INTO meta (key, value) VALUES ('key_mode', ?)");
            put.bind(1, to_string(mode));
            if (put.step() != SQLITE_DONE) throw StoreError(std::string("store: ") + sqlite3_errmsg(db));
            exec(db, mode == KeyMode::composite
                         ? "CREATE UNIQUE INDEX downloads_key ON downloads (download_id, document_id);"
                         : "CREATE UNIQUE INDEX downloads_key ON downloads (download_id);");
        }
        exec(db, "COMMIT;");
    } catch (...) {
        sqlite3_exec(db, "ROLLBACK;", nullptr, nullptr, nullptr);
        throw;
    }
    return store;
}

Store::~Store() { sqlite3_close(db_); }

Store::Store(Store&& o) noexcept : db_(o.db_), mode_(o.mode_), id_source_(std::move(o.id_source_)) { o.db_ = nullptr; }

Store& Store::operator=(Store&& o) noexcept {
    if (this != &o) {
        sqlite3_close(db_);
        db_ = o.db_;
        mode_ = o.mode_;
        id_source_ = std::move(o.id_source_);
        o.db_ = nullptr;
    }
    return *this;
}

std::uint64_t Store::record_download(std::uint64_t document_id, const std::string& user_id,
                                     const std::string& ip_addr, std::int64_t timestamp,
                                     const std::string& attributes) {
    const std::string ip = normalize_ip(ip_addr);
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::uint64_t id = 0;
        while (id == 0) id = id_source_ ? id_source_() : Csprng::instance().next_u64();
        Statement ins(db_,
                      "INSERT INTO downloads (download_id, document_id, user_id, timestamp, ip_addr, attributes) "
                      "VALUES (?, ?, ?, ?, ?, ?)");
        ins.bind(1, as_db(id));
        ins.bind(2, as_db(document_id));
        ins.bind(3, user_id);
        ins.bind(4, timestamp);
        ins.bind(5, ip);
        ins.bind(6, attributes);
        const int rc = ins.step();
        if (rc == SQLITE_DONE) return id;
        if (rc == SQLITE_CONSTRAINT) continue;
        if (rc == SQLITE_BUSY) {
            std::this_thread::sleep_for(std::chrono::milliseconds(5));
            continue;
        }
        throw StoreError(std::string("cannot record download: ") + sqlite3_errmsg(db_));
    }
    throw StoreError("no unique download id after " + std::to_string(max_attempts) + " attempts");
}

std::vector<DownloadRecord> Store::lookup(std::uint64_t download_id, std::optional<std::uint64_t> document_id) const {
    Statement q(db_, document_id ? "SELECT download_id, document_id, user_id, timestamp, ip_addr, attributes "
                                   "FROM downloads WHERE download_id = ? AND document_id = ? ORDER BY rowid"
                                 : "SELECT download_id, document_id, user_id, timestamp, ip_addr, attributes "
                                   "FROM downloads WHERE download_id = ? ORDER BY rowid");
    q.bind(1, as_db(download_id));
    if (document_id) q.bind(2, as_db(*document_id));
    std::vector<DownloadRecord> out;
    int rc;
    while ((rc = q.step()) == SQLITE_ROW) {
        out.push_back({from_db(q.int64(0)), from_db(q.int64(1)), q.text(2), q.int64(3), q.text(4), q.text(5)});
    }
    if (rc != SQLITE_DONE) throw StoreError(std::string("lookup failed: ") + sqlite3_errmsg(db_));
    return out;
}

std::size_t Store::size() const {
    Statement q(db_, "SELECT COUNT(*) FROM downloads");
    if (q.step() != SQLITE_ROW) throw StoreError(std::string("count failed: ") + sqlite3_errmsg(db_));
    return static_cast<std::size_t>(q.int64(0));
}

void Store::export_csv(std::ostream& out) const {
    out << "download_id,document_id,user_id,timestamp,ip_addr,attributes\r\n";
    Statement q(db_, "SELECT download_id, document_id, user_id, timestamp, ip_addr, attributes "
                     "FROM downloads ORDER BY rowid");
    int rc;
    while ((rc = q.step()) == SQLITE_ROW) {
        out << from_db(q.int64(0)) << ',' << from_db(q.int64(1)) << ',' << csv_field(q.text(2)) << ','
            << q.int64(3) << ',' << csv_field(q.text(4)) << ',' << csv_field(q.text(5)) << "\r\n";
    }
    if (rc != SQLITE_DONE) throw StoreError(std::string("export failed: ") + sqlite3_errmsg(db_));
}

} // namespace tracemark::tracelog
