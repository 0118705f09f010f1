#include "tracemark/payload/keyfile.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include "tracemark/common/random.hpp"

namespace tracemark::payload {

namespace {

constexpr char magic[16] = {'T', 'R', 'A', 'C', 'E', 'M', 'A', 'R',
                            'K', '-', 'K', 'E', 'Y', 'S', '\0', '\0'};

void put(Bytes& out, const Bytes& key) {
    if (key.empty() || key.size() > 0xFFFF) throw ConfigurationError("key length must be 1..65535");
    out.push_back(static_cast<std::uint8_t>(key.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(key.size() & 0xFF));
    out.insert(out.end(), key.begin(), key.end());
}

Bytes take(std::span<const std::uint8_t> data, std::size_t& off, const char* name) {
    if (off + 2 > data.size()) throw ConfigurationError(std::string("key file truncated before ") + name);
    const std::size_t len = (std::size_t{data[off]} << 8) | data[off + 1];
    off += 2;
    if (len == 0 || off + len > data.size()) {
        throw ConfigurationError(std::string("key file has bad length for ") + name);
    }
    Bytes key(data.begin() + static_cast<std::ptrdiff_t>(off),
              data.begin() + static_cast<std::ptrdiff_t>(off + len));
    off += len;
    return key;
}

} // namespace

KeySet generate_keys(std::size_t size) {
    KeySet keys{Bytes(size), Bytes(size), Bytes(size)};
    auto& rng = Csprng::instance();
    do {
        rng.fill(keys.enc);
        rng.fill(keys.mac);
        rng.fill(keys.graph);
    } while (keys.enc == keys.mac);
    return keys;
}

Bytes serialize_keys(const KeySet& keys) {
    Bytes out(std::begin(magic), std::end(magic));
    put(out, keys.enc);
    put(out, keys.mac);
    put(out, keys.graph);
    return out;
}

KeySet parse_keys(std::span<const std::uint8_t> data) {
    if (data.size() < sizeof magic || !std::equal(std::begin(magic), std::end(magic), data.begin(),
                                                  [](char a, std::uint8_t b) {
                                                      return static_cast<std::uint8_t>(a) == b;
                                                  })) {
        throw ConfigurationError("not a key file (bad magic)");
    }
    std::size_t off = sizeof magic;
    KeySet keys;
    keys.enc = take(data, off, "enc");
    keys.mac = take(data, off, "mac");
    keys.graph = take(data, off, "graph");
    if (off != data.size()) throw ConfigurationError("trailing bytes in key file");
    return keys;
}

KeySet load_keys(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigurationError("cannot open key file " + path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_keys(data);
}

void save_keys(const KeySet& keys, const std::filesystem::path& path) {
    const Bytes data = serialize_keys(keys);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigurationError("cannot write key file " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw ConfigurationError("failed writing key file " + path.string());
    std::filesystem::permissions(path, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write,
                                 std::filesystem::perm_options::replace);
}

} // namespace tracemark::payload
