#include "tracemark/pipeline/config.hpp"

#include <charconv>
#include <fstream>

namespace tracemark::pipeline {

std::string_view to_string(Channel c) {
    switch (c) {
    case Channel::linguistic: return "linguistic";
    case Channel::structural: return "structural";
    case Channel::fontmark: return "fontmark";
    }
    return "linguistic";
}

Channel parse_channel(std::string_view name) {
    if (name == "linguistic") return Channel::linguistic;
    if (name == "structural") return Channel::structural;
    if (name == "fontmark") return Channel::fontmark;
    throw ConfigurationError("unknown channel '" + std::string(name) + "'");
}

std::string_view to_string(PayloadMode m) {
    switch (m) {
    case PayloadMode::raw: return "raw";
    case PayloadMode::log_independent: return "log-independent";
    case PayloadMode::log_dependent: return "log-dependent";
    }
    return "raw";
}

PayloadMode parse_payload_mode(std::string_view name) {
    if (name == "raw") return PayloadMode::raw;
    if (name == "log-independent") return PayloadMode::log_independent;
    if (name == "log-dependent") return PayloadMode::log_dependent;
    throw ConfigurationError("unknown payload mode '" + std::string(name) + "'");
}

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T number(const std::string& key, const std::string& v) {
    T out{};
    const char* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end) throw ConfigurationError("bad value for " + key + ": '" + v + "'");
    return out;
}

bool boolean(const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    throw ConfigurationError("bad value for " + key + ": '" + v + "'");
}

} // namespace

void Config::set(const std::string& key, const std::string& value) {
    const std::string& v = value;
    if (key == "graph") graph = v;
    else if (key == "keys") keys = v;
    else if (key == "log") log = v;
    else if (key == "log_mode") log_mode = tracelog::parse_key_mode(v);
    else if (key == "stop_words") stop_words = v;
    else if (key == "channels") {
        linguistic = structural = fontmark = false;
        std::size_t start = 0;
        while (start <= v.size()) {
            const auto comma = v.find(',', start);
            const std::string name = trim(v.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
            if (!name.empty()) {
                switch (parse_channel(name)) {
                case Channel::linguistic: linguistic = true; break;
                case Channel::structural: structural = true; break;
                case Channel::fontmark: fontmark = true; break;
                }
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    else if (key == "linguistic.payload") linguistic_payload = parse_payload_mode(v);
    else if (key == "structural.payload") structural_payload = parse_payload_mode(v);
    else if (key == "fontmark.payload") fontmark_payload = parse_payload_mode(v);
    else if (key == "seal") seal = boolean(key, v);
    else if (key == "mac_length") mac_length = number<std::size_t>(key, v);
    else if (key == "ecc") ecc = v == "auto" ? std::nullopt : std::optional<unsigned>(number<unsigned>(key, v));
    else if (key == "user_id_bits") user_id_bits = number<unsigned>(key, v);
    else if (key == "timestamp") timestamp = payload::parse_timestamp_mode(v);
    else if (key == "raw_length") raw_length = number<std::size_t>(key, v);
    else if (key == "justification") justification = linguistic::parse_justification(v);
    else if (key == "lambda") lambda = number<std::size_t>(key, v);
    else if (key == "confirm") confirm = number<std::size_t>(key, v);
    else if (key == "simplified") simplified = boolean(key, v);
    else if (key == "segment_size") structural_params.s = number<std::size_t>(key, v);
    else if (key == "classes") structural_params.classes = number<std::size_t>(key, v);
    else if (key == "delta") structural_params.delta = number<double>(key, v);
    else if (key == "max_shift") structural_params.max_shift = number<double>(key, v);
    else if (key == "class_map") {
        if (v == "line-position") structural_params.map = structural::ClassMap::line_position;
        else if (v == "label-sum") structural_params.map = structural::ClassMap::label_sum;
        else throw ConfigurationError("unknown class map '" + v + "'");
    }
    else if (key == "space_threshold") space_threshold = number<double>(key, v);
    else if (key == "seed") seed = number<std::uint64_t>(key, v);
    else throw ConfigurationError("unknown setting '" + key + "'");

    if (mac_length > 32) throw ConfigurationError("mac_length is at most 32 bytes");
    if (user_id_bits == 0 || user_id_bits > 64) throw ConfigurationError("user_id_bits must be in 1..64");
    if (!(space_threshold > 0)) throw ConfigurationError("space_threshold must be positive");
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read config '" + path + "'");
    Config c;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigurationError(path + ":" + std::to_string(n) + ": expected key = value");
        try {
            c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const ConfigurationError& e) {
            throw ConfigurationError(path + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return c;
}

bool Config::enabled(Channel c) const {
    switch (c) {
    case Channel::linguistic: return linguistic;
    case Channel::structural: return structural;
    case Channel::fontmark: return fontmark;
    }
    return false;
}

PayloadMode Config::payload_mode(Channel c) const {
    switch (c) {
    case Channel::linguistic: return linguistic_payload;
    case Channel::structural: return structural_payload;
    case Channel::fontmark: return fontmark_payload;
    }
    return PayloadMode::raw;
}

nlohmann::json Config::to_json() const {
    nlohmann::json channels = nlohmann::json::array();
    for (Channel c : {Channel::linguistic, Channel::structural, Channel::fontmark}) {
        if (enabled(c)) channels.push_back(to_string(c));
    }
    return {{"channels", channels},
            {"linguistic.payload", to_string(linguistic_payload)},
            {"structural.payload", to_string(structural_payload)},
            {"fontmark.payload", to_string(fontmark_payload)},
            {"seal", seal},
            {"mac_length", mac_length},
            {"ecc", ecc ? nlohmann::json(*ecc) : nlohmann::json("auto")},
            {"justification", linguistic::to_string(justification)},
            {"lambda", lambda},
            {"confirm", confirm},
            {"segment_size", structural_params.s},
            {"classes", structural_params.classes},
            {"delta", structural_params.delta},
            {"space_threshold", space_threshold}};
}

} // namespace tracemark::pipeline
