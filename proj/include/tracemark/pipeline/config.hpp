#pragma once

#include <optional>
#include <string>

#include "tracemark/linguistic/linguistic.hpp"
#include "tracemark/payload/timestamp.hpp"
#include "tracemark/structural/structural.hpp"
#include "tracemark/tracelog/tracelog.hpp"

namespace tracemark::pipeline {

enum class Channel { linguistic, structural, fontmark };
std::string_view to_string(Channel c);
Channel parse_channel(std::string_view name);

enum class PayloadMode {
    /// Caller-supplied bytes.
    raw,
    /// user id, timestamp and nonce.
    log_independent,
    /// Random download id recorded in the download log.
    log_dependent,
};
std::string_view to_string(PayloadMode m);
PayloadMode parse_payload_mode(std::string_view name);

/// Settings shared by embedding and extraction. Loaded from a key = value
/// file; '#' starts a comment. Unknown keys are errors.
struct Config {
    std::string graph;
    std::string keys;
    std::string log;
    tracelog::KeyMode log_mode = tracelog::KeyMode::download_id;
    std::string stop_words;

    bool linguistic = true;
    bool structural = true;
    bool fontmark = true;
    PayloadMode linguistic_payload = PayloadMode::log_independent;
    PayloadMode structural_payload = PayloadMode::log_dependent;
    PayloadMode fontmark_payload = PayloadMode::log_independent;

    bool seal = true;
    std::size_t mac_length = 8;
    /// Parity symbols for the linguistic channel; nullopt sizes it to the document.
    std::optional<unsigned> ecc;

    unsigned user_id_bits = 32;
    payload::TimestampMode timestamp = payload::TimestampMode::unix32;
    /// Bytes of a raw payload; needed to extract one.
    std::size_t raw_length = 0;

    linguistic::Justification justification = linguistic::Justification::no_longer_lines;
    std::size_t lambda = 2;
    std::size_t confirm = 3;
    bool simplified = false;

    structural::Params structural_params;
    double space_threshold = 200;

    /// Pins the random generator (erasure guesses, nonces, download ids).
    std::optional<std::uint64_t> seed;

    static Config load(const std::string& path);
    /// Applies one `key = value` setting.
    void set(const std::string& key, const std::string& value);
    nlohmann::json to_json() const;

    bool enabled(Channel c) const;
    PayloadMode payload_mode(Channel c) const;
};

} // namespace tracemark::pipeline
