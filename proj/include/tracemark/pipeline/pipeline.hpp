#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tracemark/lexgraph/lexgraph.hpp"
#include "tracemark/payload/keyfile.hpp"
#include "tracemark/payload/timestamp.hpp"
#include "tracemark/pipeline/config.hpp"
#include "tracemark/tracelog/tracelog.hpp"

namespace tracemark::pipeline {

/// What to embed. Fields are used according to each channel's payload mode.
struct Request {
    std::optional<Bytes> raw;
    std::uint64_t user_id = 0;
    std::optional<payload::UtcTime> timestamp;
    std::uint64_t document_id = 0;
    std::string ip_addr = "127.0.0.1";
};

struct Context {
    const Config& config;
    const lexgraph::LexGraph* graph = nullptr;
    payload::KeySet keys;
    tracelog::Store* log = nullptr;
};

struct EmbedOutcome {
    std::string pdf;
    nlohmann::json report;
    bool any_embedded = false;
};

/// Runs linguistic, structural and fontmark embedding in that order, each
/// on the output of the previous one. A failing channel is reported and skipped.
EmbedOutcome embed(const std::string& original_pdf, const Request& request, const Context& ctx);

struct ExtractOutcome {
    nlohmann::json report;
    bool authentication_failure = false;
};

/// Runs every enabled extractor independently against the leaked file.
ExtractOutcome extract(const std::string& leaked_pdf, const std::string& original_pdf, const Context& ctx);

/// Length of p' carried by a channel, in bytes.
std::size_t sealed_length(const Config& cfg, Channel c);

} // namespace tracemark::pipeline
