#include "tracemark/pipeline/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <chrono>

#include "tracemark/common/random.hpp"
#include "tracemark/fontmark/fontmark.hpp"
#include "tracemark/linguistic/linguistic.hpp"
#include "tracemark/payload/ecc.hpp"
#include "tracemark/payload/layout.hpp"
#include "tracemark/payload/seal.hpp"
#include "tracemark/pdfio/document.hpp"
#include "tracemark/structural/structural.hpp"

namespace tracemark::pipeline {

namespace {

constexpr int kReportVersion = 1;
constexpr Channel kChannels[] = {Channel::linguistic, Channel::structural, Channel::fontmark};

std::string hex(std::span<const std::uint8_t> b) {
    static const char* digits = "0123456789ABCDEF";
    std::string out = "0x";
    for (std::uint8_t v : b) {
        out += digits[v >> 4];
        out += digits[v & 15];
    }
    return out;
}

payload::LogIndependentLayout layout_of(const Config& cfg) { return {cfg.user_id_bits, cfg.timestamp, 8}; }

std::size_t plain_length(const Config& cfg, Channel c) {
    switch (cfg.payload_mode(c)) {
    case PayloadMode::raw:
        if (cfg.raw_length == 0) throw ConfigurationError("raw payloads need raw_length");
        return cfg.raw_length;
    case PayloadMode::log_independent: return layout_of(cfg).byte_length();
    case PayloadMode::log_dependent: return payload::LogDependentLayout{}.byte_length();
    }
    return 0;
}

linguistic::WordSequence tokens_of(const pdfio::Document& doc, const Config& cfg) {
    std::vector<std::string> words;
    std::vector<std::size_t> lines;
    for (const pdfio::Word& w : doc.words()) {
        words.push_back(w.text);
        lines.push_back(w.line);
    }
    linguistic::TokenizeOptions opts;
    if (!cfg.stop_words.empty()) opts.stop_words = linguistic::read_stop_words(cfg.stop_words);
    return linguistic::tokenize(words, lines, opts);
}

payload::Sealer sealer_of(const Context& ctx) {
    return payload::Sealer(ctx.keys.enc, ctx.keys.mac, ctx.config.mac_length);
}

const lexgraph::LexGraph& graph_of(const Context& ctx) {
    if (!ctx.graph) throw ConfigurationError("the linguistic channel needs a compiled graph");
    return *ctx.graph;
}

// Interprets an opened payload for the report.
nlohmann::json describe(const Bytes& plain, PayloadMode mode, const Context& ctx) {
    nlohmann::json j{{"mode", to_string(mode)}, {"hex", hex(plain)}};
    if (mode == PayloadMode::log_independent) {
        const auto p = payload::decode_log_independent(plain, layout_of(ctx.config));
        j["user_id"] = p.user_id;
        j["timestamp"] = payload::to_iso8601(p.timestamp);
        j["nonce"] = p.nonce;
    } else if (mode == PayloadMode::log_dependent) {
        const auto p = payload::decode_log_dependent(plain);
        j["download_id"] = p.download_id;
        if (ctx.log) {
            nlohmann::json records = nlohmann::json::array();
            for (const auto& r : ctx.log->lookup(p.download_id)) {
                records.push_back({{"document_id", r.document_id},
                                   {"user_id", r.user_id},
                                   {"timestamp", r.timestamp},
                                   {"ip_addr", r.ip_addr}});
            }
            j["records"] = records;
        }
    }
    return j;
}

std::chrono::sys_seconds now() {
    return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

struct Payloads {
    std::optional<Bytes> raw;
    std::optional<Bytes> independent;
    std::optional<Bytes> dependent;
    nlohmann::json report = nlohmann::json::object();
};

Bytes plain_payload(Payloads& p, PayloadMode mode, const Request& req, const Context& ctx) {
    switch (mode) {
    case PayloadMode::raw:
        if (!req.raw) throw ConfigurationError("raw payload mode needs a payload");
        return *req.raw;
    case PayloadMode::log_independent:
        if (!p.independent) {
            const auto ts = req.timestamp ? *req.timestamp : payload::from_sys(now());
            const auto value = payload::make_log_independent(req.user_id, ts);
            p.independent = payload::encode(value, layout_of(ctx.config));
            p.report["log-independent"] = {{"user_id", value.user_id},
                                           {"timestamp", payload::to_iso8601(value.timestamp)},
                                           {"nonce", value.nonce},
                                           {"hex", hex(*p.independent)}};
        }
        return *p.independent;
    case PayloadMode::log_dependent:
        if (!p.dependent) {
            if (!ctx.log) throw ConfigurationError("log-dependent payloads need a download log");
            const auto ts = req.timestamp ? payload::to_sys(*req.timestamp) : now();
            const auto id = ctx.log->record_download(req.document_id, std::to_string(req.user_id), req.ip_addr,
                                                     ts.time_since_epoch().count());
            p.dependent = payload::encode(payload::LogDependentPayload{id});
            p.report["log-dependent"] = {{"download_id", id}, {"hex", hex(*p.dependent)}};
        }
        return *p.dependent;
    }
    return {};
}

struct Stage {
    pdfio::Document doc;
    std::string bytes;
};

Stage apply(const pdfio::Document& doc, const pdfio::Edits& edits, double threshold) {
    std::string bytes = doc.write(edits);
    pdfio::Document next = pdfio::Document::parse(bytes, threshold);
    return {std::move(next), std::move(bytes)};
}

nlohmann::json embed_linguistic(Stage& stage, const Bytes& sealed, const Context& ctx) {
    const Config& cfg = ctx.config;
    const auto& graph = graph_of(ctx);
    const lexgraph::GraphKey key(ctx.keys.graph);
    const pdfio::Document& doc = stage.doc;
    const auto d = tokens_of(doc, cfg);
    linguistic::Vocabulary vocab(graph, key);

    linguistic::EmbedOptions opts;
    opts.mode = cfg.justification;
    opts.settable = [&](std::size_t j, const std::string& text) { return doc.encodable(text, doc.font_of(doc.words()[j])); };
    opts.width = [&](std::size_t j, const std::string& text) {
        const auto& w = doc.words()[j];
        return doc.measure(text, doc.font_of(w), w.char_spacing);
    };
    opts.line_slack = [&](std::size_t token_line) {
        // Gaps may shrink to the word-space threshold plus a margin, or grow by half.
        double shrink = 0;
        double grow = 0;
        for (std::size_t g : doc.lines()[token_line].gaps) {
            const auto& gap = doc.gaps()[g];
            if (!gap.adjustable) continue;
            shrink += std::max(0.0, gap.width - (doc.space_threshold() + 60));
            grow += gap.width / 2;
        }
        return std::pair(-grow, shrink);
    };

    const std::size_t capacity = linguistic::max_bits(d, vocab);
    linguistic::EmbedResult result;
    // Forced erasures cost one parity symbol each. An automatic size keeps
    // half of the parity free for attacks; an explicit one only has to decode.
    auto trial = [&](unsigned t, std::size_t budget) {
        const Bytes encoded = payload::attach_ecc(sealed, t);
        auto r = linguistic::embed(d, bytes_to_bits(encoded), vocab, opts);
        if (!r.complete) return false;
        std::vector<std::uint8_t> flags(encoded.size() * 8, 0);
        for (std::size_t i : r.erased_positions) flags[i] = 1;
        if (payload::erased_symbols(flags).size() > budget) return false;
        result = std::move(r);
        return true;
    };
    unsigned t;
    if (cfg.ecc) {
        t = *cfg.ecc;
        if (!trial(t, t)) {
            throw payload::EmbeddingCapacityError("document cannot hold " + std::to_string(8 * payload::ecc_length(sealed.size(), t)) +
                                                  " bits with parity " + std::to_string(t) + " (" +
                                                  std::to_string(capacity) + " eligible words)");
        }
    } else {
        t = payload::size_parity(capacity, sealed.size(), [&](unsigned u) { return trial(u, u / 2); });
    }

    pdfio::Edits edits;
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (result.words[j] != d[j].text) edits.replace[j] = result.words[j];
    }
    edits.rejustify = cfg.justification != linguistic::Justification::none;
    stage = apply(doc, edits, cfg.space_threshold);

    nlohmann::json subs = nlohmann::json::array();
    for (const auto& s : result.substitutions) {
        subs.push_back({{"word", s.index}, {"from", s.original}, {"to", s.replacement}, {"bit", s.carries_bit ? nlohmann::json(s.bit) : nlohmann::json(nullptr)}});
    }
    return {{"status", "embedded"},
            {"parity", t},
            {"bits", 8 * payload::ecc_length(sealed.size(), t)},
            {"capacity", capacity},
            {"forced_erasures", result.forced_erasures},
            {"skipped_words", result.skipped},
            {"substitutions", subs}};
}

nlohmann::json embed_structural(Stage& stage, const Bytes& sealed, const Context& ctx) {
    const Bits bits = bytes_to_bits(sealed);
    const auto sp = structural::plan(stage.doc, bits, ctx.config.structural_params);
    if (sp.encoded == 0) throw payload::EmbeddingCapacityError("no segment could be encoded");
    std::vector<bool> covered(bits.size(), false);
    for (const auto& s : sp.segments) {
        if (s.encoded && s.cls < bits.size()) covered[s.cls] = true;
    }
    const auto missing = std::count(covered.begin(), covered.end(), false);
    pdfio::Edits edits;
    edits.gap_width = sp.gap_width;
    stage = apply(stage.doc, edits, ctx.config.space_threshold);
    return {{"status", "embedded"},
            {"bits", bits.size()},
            {"segments_encoded", sp.encoded},
            {"segments_skipped", sp.skipped},
            {"classes_without_segment", missing}};
}

nlohmann::json embed_fontmark(Stage& stage, const Bytes& sealed, const Context& ctx) {
    const Bits bits = bytes_to_bits(sealed);
    pdfio::Edits edits;
    edits.font_patches = fontmark::patches(stage.doc, bits);
    std::size_t slots = 0;
    for (const auto* f : fontmark::embedded_fonts(stage.doc)) slots = std::max(slots, fontmark::slots(*f).size());
    stage = apply(stage.doc, edits, ctx.config.space_threshold);
    return {{"status", "embedded"}, {"bits", bits.size()}, {"capacity", fontmark::capacity(slots)}};
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const fontmark::ChannelUnavailable*>(&e)) return "ChannelUnavailable";
    if (dynamic_cast<const fontmark::CapacityError*>(&e)) return "CapacityError";
    if (dynamic_cast<const payload::EmbeddingCapacityError*>(&e)) return "EmbeddingCapacityError";
    if (dynamic_cast<const fontmark::TamperSuspected*>(&e)) return "TamperSuspected";
    if (dynamic_cast<const structural::NoSignalError*>(&e)) return "NoSignal";
    if (dynamic_cast<const linguistic::SyncLostError*>(&e)) return "SyncLost";
    if (dynamic_cast<const pdfio::EditError*>(&e)) return "EditError";
    if (dynamic_cast<const ConfigurationError*>(&e)) return "ConfigurationError";
    return "Error";
}

} // namespace

std::size_t sealed_length(const Config& cfg, Channel c) {
    return plain_length(cfg, c) + (cfg.seal ? cfg.mac_length : 0);
}

EmbedOutcome embed(const std::string& original_pdf, const Request& request, const Context& ctx) {
    const Config& cfg = ctx.config;
    if (cfg.seed) Csprng::instance().seed_for_testing(*cfg.seed);
    Stage stage{pdfio::Document::parse(original_pdf, cfg.space_threshold), original_pdf};
    Payloads payloads;
    EmbedOutcome out;
    nlohmann::json channels = nlohmann::json::object();

    for (Channel c : kChannels) {
        const std::string name(to_string(c));
        if (!cfg.enabled(c)) {
            channels[name] = {{"status", "disabled"}};
            continue;
        }
        nlohmann::json j;
        try {
            const Bytes plain = plain_payload(payloads, cfg.payload_mode(c), request, ctx);
            const Bytes sealed = cfg.seal ? sealer_of(ctx).seal(plain).bytes() : plain;
            Stage next = stage;
            switch (c) {
            case Channel::linguistic: j = embed_linguistic(next, sealed, ctx); break;
            case Channel::structural: j = embed_structural(next, sealed, ctx); break;
            case Channel::fontmark: j = embed_fontmark(next, sealed, ctx); break;
            }
            stage = std::move(next);
            j["payload"] = to_string(cfg.payload_mode(c));
            j["sealed"] = hex(sealed);
            out.any_embedded = true;
        } catch (const Error& e) {
            j = {{"status", "failed"}, {"error", error_kind(e)}, {"reason", e.what()}};
        }
        channels[name] = j;
    }
    out.pdf = std::move(stage.bytes);
    out.report = {{"version", kReportVersion},
                  {"operation", "embed"},
                  {"config", cfg.to_json()},
                  {"payloads", payloads.report},
                  {"channels", channels},
                  {"embedded", out.any_embedded}};
    return out;
}

namespace {

// Opens p' recovered by a channel; sets the status fields of `j`.
void open_into(nlohmann::json& j, const Bytes& sealed, Channel c, const Context& ctx, bool& auth_failure) {
    const Config& cfg = ctx.config;
    j["sealed"] = hex(sealed);
    if (!cfg.seal) {
        j["status"] = "recovered";
        j["payload"] = describe(sealed, cfg.payload_mode(c), ctx);
        return;
    }
    try {
        const Bytes plain = sealer_of(ctx).open(sealed);
        j["status"] = "verified";
        j["payload"] = describe(plain, cfg.payload_mode(c), ctx);
    } catch (const payload::AuthenticationFailure& e) {
        j["status"] = "authentication_failure";
        j["reason"] = e.what();
        auth_failure = true;
    }
}

nlohmann::json extract_linguistic(const pdfio::Document& leaked, const pdfio::Document& original, const Context& ctx,
                                  bool& auth_failure) {
    const Config& cfg = ctx.config;
    const auto& graph = graph_of(ctx);
    const lexgraph::GraphKey key(ctx.keys.graph);
    linguistic::Vocabulary vocab(graph, key);
    const auto d = tokens_of(original, cfg);
    const auto dw = tokens_of(leaked, cfg);
    const std::size_t len = sealed_length(cfg, Channel::linguistic);
    const std::size_t capacity = linguistic::max_bits(d, vocab);

    std::vector<unsigned> parities;
    if (cfg.ecc) {
        parities.push_back(*cfg.ecc);
    } else {
        try {
            for (unsigned t = payload::size_parity(capacity, len) + 1; t-- > 0;) parities.push_back(t);
        } catch (const payload::EmbeddingCapacityError&) {
            return {{"status", "absent"}, {"reason", "original document cannot hold the payload"}};
        }
    }
    linguistic::ExtractOptions opts;
    opts.lambda = cfg.lambda;
    opts.confirm = cfg.confirm;
    opts.simplified = cfg.simplified;
    // Extra bits let a stream be shifted back over deleted words that carried nothing.
    const std::size_t spare = 2 * opts.lambda;
    opts.max_bits = 8 * payload::ecc_length(len, parities.front()) + spare;

    linguistic::ExtractResult x;
    try {
        x = linguistic::extract(d, dw, vocab, opts);
    } catch (const linguistic::SyncLostError& e) {
        return {{"status", "sync_lost"},
                {"original_word", e.original_index()},
                {"leaked_word", e.watermarked_index()},
                {"reason", std::string(e.what()) + "; raise lambda or edit the document by hand near this word"}};
    }
    nlohmann::json j{{"bits_read", x.bits.size()},
                     {"insertions", x.insertions},
                     {"deletions", x.deletions},
                     {"log", x.log}};
    const std::size_t needed_min = 8 * len;
    if (x.bits.size() < needed_min) {
        j["status"] = "absent";
        j["reason"] = "document too short";
        return j;
    }
    if (std::all_of(x.erased.begin(), x.erased.begin() + static_cast<std::ptrdiff_t>(needed_min), [](bool e) { return e; })) {
        j["status"] = "absent";
        j["erasures"] = std::count(x.erased.begin(), x.erased.end(), true);
        return j;
    }
    // Each deleted eligible word either carried a bit or was a plain synonym.
    // Try every combination, the stream as read first.
    const std::size_t guesses = std::min<std::size_t>(x.deletion_bits.size(), 4);
    for (std::size_t mask = 0; mask < (std::size_t{1} << guesses); ++mask) {
        Bits stream;
        std::vector<std::uint8_t> marks;
        for (std::size_t i = 0, g = 0; i < x.bits.size(); ++i) {
            if (g < guesses && x.deletion_bits[g] == i) {
                if (mask >> g++ & 1) continue;
            }
            stream.push_back(x.bits[i]);
            marks.push_back(x.erased[i]);
        }
        for (unsigned t : parities) {
            const std::size_t nbits = 8 * payload::ecc_length(len, t);
            if (nbits > stream.size()) continue;
            const Bits bits(stream.begin(), stream.begin() + static_cast<std::ptrdiff_t>(nbits));
            std::vector<std::uint8_t> flags(marks.begin(), marks.begin() + static_cast<std::ptrdiff_t>(nbits));
            const auto erased = payload::erased_symbols(flags);
            auto decoded = payload::decode_ecc(bits_to_bytes(bits), len, t, erased);
            if (!decoded) continue;
            if (cfg.seal && !sealer_of(ctx).verify(decoded->payload)) continue;
            j["parity"] = t;
            j["erasures"] = std::count(flags.begin(), flags.end(), 1);
            j["erased_symbols"] = erased.size();
            j["corrected_errors"] = decoded->corrected_errors;
            if (mask) j["carrierless_deletions"] = std::popcount(mask);
            open_into(j, decoded->payload, Channel::linguistic, ctx, auth_failure);
            return j;
        }
    }
    j["erasures"] = std::count(x.erased.begin(), x.erased.end(), true);
    if (cfg.seal) {
        j["status"] = "authentication_failure";
        j["reason"] = "no parity size yields a payload with a valid MAC";
        auth_failure = true;
    } else {
        j["status"] = "undecodable";
    }
    return j;
}

nlohmann::json extract_structural(const pdfio::Document& leaked, const Context& ctx, bool& auth_failure) {
    const std::size_t len = sealed_length(ctx.config, Channel::structural);
    structural::Report r;
    try {
        r = structural::extract(leaked, 8 * len, ctx.config.structural_params);
    } catch (const structural::NoSignalError& e) {
        return {{"status", "absent"}, {"reason", e.what()}, {"confidence", 0.0}};
    }
    nlohmann::json j = r.to_json();
    const auto erasures = std::count(r.erased.begin(), r.erased.end(), true);
    if (r.confidence == 0) {
        j["status"] = "absent";
        return j;
    }
    if (erasures) {
        j["status"] = "incomplete";
        return j;
    }
    open_into(j, bits_to_bytes(r.bits), Channel::structural, ctx, auth_failure);
    return j;
}

nlohmann::json extract_fontmark(const pdfio::Document& leaked, const pdfio::Document& original, const Context& ctx,
                                bool& auth_failure) {
    const std::size_t len = sealed_length(ctx.config, Channel::fontmark);
    try {
        auto bits = fontmark::extract(leaked, original, 8 * len);
        if (!bits) return {{"status", "absent"}};
        nlohmann::json j = nlohmann::json::object();
        open_into(j, bits_to_bytes(*bits), Channel::fontmark, ctx, auth_failure);
        return j;
    } catch (const fontmark::ChannelUnavailable& e) {
        return {{"status", "unavailable"}, {"error", "ChannelUnavailable"}, {"reason", e.what()}};
    } catch (const fontmark::TamperSuspected& e) {
        return {{"status", "tamper_suspected"}, {"error", "TamperSuspected"}, {"reason", e.what()}};
    }
}

} // namespace

ExtractOutcome extract(const std::string& leaked_pdf, const std::string& original_pdf, const Context& ctx) {
    const Config& cfg = ctx.config;
    if (cfg.seed) Csprng::instance().seed_for_testing(*cfg.seed);
    const auto leaked = pdfio::Document::parse(leaked_pdf, cfg.space_threshold);
    const auto original = pdfio::Document::parse(original_pdf, cfg.space_threshold);
    ExtractOutcome out;
    nlohmann::json channels = nlohmann::json::object();
    for (Channel c : kChannels) {
        const std::string name(to_string(c));
        if (!cfg.enabled(c)) {
            channels[name] = {{"status", "disabled"}};
            continue;
        }
        try {
            switch (c) {
            case Channel::linguistic:
                channels[name] = extract_linguistic(leaked, original, ctx, out.authentication_failure);
                break;
            case Channel::structural:
                channels[name] = extract_structural(leaked, ctx, out.authentication_failure);
                break;
            case Channel::fontmark:
                channels[name] = extract_fontmark(leaked, original, ctx, out.authentication_failure);
                break;
            }
        } catch (const Error& e) {
            channels[name] = {{"status", "failed"}, {"error", error_kind(e)}, {"reason", e.what()}};
        }
    }
    out.report = {{"version", kReportVersion}, {"operation", "extract"}, {"channels", channels}};
    return out;
}

} // namespace tracemark::pipeline
