// tracemark: embed and extract traceable watermarks in PDF files.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "tracemark/common/random.hpp"
#include "tracemark/lexgraph/lexgraph.hpp"
#include "tracemark/payload/ecc.hpp"
#include "tracemark/payload/keyfile.hpp"
#include "tracemark/payload/seal.hpp"
#include "tracemark/pdfio/document.hpp"
#include "tracemark/pipeline/attack.hpp"
#include "tracemark/pipeline/pipeline.hpp"

namespace fs = std::filesystem;
using namespace tracemark;
using nlohmann::json;

namespace {

enum Exit { ok = 0, usage = 2, channel_failure = 3, authentication = 4 };

bool verbose = false;

void log(const std::string& msg) {
    if (verbose) std::cerr << "tracemark: " << msg << "\n";
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigurationError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigurationError("cannot write " + p.string());
    out << bytes;
}

struct Common {
    std::string config_path;
    std::vector<std::string> settings;
    std::string graph;
    std::string keys;
    std::string log;
    std::string channels;
    std::optional<std::size_t> lambda;
    std::optional<std::uint64_t> seed;

    pipeline::Config config() const {
        pipeline::Config cfg = config_path.empty() ? pipeline::Config{} : pipeline::Config::load(config_path);
        for (const std::string& kv : settings) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ConfigurationError("--set expects key=value, got '" + kv + "'");
            cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!graph.empty()) cfg.graph = graph;
        if (!keys.empty()) cfg.keys = keys;
        if (!log.empty()) cfg.log = log;
        if (!channels.empty()) cfg.set("channels", channels);
        if (lambda) cfg.lambda = *lambda;
        if (seed) cfg.seed = *seed;
        return cfg;
    }
};

// Everything a pipeline run needs, loaded once per process or per batch worker.
struct Session {
    pipeline::Config config;
    std::optional<lexgraph::LexGraph> own_graph;
    const lexgraph::LexGraph* graph = nullptr;
    std::optional<tracelog::Store> store;
    payload::KeySet keys;

    explicit Session(pipeline::Config cfg, const lexgraph::LexGraph* shared = nullptr)
        : config(std::move(cfg)), graph(shared) {
        if (config.keys.empty()) throw ConfigurationError("no key file given (--keys or keys = ...)");
        keys = payload::load_keys(config.keys);
        if (config.linguistic && !graph) {
            if (config.graph.empty()) throw ConfigurationError("the linguistic channel needs --graph");
            own_graph = lexgraph::LexGraph::load(config.graph);
            graph = &*own_graph;
            log("loaded graph " + config.graph);
        }
        if (!config.log.empty()) store = tracelog::Store::open(config.log, config.log_mode);
    }

    pipeline::Context context() { return {config, graph, keys, store ? &*store : nullptr}; }
};

struct EmbedArgs {
    std::string in;
    std::string out;
    std::string payload;
    std::uint64_t user_id = 0;
    std::string timestamp;
    std::uint64_t document_id = 0;
    std::string ip = "127.0.0.1";
};

pipeline::Request request_of(const EmbedArgs& a, pipeline::Config& cfg) {
    pipeline::Request req;
    if (!a.payload.empty()) {
        req.raw = from_hex(a.payload);
        cfg.raw_length = req.raw->size();
        cfg.linguistic_payload = cfg.structural_payload = cfg.fontmark_payload = pipeline::PayloadMode::raw;
    }
    req.user_id = a.user_id;
    if (!a.timestamp.empty()) req.timestamp = payload::parse_iso8601(a.timestamp);
    req.document_id = a.document_id;
    req.ip_addr = a.ip;
    return req;
}

int cmd_graph_build(const std::string& source, const std::string& out, const std::string& similarity, bool tagged,
                    bool serial) {
    const auto src = lexgraph::LexicalSource::load(source);
    lexgraph::BuildOptions opts{lexgraph::parse_similarity(similarity), !serial};
    const auto g = tagged ? lexgraph::LexGraph::build_tagged(src, opts) : lexgraph::LexGraph::build(src, opts);
    g.save(out);
    std::size_t homographs = 0;
    for (const auto& v : g.vertices()) homographs += v.homograph ? 1 : 0;
    std::cout << json{{"vertices", g.vertices().size()},
                      {"edges", tagged ? g.tagged_edges().size() : g.edges().size()},
                      {"homographs", homographs},
                      {"similarity", lexgraph::to_string(g.similarity_kind())},
                      {"tagged", tagged}}
                     .dump(2)
              << "\n";
    return ok;
}

int cmd_keygen(const std::string& out) {
    payload::save_keys(payload::generate_keys(), out);
    std::cout << json{{"keys", out}}.dump(2) << "\n";
    return ok;
}

int cmd_embed(const Common& common, const EmbedArgs& args) {
    pipeline::Config cfg = common.config();
    const auto req = request_of(args, cfg);
    Session s(cfg);
    const auto result = pipeline::embed(read_file(args.in), req, s.context());
    if (result.any_embedded) write_file(args.out, result.pdf);
    std::cout << result.report.dump(2) << "\n";
    return result.any_embedded ? ok : channel_failure;
}

int cmd_extract(const Common& common, const std::string& leaked, const std::string& original,
                const std::string& payload_length) {
    pipeline::Config cfg = common.config();
    if (!payload_length.empty()) {
        cfg.raw_length = std::stoul(payload_length);
        cfg.linguistic_payload = cfg.structural_payload = cfg.fontmark_payload = pipeline::PayloadMode::raw;
    }
    Session s(cfg);
    const auto result = pipeline::extract(read_file(leaked), read_file(original), s.context());
    std::cout << result.report.dump(2) << "\n";
    for (const auto& [name, ch] : result.report["channels"].items()) {
        if (ch.value("status", "") == "sync_lost") log(name + ": " + ch.value("reason", ""));
    }
    return result.authentication_failure ? authentication : ok;
}

int cmd_attack(const Common& common, const std::string& in, const std::string& script, const std::string& out,
               const std::string& original) {
    const auto cfg = common.config();
    const auto steps = pipeline::parse_attack_script(read_file(script));
    std::optional<std::string> orig;
    if (!original.empty()) orig = read_file(original);
    write_file(out, pipeline::apply_attack(read_file(in), steps, orig, cfg.space_threshold));
    std::cout << json{{"steps", steps.size()}, {"out", out}}.dump(2) << "\n";
    return ok;
}

int cmd_dump(const Common& common, const std::string& in) {
    const auto cfg = common.config();
    const auto doc = pdfio::Document::parse(read_file(in), cfg.space_threshold);
    json lines = json::array();
    for (const auto& line : doc.lines()) {
        json words = json::array();
        for (std::size_t w : line.words) words.push_back(doc.words()[w].text);
        json gaps = json::array();
        for (std::size_t g : line.gaps) gaps.push_back(doc.gaps()[g].width);
        lines.push_back({{"page", line.page}, {"baseline", line.baseline}, {"words", words}, {"gaps", gaps}});
    }
    std::cout << json{{"pages", doc.pages().size()}, {"words", doc.words().size()}, {"lines", lines}}.dump(2) << "\n";
    return ok;
}

// Manifest: JSON array of {"in", "out", "user_id", "document_id", "timestamp", "ip", "payload"}.
int cmd_batch(const Common& common, const std::string& manifest, unsigned jobs) {
    const json items = json::parse(read_file(manifest));
    if (!items.is_array()) throw ConfigurationError("batch manifest must be a JSON array");
    const pipeline::Config base = common.config();
    // A pinned seed is only reproducible when documents run one after another.
    if (base.seed) jobs = 1;
    jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(items.size())));

    std::optional<lexgraph::LexGraph> graph;
    if (base.linguistic) {
        if (base.graph.empty()) throw ConfigurationError("the linguistic channel needs --graph");
        graph = lexgraph::LexGraph::load(base.graph);
    }
    std::vector<json> reports(items.size());
    std::vector<bool> embedded(items.size(), false);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            const json& item = items[i];
            try {
                EmbedArgs a;
                a.in = item.at("in").get<std::string>();
                a.out = item.at("out").get<std::string>();
                a.payload = item.value("payload", "");
                a.user_id = item.value("user_id", std::uint64_t{0});
                a.timestamp = item.value("timestamp", "");
                a.document_id = item.value("document_id", std::uint64_t{0});
                a.ip = item.value("ip", "127.0.0.1");
                pipeline::Config cfg = base;
                const auto req = request_of(a, cfg);
                Session s(cfg, graph ? &*graph : nullptr);
                auto result = pipeline::embed(read_file(a.in), req, s.context());
                if (result.any_embedded) write_file(a.out, result.pdf);
                embedded[i] = result.any_embedded;
                reports[i] = std::move(result.report);
                reports[i]["in"] = a.in;
            } catch (const std::exception& e) {
                reports[i] = {{"in", item.value("in", "")}, {"error", e.what()}};
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::cout << json(reports).dump(2) << "\n";
    return std::all_of(embedded.begin(), embedded.end(), [](bool b) { return b; }) ? ok : channel_failure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Embed and extract traceable watermarks in PDF documents"};
    app.require_subcommand(1);
    Common common;
    app.add_option("-c,--config", common.config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", common.settings, "override one configuration key (key=value)");
    app.add_option("--graph", common.graph, "compiled lexical graph");
    app.add_option("--keys", common.keys, "key file");
    app.add_option("--log", common.log, "download log database");
    app.add_option("--channels", common.channels, "comma-separated subset of linguistic,structural,fontmark");
    app.add_option("--lambda", common.lambda, "unexplained words tolerated during resynchronisation");
    app.add_option("--seed", common.seed, "test mode: pin the random generator");
    app.add_flag("-v,--verbose", verbose, "log progress to stderr");

    std::string source, out, similarity = "lin";
    bool tagged = false, serial = false;
    auto* gb = app.add_subcommand("graph-build", "compile a lexical source into a weighted graph");
    gb->add_option("source", source, "lexical source JSON")->required();
    gb->add_option("-o,--out", out, "output graph JSON")->required();
    gb->add_option("--similarity", similarity, "lin, jcn, wup, lch or res");
    gb->add_flag("--tagged", tagged, "build a sense-tagged graph");
    gb->add_flag("--serial", serial, "use the single-threaded weight kernel");

    std::string key_out;
    auto* kg = app.add_subcommand("keygen", "write a fresh key file");
    kg->add_option("-o,--out", key_out, "key file")->required();

    EmbedArgs ea;
    auto* em = app.add_subcommand("embed", "watermark a PDF");
    em->add_option("input", ea.in, "original PDF")->required()->check(CLI::ExistingFile);
    em->add_option("-o,--out", ea.out, "watermarked PDF")->required();
    em->add_option("--payload", ea.payload, "raw payload in hex, e.g. 0xA6A3CA; every channel carries it");
    em->add_option("--user", ea.user_id, "user id");
    em->add_option("--timestamp", ea.timestamp, "download time, YYYY-MM-DDThh:mm:ssZ (default: now)");
    em->add_option("--document", ea.document_id, "document id for the download log");
    em->add_option("--ip", ea.ip, "requesting address for the download log");

    std::string leaked, original, raw_length;
    auto* ex = app.add_subcommand("extract", "recover watermarks from a leaked PDF");
    ex->add_option("leaked", leaked, "leaked PDF")->required()->check(CLI::ExistingFile);
    ex->add_option("--original", original, "archived original PDF")->required()->check(CLI::ExistingFile);
    ex->add_option("--payload-length", raw_length, "expect raw payloads of this many bytes");

    std::string attack_in, script, attack_out, attack_original;
    auto* at = app.add_subcommand("attack", "apply a scripted modification");
    at->add_option("input", attack_in, "PDF to modify")->required()->check(CLI::ExistingFile);
    at->add_option("-s,--script", script, "attack script")->required()->check(CLI::ExistingFile);
    at->add_option("-o,--out", attack_out, "modified PDF")->required();
    at->add_option("--original", attack_original, "original PDF, for revert steps")->check(CLI::ExistingFile);

    std::string dump_in;
    auto* du = app.add_subcommand("dump", "print the words, lines and spaces of a PDF");
    du->add_option("input", dump_in, "PDF")->required()->check(CLI::ExistingFile);

    std::string manifest;
    unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
    auto* ba = app.add_subcommand("batch", "embed many documents concurrently");
    ba->add_option("manifest", manifest, "JSON array of embed jobs")->required()->check(CLI::ExistingFile);
    ba->add_option("-j,--jobs", jobs, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*gb) return cmd_graph_build(source, out, similarity, tagged, serial);
        if (*kg) return cmd_keygen(key_out);
        if (*em) return cmd_embed(common, ea);
        if (*ex) return cmd_extract(common, leaked, original, raw_length);
        if (*at) return cmd_attack(common, attack_in, script, attack_out, attack_original);
        if (*du) return cmd_dump(common, dump_in);
        if (*ba) return cmd_batch(common, manifest, jobs);
    } catch (const payload::AuthenticationFailure& e) {
        std::cerr << "tracemark: " << e.what() << "\n";
        return authentication;
    } catch (const payload::EmbeddingCapacityError& e) {
        std::cerr << "tracemark: " << e.what() << "\n";
        return channel_failure;
    } catch (const std::exception& e) {
        std::cerr << "tracemark: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
