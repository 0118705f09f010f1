#include "tracemark/lexgraph/lexgraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "tracemark/common/text.hpp"
#include "tracemark/lexgraph/weights.hpp"

namespace tracemark::lexgraph {

double round_weight(double w) { return std::round(w * 1e9) / 1e9; }

namespace {

void require_edge_similarity(Similarity kind) {
    if (kind != Similarity::lin && kind != Similarity::jcn) {
        throw ConfigurationError("graph weights need a [0,1] similarity (lin or jcn), got " +
                                 std::string(to_string(kind)));
    }
}

void run_kernel(const LexicalSource& src, const BuildOptions& options,
                std::span<const WeightJob> jobs, std::span<double> out) {
    if (options.parallel) {
        average_similarity_parallel(src, options.similarity, jobs, out);
    } else {
        average_similarity_serial(src, options.similarity, jobs, out);
    }
    for (double& w : out) w = round_weight(w);
}

// A word is a homograph when two of its synsets share no member besides itself.
bool disjoint_senses(const LexicalSource& src, const std::string& word,
                     std::span<const SenseId> senses) {
    for (std::size_t i = 0; i < senses.size(); ++i) {
        for (std::size_t j = i + 1; j < senses.size(); ++j) {
            const auto& a = src.synset(senses[i]).members;
            const auto& b = src.synset(senses[j]).members;
            bool overlap = std::any_of(a.begin(), a.end(), [&](const std::string& m) {
                return m != word && std::find(b.begin(), b.end(), m) != b.end();
            });
            if (!overlap) return true;
        }
    }
    return false;
}

std::vector<Vertex> collect_vertices(const LexicalSource& src) {
    std::vector<Vertex> vertices;
    for (auto& [word, pos] : src.words()) {
        vertices.push_back({word, pos, disjoint_senses(src, word, src.senses(word, pos))});
    }
    return vertices;
}

} // namespace

LexGraph LexGraph::build(const LexicalSource& src, BuildOptions options) {
    require_edge_similarity(options.similarity);
    LexGraph g;
    g.similarity_ = options.similarity;
    g.vertices_ = collect_vertices(src);
    g.index();

    std::set<std::pair<VertexId, VertexId>> pairs;
    for (const Synset& s : src.synsets()) {
        for (std::size_t i = 0; i < s.members.size(); ++i) {
            for (std::size_t j = i + 1; j < s.members.size(); ++j) {
                VertexId a = *g.find(s.members[i], s.pos);
                VertexId b = *g.find(s.members[j], s.pos);
                pairs.emplace(std::min(a, b), std::max(a, b));
            }
        }
    }

    std::vector<WeightJob> jobs;
    jobs.reserve(pairs.size());
    for (auto [a, b] : pairs) {
        jobs.push_back({src.senses(g.vertices_[a].word, g.vertices_[a].pos),
                        src.senses(g.vertices_[b].word, g.vertices_[b].pos)});
    }
    std::vector<double> weights(jobs.size());
    run_kernel(src, options, jobs, weights);

    std::size_t k = 0;
    for (auto [a, b] : pairs) g.edges_.push_back({a, b, weights[k++]});
    g.index();
    return g;
}

LexGraph LexGraph::build_tagged(const LexicalSource& src, BuildOptions options) {
    require_edge_similarity(options.similarity);
    LexGraph g;
    g.tagged_ = true;
    g.similarity_ = options.similarity;
    g.vertices_ = collect_vertices(src);
    g.index();

    std::vector<SenseId> sense_ids;
    for (SenseId id = 0; id < src.synsets().size(); ++id) {
        const Synset& s = src.synset(id);
        for (const auto& m : s.members) {
            g.senses_.push_back({m, s.pos, s.id});
            sense_ids.push_back(id);
        }
    }
    std::vector<std::uint32_t> order(g.senses_.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const auto& x = g.senses_[a];
        const auto& y = g.senses_[b];
        return std::tie(x.word, x.pos, x.synset) < std::tie(y.word, y.pos, y.synset);
    });
    std::vector<SenseVertex> sorted;
    std::vector<SenseId> sorted_ids;
    for (auto i : order) {
        sorted.push_back(g.senses_[i]);
        sorted_ids.push_back(sense_ids[i]);
    }
    g.senses_ = std::move(sorted);
    sense_ids = std::move(sorted_ids);

    struct Pending {
        std::uint32_t sense;
        VertexId word;
    };
    std::vector<Pending> pending;
    std::vector<WeightJob> jobs;
    for (std::uint32_t sv = 0; sv < g.senses_.size(); ++sv) {
        const Synset& s = src.synset(sense_ids[sv]);
        for (const auto& m : s.members) {
            if (m == g.senses_[sv].word) continue;
            VertexId y = *g.find(m, s.pos);
            pending.push_back({sv, y});
            jobs.push_back({std::span<const SenseId>(&sense_ids[sv], 1), src.senses(m, s.pos)});
        }
    }
    std::vector<double> weights(jobs.size());
    run_kernel(src, options, jobs, weights);
    for (std::size_t i = 0; i < pending.size(); ++i) {
        g.tagged_edges_.push_back({pending[i].sense, pending[i].word, weights[i]});
    }
    g.index();
    return g;
}

void LexGraph::index() {
    by_word_.clear();
    for (VertexId v = 0; v < vertices_.size(); ++v) {
        by_word_.emplace(std::pair(vertices_[v].word, vertices_[v].pos), v);
    }
    by_sense_.clear();
    for (std::uint32_t s = 0; s < senses_.size(); ++s) {
        by_sense_.emplace(std::tuple(senses_[s].word, senses_[s].pos, senses_[s].synset), s);
    }
    adjacency_.assign(vertices_.size(), {});
    for (const Edge& e : edges_) {
        adjacency_.at(e.a).push_back({e.b, e.weight});
        adjacency_.at(e.b).push_back({e.a, e.weight});
    }
    for (auto& adj : adjacency_) {
        std::sort(adj.begin(), adj.end(),
                  [](const Adjacent& x, const Adjacent& y) { return x.vertex < y.vertex; });
    }
    sense_adjacency_.assign(senses_.size(), {});
    for (const TaggedEdge& e : tagged_edges_) {
        sense_adjacency_.at(e.sense).push_back({e.word, e.weight});
    }
    for (auto& adj : sense_adjacency_) {
        std::sort(adj.begin(), adj.end(),
                  [](const Adjacent& x, const Adjacent& y) { return x.vertex < y.vertex; });
    }
}

std::optional<VertexId> LexGraph::find(std::string_view word, std::string_view pos) const {
    auto it = by_word_.find(std::pair<std::string, std::string>(canonical(word), std::string(pos)));
    if (it == by_word_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> LexGraph::pos_of(std::string_view word) const {
    std::string w = canonical(word);
    std::vector<std::string> out;
    for (auto it = by_word_.lower_bound(std::pair<std::string, std::string>(w, ""));
         it != by_word_.end() && it->first.first == w; ++it) {
        out.push_back(it->first.second);
    }
    return out;
}

bool LexGraph::is_homograph(std::string_view word, std::string_view pos) const {
    auto v = find(word, pos);
    return v && vertices_[*v].homograph;
}

std::optional<double> LexGraph::weight(std::string_view a, std::string_view b,
                                       std::string_view pos) const {
    auto va = find(a, pos);
    auto vb = find(b, pos);
    if (!va || !vb) return std::nullopt;
    const auto& adj = adjacency_[*va];
    auto it = std::lower_bound(adj.begin(), adj.end(), *vb,
                               [](const Adjacent& x, VertexId v) { return x.vertex < v; });
    if (it == adj.end() || it->vertex != *vb) return std::nullopt;
    return it->weight;
}

std::optional<std::uint32_t> LexGraph::find_sense(std::string_view word, std::string_view pos,
                                                  std::string_view synset) const {
    auto it = by_sense_.find(std::tuple<std::string, std::string, std::string>(
        canonical(word), std::string(pos), std::string(synset)));
    if (it == by_sense_.end()) return std::nullopt;
    return it->second;
}

std::vector<Neighbour> LexGraph::labelled(std::string_view word, std::span<const Adjacent> adj,
                                          unsigned bit, const GraphKey& key) const {
    std::vector<Neighbour> out;
    for (const Adjacent& a : adj) {
        const Vertex& y = vertices_[a.vertex];
        if (y.homograph && label(word, y.word, key) == bit) out.push_back({y.word, a.weight});
    }
    std::sort(out.begin(), out.end(), [](const Neighbour& x, const Neighbour& y) {
        return x.weight != y.weight ? x.weight > y.weight : x.word < y.word;
    });
    return out;
}

std::vector<Neighbour> LexGraph::neighbours(std::string_view word, std::string_view pos,
                                            unsigned bit, const GraphKey& key) const {
    auto v = find(word, pos);
    if (!v) return {};
    return labelled(vertices_[*v].word, adjacency_[*v], bit, key);
}

std::vector<Neighbour> LexGraph::tagged_neighbours(std::string_view word, std::string_view pos,
                                                   std::string_view synset, unsigned bit,
                                                   const GraphKey& key) const {
    auto s = find_sense(word, pos, synset);
    if (!s) return {};
    return labelled(senses_[*s].word, sense_adjacency_[*s], bit, key);
}

std::vector<Neighbour> LexGraph::all_neighbours(std::string_view word, std::string_view pos) const {
    auto v = find(word, pos);
    if (!v) return {};
    std::vector<Neighbour> out;
    for (const Adjacent& a : adjacency_[*v]) out.push_back({vertices_[a.vertex].word, a.weight});
    return out;
}

nlohmann::json LexGraph::to_json() const {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["similarity"] = std::string(to_string(similarity_));
    doc["vertices"] = nlohmann::json::array();
    for (const Vertex& v : vertices_) {
        doc["vertices"].push_back({{"word", v.word}, {"pos", v.pos}, {"homograph", v.homograph}});
    }
    doc["edges"] = nlohmann::json::array();
    for (const Edge& e : edges_) {
        doc["edges"].push_back({{"a", e.a}, {"b", e.b}, {"weight", round_weight(e.weight)}});
    }
    if (tagged_) {
        doc["kind"] = "tagged";
        doc["senses"] = nlohmann::json::array();
        for (const SenseVertex& s : senses_) {
            doc["senses"].push_back({{"word", s.word}, {"pos", s.pos}, {"synset", s.synset}});
        }
        doc["tagged_edges"] = nlohmann::json::array();
        for (const TaggedEdge& e : tagged_edges_) {
            doc["tagged_edges"].push_back(
                {{"sense", e.sense}, {"word", e.word}, {"weight", round_weight(e.weight)}});
        }
    }
    return doc;
}

LexGraph LexGraph::from_json(const nlohmann::json& doc) {
    try {
        if (doc.value("version", 0) != 1) throw Error("unsupported graph file version");
        LexGraph g;
        g.similarity_ = parse_similarity(doc.value("similarity", std::string("lin")));
        g.tagged_ = doc.value("kind", std::string("plain")) == "tagged";
        for (const auto& v : doc.at("vertices")) {
            g.vertices_.push_back(
                {v.at("word").get<std::string>(), v.at("pos").get<std::string>(), v.at("homograph").get<bool>()});
        }
        for (const auto& e : doc.at("edges")) {
            Edge edge{e.at("a").get<VertexId>(), e.at("b").get<VertexId>(), e.at("weight").get<double>()};
            if (edge.a >= g.vertices_.size() || edge.b >= g.vertices_.size()) {
                throw Error("graph edge references unknown vertex");
            }
            g.edges_.push_back(edge);
        }
        if (g.tagged_) {
            for (const auto& s : doc.at("senses")) {
                g.senses_.push_back({s.at("word").get<std::string>(), s.at("pos").get<std::string>(),
                                     s.at("synset").get<std::string>()});
            }
            for (const auto& e : doc.at("tagged_edges")) {
                TaggedEdge edge{e.at("sense").get<std::uint32_t>(), e.at("word").get<VertexId>(),
                                e.at("weight").get<double>()};
                if (edge.sense >= g.senses_.size() || edge.word >= g.vertices_.size()) {
                    throw Error("tagged edge references unknown vertex");
                }
                g.tagged_edges_.push_back(edge);
            }
        }
        g.index();
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed graph file: ") + e.what());
    }
}

LexGraph LexGraph::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open graph file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed graph file " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

void LexGraph::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write graph file " + path.string());
    out << to_json().dump() << '\n';
}

} // namespace tracemark::lexgraph
