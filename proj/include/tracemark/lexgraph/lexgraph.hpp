#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tracemark/lexgraph/graph_key.hpp"
#include "tracemark/lexgraph/lexical_source.hpp"
#include "tracemark/lexgraph/similarity.hpp"

namespace tracemark::lexgraph {

using VertexId = std::uint32_t;

struct Vertex {
    std::string word;
    std::string pos;
    bool homograph = false;
};

struct Edge {
    VertexId a;
    VertexId b;
    double weight;
};

/// Tagged graphs only: a <word, sense> vertex.
struct SenseVertex {
    std::string word;
    std::string pos;
    std::string synset;
};

/// Tagged graphs only: <word, sense> -> generic word vertex.
struct TaggedEdge {
    std::uint32_t sense;
    VertexId word;
    double weight;
};

struct Adjacent {
    VertexId vertex;
    double weight;
};

struct Neighbour {
    std::string word;
    double weight;

    bool operator==(const Neighbour&) const = default;
};

struct BuildOptions {
    Similarity similarity = Similarity::lin;
    bool parallel = true;
};

/// Collapsed word graph G_w. One vertex per (spelling, pos); two vertices are
/// adjacent iff they share a synset. Edge weights and homograph flags are
/// key-independent; homograph labels are derived on demand from a GraphKey.
///
/// A tagged graph instead links <word, sense> vertices to generic word
/// vertices and carries no word-word edges.
///
/// Immutable once built; concurrent readers need no synchronisation.
class LexGraph {
public:
    static LexGraph build(const LexicalSource& src, BuildOptions options = {});
    static LexGraph build_tagged(const LexicalSource& src, BuildOptions options = {});

    static LexGraph from_json(const nlohmann::json& doc);
    static LexGraph load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    void save(const std::filesystem::path& path) const;

    bool tagged() const noexcept { return tagged_; }
    Similarity similarity_kind() const noexcept { return similarity_; }
    std::span<const Vertex> vertices() const noexcept { return vertices_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const SenseVertex> senses() const noexcept { return senses_; }
    std::span<const TaggedEdge> tagged_edges() const noexcept { return tagged_edges_; }

    std::optional<VertexId> find(std::string_view word, std::string_view pos) const;
    std::vector<std::string> pos_of(std::string_view word) const;
    const Vertex& vertex(VertexId v) const { return vertices_.at(v); }
    bool is_homograph(std::string_view word, std::string_view pos) const;

    /// Word-word adjacency (plain graph) of a vertex, sorted by vertex id.
    std::span<const Adjacent> adjacency(VertexId v) const { return adjacency_.at(v); }
    std::optional<double> weight(std::string_view a, std::string_view b, std::string_view pos) const;

    std::optional<std::uint32_t> find_sense(std::string_view word, std::string_view pos,
                                            std::string_view synset) const;
    std::span<const Adjacent> sense_adjacency(std::uint32_t sense) const {
        return sense_adjacency_.at(sense);
    }

    /// Homograph neighbours y of x with label(x, y) == bit, by descending
    /// weight then word. Unknown words yield an empty list.
    std::vector<Neighbour> neighbours(std::string_view word, std::string_view pos, unsigned bit,
                                      const GraphKey& key) const;

    /// Tagged-graph counterpart: neighbours of <word, synset>.
    std::vector<Neighbour> tagged_neighbours(std::string_view word, std::string_view pos,
                                             std::string_view synset, unsigned bit,
                                             const GraphKey& key) const;

    /// All neighbours regardless of label or homograph status.
    std::vector<Neighbour> all_neighbours(std::string_view word, std::string_view pos) const;

private:
    void index();
    std::vector<Neighbour> labelled(std::string_view word, std::span<const Adjacent> adj,
                                    unsigned bit, const GraphKey& key) const;

    bool tagged_ = false;
    Similarity similarity_ = Similarity::lin;
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    std::vector<SenseVertex> senses_;
    std::vector<TaggedEdge> tagged_edges_;

    std::map<std::pair<std::string, std::string>, VertexId, std::less<>> by_word_;
    std::map<std::tuple<std::string, std::string, std::string>, std::uint32_t, std::less<>> by_sense_;
    std::vector<std::vector<Adjacent>> adjacency_;
    std::vector<std::vector<Adjacent>> sense_adjacency_;
};

/// Weights are stored rounded to 9 decimals so that built and reloaded graphs agree exactly.
double round_weight(double w);

} // namespace tracemark::lexgraph
