#pragma once

#include <string_view>

#include "tracemark/lexgraph/lexical_source.hpp"

namespace tracemark::lexgraph {

/// The two senses share no common subsumer (different roots or parts of speech).
class DisjointTaxonomies : public Error {
public:
    using Error::Error;
};

/// edge_weight was asked about two words that share no synset.
class NotNeighbours : public Error {
public:
    using Error::Error;
};

enum class Similarity { lin, jcn, wup, lch, res };

Similarity parse_similarity(std::string_view name);
std::string_view to_string(Similarity s);

/// Most specific common ancestor: deepest, then highest ic, then lowest index.
SenseId lcs(const LexicalSource& src, SenseId x, SenseId y);

/// Shortest hypernym path between the senses, counted in nodes (1 for x == y).
std::size_t path_length(const LexicalSource& src, SenseId x, SenseId y);

double sim_wup(const LexicalSource& src, SenseId x, SenseId y);
double sim_lch(const LexicalSource& src, SenseId x, SenseId y);
double sim_res(const LexicalSource& src, SenseId x, SenseId y);
double sim_jcn(const LexicalSource& src, SenseId x, SenseId y);
double sim_lin(const LexicalSource& src, SenseId x, SenseId y);

double similarity(const LexicalSource& src, Similarity kind, SenseId x, SenseId y);

/// Like similarity(), but a pair without common subsumer scores 0 and jcn is
/// clamped to [0, 1] so it can weight graph edges.
double edge_similarity(const LexicalSource& src, Similarity kind, SenseId x, SenseId y);

/// Mean similarity over S(x) x S(y). Throws NotNeighbours unless x and y share a synset.
double edge_weight(const LexicalSource& src, std::string_view x, std::string_view y,
                   std::string_view pos, Similarity kind = Similarity::lin);

} // namespace tracemark::lexgraph
