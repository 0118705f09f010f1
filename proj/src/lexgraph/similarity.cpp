#include "tracemark/lexgraph/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tracemark::lexgraph {

Similarity parse_similarity(std::string_view name) {
    if (name == "lin") return Similarity::lin;
    if (name == "jcn") return Similarity::jcn;
    if (name == "wup") return Similarity::wup;
    if (name == "lch") return Similarity::lch;
    if (name == "res") return Similarity::res;
    throw ConfigurationError("unknown similarity '" + std::string(name) + "'");
}

std::string_view to_string(Similarity s) {
    switch (s) {
    case Similarity::lin: return "lin";
    case Similarity::jcn: return "jcn";
    case Similarity::wup: return "wup";
    case Similarity::lch: return "lch";
    case Similarity::res: return "res";
    }
    return "?";
}

namespace {

void require_same_pos(const LexicalSource& src, SenseId x, SenseId y) {
    if (src.synset(x).pos != src.synset(y).pos) {
        throw DisjointTaxonomies("senses '" + src.synset(x).id + "' and '" + src.synset(y).id +
                                 "' belong to different taxonomies");
    }
}

// Both ancestor lists are sorted by sense id; walk them like a merge.
template <typename Visit>
bool for_each_common(const LexicalSource& src, SenseId x, SenseId y, Visit&& visit) {
    auto ax = src.ancestors(x);
    auto ay = src.ancestors(y);
    bool any = false;
    std::size_t i = 0, j = 0;
    while (i < ax.size() && j < ay.size()) {
        if (ax[i].sense < ay[j].sense) {
            ++i;
        } else if (ay[j].sense < ax[i].sense) {
            ++j;
        } else {
            visit(ax[i].sense, ax[i].distance + ay[j].distance);
            any = true;
            ++i;
            ++j;
        }
    }
    return any;
}

[[noreturn]] void throw_disjoint(const LexicalSource& src, SenseId x, SenseId y) {
    throw DisjointTaxonomies("senses '" + src.synset(x).id + "' and '" + src.synset(y).id +
                             "' have no common subsumer");
}

} // namespace

SenseId lcs(const LexicalSource& src, SenseId x, SenseId y) {
    require_same_pos(src, x, y);
    SenseId best = 0;
    bool found = false;
    for_each_common(src, x, y, [&](SenseId a, std::uint32_t) {
        if (!found) {
            best = a;
            found = true;
            return;
        }
        const Synset& sa = src.synset(a);
        const Synset& sb = src.synset(best);
        if (sa.depth > sb.depth || (sa.depth == sb.depth && sa.ic > sb.ic)) best = a;
    });
    if (!found) throw_disjoint(src, x, y);
    return best;
}

std::size_t path_length(const LexicalSource& src, SenseId x, SenseId y) {
    require_same_pos(src, x, y);
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    bool found = for_each_common(src, x, y, [&](SenseId, std::uint32_t d) { best = std::min(best, d); });
    if (!found) throw_disjoint(src, x, y);
    return best + 1;
}

double sim_wup(const LexicalSource& src, SenseId x, SenseId y) {
    SenseId a = lcs(src, x, y);
    return 2.0 * src.synset(a).depth / (src.synset(x).depth + src.synset(y).depth);
}

double sim_lch(const LexicalSource& src, SenseId x, SenseId y) {
    double len = static_cast<double>(path_length(src, x, y));
    double max_depth = src.max_depth(src.synset(x).pos);
    return -std::log(len / (2.0 * max_depth));
}

double sim_res(const LexicalSource& src, SenseId x, SenseId y) {
    return src.synset(lcs(src, x, y)).ic;
}

double sim_jcn(const LexicalSource& src, SenseId x, SenseId y) {
    SenseId a = lcs(src, x, y);
    if (x == y) return 1.0;
    double distance = src.synset(x).ic + src.synset(y).ic - 2.0 * src.synset(a).ic;
    if (distance <= 0.0) return 1.0;
    return 1.0 / distance;
}

double sim_lin(const LexicalSource& src, SenseId x, SenseId y) {
    SenseId a = lcs(src, x, y);
    double denom = src.synset(x).ic + src.synset(y).ic;
    if (denom <= 0.0) return 0.0;
    return 2.0 * src.synset(a).ic / denom;
}

double similarity(const LexicalSource& src, Similarity kind, SenseId x, SenseId y) {
    switch (kind) {
    case Similarity::lin: return sim_lin(src, x, y);
    case Similarity::jcn: return sim_jcn(src, x, y);
    case Similarity::wup: return sim_wup(src, x, y);
    case Similarity::lch: return sim_lch(src, x, y);
    case Similarity::res: return sim_res(src, x, y);
    }
    return 0.0;
}

double edge_similarity(const LexicalSource& src, Similarity kind, SenseId x, SenseId y) {
    try {
        double s = similarity(src, kind, x, y);
        return kind == Similarity::jcn ? std::clamp(s, 0.0, 1.0) : s;
    } catch (const DisjointTaxonomies&) {
        return 0.0;
    }
}

double edge_weight(const LexicalSource& src, std::string_view x, std::string_view y,
                   std::string_view pos, Similarity kind) {
    auto sx = src.senses(x, pos);
    auto sy = src.senses(y, pos);
    bool share = std::any_of(sx.begin(), sx.end(), [&](SenseId a) {
        return std::find(sy.begin(), sy.end(), a) != sy.end();
    });
    if (!share) {
        throw NotNeighbours("'" + std::string(x) + "' and '" + std::string(y) + "' share no synset");
    }
    double sum = 0.0;
    for (SenseId a : sx) {
        for (SenseId b : sy) sum += edge_similarity(src, kind, a, b);
    }
    return sum / static_cast<double>(sx.size() * sy.size());
}

} // namespace tracemark::lexgraph
