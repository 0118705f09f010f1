#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tracemark/common/bits.hpp"
#include "tracemark/lexgraph/lexgraph.hpp"
#include "tracemark/linguistic/tokens.hpp"

namespace tracemark::linguistic {

/// Extraction could not realign the two word sequences.
class SyncLostError : public Error {
public:
    SyncLostError(std::size_t original_index, std::size_t watermarked_index)
        : Error("lost synchronisation at original word " + std::to_string(original_index) +
                ", watermarked word " + std::to_string(watermarked_index)),
          original_(original_index), watermarked_(watermarked_index) {}
    std::size_t original_index() const noexcept { return original_; }
    std::size_t watermarked_index() const noexcept { return watermarked_; }

private:
    std::size_t original_;
    std::size_t watermarked_;
};

/// Graph queries used by embedding and extraction, over canonical words.
/// Replacement candidates are single words; multi-word entries never substitute.
class Vocabulary {
public:
    Vocabulary(const lexgraph::LexGraph& graph, const lexgraph::GraphKey& key) : graph_(graph), key_(key) {}

    /// The word's part of speech when the graph knows exactly one.
    std::optional<std::string> pos(const std::string& canon) const;
    /// Word can carry either bit: touchable, unambiguous pos, labelled candidates for 0 and 1.
    bool eligible(const Token& t) const;
    const std::vector<lexgraph::Neighbour>& candidates(const std::string& canon, unsigned bit) const;
    /// Non-homograph single-word neighbours, by descending weight.
    std::vector<lexgraph::Neighbour> plain_synonyms(const std::string& canon) const;

    bool is_neighbour(const std::string& a, const std::string& b) const;
    bool is_homograph(const std::string& canon) const;
    /// Homograph words adjacent to both a and b, sorted.
    std::vector<std::string> common_homograph_neighbours(const std::string& a, const std::string& b) const;
    bool related(const std::string& a, const std::string& b) const;
    unsigned label(const std::string& a, const std::string& b) const;

    const lexgraph::LexGraph& graph() const noexcept { return graph_; }

private:
    const std::unordered_set<std::string>& neighbour_set(const std::string& canon) const;

    const lexgraph::LexGraph& graph_;
    const lexgraph::GraphKey& key_;
    mutable std::unordered_map<std::string, std::unordered_set<std::string>> neighbours_;
    mutable std::map<std::pair<std::string, unsigned>, std::vector<lexgraph::Neighbour>> candidates_;
};

enum class Justification { none, coefficient, no_longer_lines, exact_width };
Justification parse_justification(std::string_view name);
std::string_view to_string(Justification j);

/// q(j) for replacing a word of `original_len` letters by one of `candidate_len`
/// given |F_j| following touchable words and prefix letter counts P_j, P_wj.
double justification_coefficient(std::size_t following, long prefix_original, long prefix_watermarked,
                                  long original_len, long candidate_len);

struct EmbedOptions {
    Justification mode = Justification::no_longer_lines;
    /// Can the document's font set this word at token j? Defaults to yes.
    std::function<bool(std::size_t, const std::string&)> settable;
    /// exact-width mode: rendered width of a word at token j.
    std::function<double(std::size_t, const std::string&)> width;
    /// exact-width mode: allowed total width change of a line, [min, max].
    std::function<std::pair<double, double>(std::size_t)> line_slack;
};

struct Substitution {
    std::size_t index = 0;
    std::string original;
    std::string replacement;
    /// False for a plain synonym chosen to skip a bit.
    bool carries_bit = true;
    unsigned bit = 0;
};

struct EmbedResult {
    /// False when the document ended before every bit was placed.
    bool complete = false;
    std::vector<std::string> words;
    std::vector<Substitution> substitutions;
    std::size_t bits_embedded = 0;
    /// Bits consumed by a word left unchanged; extraction reads them as erasures.
    std::size_t forced_erasures = 0;
    std::size_t skipped = 0;
    std::vector<std::size_t> erased_positions;
};

EmbedResult embed(const WordSequence& d, const Bits& payload, const Vocabulary& vocab, const EmbedOptions& options = {});

/// Number of eligible words: an upper bound on the embeddable bits.
std::size_t max_bits(const WordSequence& d, const Vocabulary& vocab);

struct ExtractOptions {
    std::size_t lambda = 2;
    /// Following word pairs that must agree before a resynchronisation is
    /// accepted; 0 takes the first insertion or deletion that matches.
    std::size_t confirm = 3;
    /// On desync assume a single inserted word instead of searching.
    bool simplified = false;
    std::optional<std::size_t> max_bits;
};

struct ExtractResult {
    Bits bits;
    std::vector<bool> erased;
    std::vector<std::string> log;
    std::size_t insertions = 0;
    std::size_t deletions = 0;
    /// Bit positions filled with erasures for deleted eligible words. A
    /// deleted word may have been a plain synonym that carried nothing, so
    /// each of these is only a guess.
    std::vector<std::size_t> deletion_bits;
};

ExtractResult extract(const WordSequence& d, const WordSequence& dw, const Vocabulary& vocab,
                      const ExtractOptions& options = {});

/// Offset x in 1..lambda such that d[j] relates to dw[l + x].
std::optional<std::size_t> check_inserted(const WordSequence& d, const WordSequence& dw, std::size_t j,
                                          std::size_t l, std::size_t lambda, const Vocabulary& vocab);
/// Offset x in 1..lambda such that dw[l] relates to d[j + x], with the number
/// of eligible originals among d[j .. j+x-1].
std::optional<std::pair<std::size_t, std::size_t>> check_deleted(const WordSequence& d, const WordSequence& dw,
                                                                 std::size_t j, std::size_t l, std::size_t lambda,
                                                                 const Vocabulary& vocab);

/// Bit carried by `replacement` substituted for `original`.
unsigned extract_bit(const std::string& original, const std::string& replacement, const Vocabulary& vocab);

} // namespace tracemark::linguistic
