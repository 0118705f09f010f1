#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "tracemark/common/error.hpp"

namespace tracemark::lexgraph {

/// Malformed lexical-source file; carries the offending synset id when known.
class SourceParseError : public Error {
public:
    SourceParseError(std::string synset_id, const std::string& what)
        : Error(synset_id.empty() ? what : "synset '" + synset_id + "': " + what),
          synset_id_(std::move(synset_id)) {}
    const std::string& synset_id() const noexcept { return synset_id_; }

private:
    std::string synset_id_;
};

/// Index of a synset inside its LexicalSource. Every sense of a word is a synset.
using SenseId = std::uint32_t;

struct Synset {
    std::string id;
    std::string pos;
    std::vector<std::string> members;
    double ic = 0.0;
    int depth = 1;
    std::vector<std::string> hypernyms;
};

struct Ancestor {
    SenseId sense;
    std::uint32_t distance;
};

/// A validated WordNet-style taxonomy: synsets with precomputed information
/// content and depth, linked by hypernym references.
///
/// Members are stored canonicalized. Validation rejects dangling or cross-pos
/// hypernyms, roots whose depth is not 1, children not deeper than their
/// parents, and information content that decreases from a parent to a child.
class LexicalSource {
public:
    LexicalSource() = default;
    LexicalSource(std::map<std::string, int> max_depth, std::vector<Synset> synsets);

    static LexicalSource from_json(const nlohmann::json& doc);
    static LexicalSource load(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    const std::vector<Synset>& synsets() const noexcept { return synsets_; }
    const Synset& synset(SenseId id) const { return synsets_.at(id); }
    std::optional<SenseId> find(std::string_view synset_id) const;

    /// S(x): synsets containing `word` with the given part of speech.
    std::span<const SenseId> senses(std::string_view word, std::string_view pos) const;
    std::vector<std::string> pos_of(std::string_view word) const;

    int max_depth(std::string_view pos) const;
    std::size_t sense_count(std::string_view pos) const;
    const std::map<std::string, int>& taxonomies() const noexcept { return max_depth_; }

    /// Hypernym closure of `id` including itself at distance 0, shortest distances.
    std::span<const Ancestor> ancestors(SenseId id) const { return ancestors_.at(id); }

    /// Every distinct (word, pos) pair, sorted by word then pos.
    std::vector<std::pair<std::string, std::string>> words() const;

private:
    void index();

    std::map<std::string, int> max_depth_;
    std::vector<Synset> synsets_;
    std::unordered_map<std::string, SenseId> by_id_;
    std::map<std::pair<std::string, std::string>, std::vector<SenseId>, std::less<>> by_word_;
    std::vector<std::vector<Ancestor>> ancestors_;
    std::map<std::string, std::size_t, std::less<>> sense_count_;
};

} // namespace tracemark::lexgraph
