#include "tracemark/lexgraph/lexical_source.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>

#include "tracemark/common/text.hpp"

namespace tracemark::lexgraph {

LexicalSource::LexicalSource(std::map<std::string, int> max_depth, std::vector<Synset> synsets)
    : max_depth_(std::move(max_depth)), synsets_(std::move(synsets)) {
    index();
}

void LexicalSource::index() {
    by_id_.clear();
    by_word_.clear();
    sense_count_.clear();
    for (SenseId i = 0; i < synsets_.size(); ++i) {
        Synset& s = synsets_[i];
        if (s.id.empty()) {
            throw SourceParseError("", "synset without id at position " + std::to_string(i));
        }
        if (!by_id_.emplace(s.id, i).second) {
            throw SourceParseError(s.id, "duplicate synset id");
        }
        if (!max_depth_.contains(s.pos)) {
            throw SourceParseError(s.id, "part of speech '" + s.pos + "' has no taxonomy entry");
        }
        if (s.members.empty()) {
            throw SourceParseError(s.id, "synset has no members");
        }
        if (s.ic < 0.0) {
            throw SourceParseError(s.id, "negative information content");
        }
        if (s.depth < 1 || s.depth > max_depth_.at(s.pos)) {
            throw SourceParseError(s.id, "depth outside 1..max_depth");
        }
        std::set<std::string> seen;
        std::vector<std::string> members;
        for (const auto& m : s.members) {
            std::string c = canonical(m);
            if (c.empty()) throw SourceParseError(s.id, "empty member");
            if (seen.insert(c).second) members.push_back(std::move(c));
        }
        s.members = std::move(members);
        ++sense_count_[s.pos];
    }

    for (SenseId i = 0; i < synsets_.size(); ++i) {
        const Synset& s = synsets_[i];
        if (s.hypernyms.empty() && s.depth != 1) {
            throw SourceParseError(s.id, "root synset must have depth 1");
        }
        for (const auto& h : s.hypernyms) {
            auto it = by_id_.find(h);
            if (it == by_id_.end()) {
                throw SourceParseError(s.id, "unresolved hypernym '" + h + "'");
            }
            const Synset& parent = synsets_[it->second];
            if (parent.pos != s.pos) {
                throw SourceParseError(s.id, "hypernym '" + h + "' has a different part of speech");
            }
            if (parent.depth >= s.depth) {
                throw SourceParseError(s.id, "hypernym '" + h + "' is not shallower than its hyponym");
            }
            if (parent.ic > s.ic) {
                throw SourceParseError(s.id, "information content decreases below hypernym '" + h + "'");
            }
        }
        for (const auto& m : s.members) {
            by_word_[{m, s.pos}].push_back(i);
        }
    }

    // Depth strictly increases along hypernym links, so the BFS terminates.
    ancestors_.assign(synsets_.size(), {});
    for (SenseId i = 0; i < synsets_.size(); ++i) {
        std::vector<Ancestor>& out = ancestors_[i];
        std::deque<Ancestor> queue{{i, 0}};
        std::set<SenseId> visited{i};
        while (!queue.empty()) {
            Ancestor cur = queue.front();
            queue.pop_front();
            out.push_back(cur);
            for (const auto& h : synsets_[cur.sense].hypernyms) {
                SenseId p = by_id_.at(h);
                if (visited.insert(p).second) queue.push_back({p, cur.distance + 1});
            }
        }
        std::sort(out.begin(), out.end(),
                  [](const Ancestor& a, const Ancestor& b) { return a.sense < b.sense; });
    }
}

std::optional<SenseId> LexicalSource::find(std::string_view synset_id) const {
    auto it = by_id_.find(std::string(synset_id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

std::span<const SenseId> LexicalSource::senses(std::string_view word, std::string_view pos) const {
    auto it = by_word_.find(std::pair<std::string, std::string>(canonical(word), std::string(pos)));
    if (it == by_word_.end()) return {};
    return it->second;
}

std::vector<std::string> LexicalSource::pos_of(std::string_view word) const {
    std::string w = canonical(word);
    std::vector<std::string> out;
    for (const auto& [pos, depth] : max_depth_) {
        if (by_word_.contains(std::pair<std::string, std::string>(w, pos))) out.push_back(pos);
    }
    return out;
}

int LexicalSource::max_depth(std::string_view pos) const {
    auto it = max_depth_.find(std::string(pos));
    if (it == max_depth_.end()) throw Error("unknown part of speech '" + std::string(pos) + "'");
    return it->second;
}

std::size_t LexicalSource::sense_count(std::string_view pos) const {
    auto it = sense_count_.find(pos);
    return it == sense_count_.end() ? 0 : it->second;
}

std::vector<std::pair<std::string, std::string>> LexicalSource::words() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(by_word_.size());
    for (const auto& [key, senses] : by_word_) out.push_back(key);
    return out;
}

LexicalSource LexicalSource::from_json(const nlohmann::json& doc) {
    try {
        if (!doc.is_object() || doc.value("version", 0) != 1) {
            throw SourceParseError("", "unsupported lexical source version");
        }
        std::map<std::string, int> max_depth;
        for (const auto& [pos, tax] : doc.at("pos_taxonomies").items()) {
            max_depth[pos] = tax.at("max_depth").get<int>();
            if (max_depth[pos] < 1) throw SourceParseError("", "max_depth must be positive for " + pos);
        }
        std::vector<Synset> synsets;
        for (const auto& j : doc.at("synsets")) {
            Synset s;
            s.id = j.value("id", std::string{});
            try {
                s.pos = j.at("pos").get<std::string>();
                s.members = j.at("members").get<std::vector<std::string>>();
                s.ic = j.at("ic").get<double>();
                s.depth = j.at("depth").get<int>();
                s.hypernyms = j.value("hypernyms", std::vector<std::string>{});
            } catch (const nlohmann::json::exception& e) {
                throw SourceParseError(s.id, e.what());
            }
            synsets.push_back(std::move(s));
        }
        return LexicalSource(std::move(max_depth), std::move(synsets));
    } catch (const nlohmann::json::exception& e) {
        throw SourceParseError("", e.what());
    }
}

LexicalSource LexicalSource::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SourceParseError("", "cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SourceParseError("", path.string() + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::json LexicalSource::to_json() const {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["pos_taxonomies"] = nlohmann::json::object();
    for (const auto& [pos, d] : max_depth_) doc["pos_taxonomies"][pos] = {{"max_depth", d}};
    doc["synsets"] = nlohmann::json::array();
    for (const auto& s : synsets_) {
        doc["synsets"].push_back({{"id", s.id},
                                  {"pos", s.pos},
                                  {"members", s.members},
                                  {"ic", s.ic},
                                  {"depth", s.depth},
                                  {"hypernyms", s.hypernyms}});
    }
    return doc;
}

} // namespace tracemark::lexgraph
