#include "tracemark/linguistic/linguistic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "tracemark/common/random.hpp"
#include "tracemark/common/text.hpp"

namespace tracemark::linguistic {

using lexgraph::Neighbour;

std::optional<std::string> Vocabulary::pos(const std::string& canon) const {
    auto all = graph_.pos_of(canon);
    if (all.size() != 1) return std::nullopt;
    return all.front();
}

const std::vector<Neighbour>& Vocabulary::candidates(const std::string& canon, unsigned bit) const {
    auto key = std::pair(canon, bit);
    auto it = candidates_.find(key);
    if (it != candidates_.end()) return it->second;
    std::vector<Neighbour> out;
    if (auto p = pos(canon)) {
        for (Neighbour& n : graph_.neighbours(canon, *p, bit, key_)) {
            if (n.word.find(' ') == std::string::npos) out.push_back(std::move(n));
        }
    }
    return candidates_.emplace(key, std::move(out)).first->second;
}

bool Vocabulary::eligible(const Token& t) const {
    return !t.untouchable && pos(t.canon) && !candidates(t.canon, 0).empty() && !candidates(t.canon, 1).empty();
}

std::vector<Neighbour> Vocabulary::plain_synonyms(const std::string& canon) const {
    std::vector<Neighbour> out;
    auto p = pos(canon);
    if (!p) return out;
    for (Neighbour& n : graph_.all_neighbours(canon, *p)) {
        if (n.word.find(' ') == std::string::npos && !is_homograph(n.word)) out.push_back(std::move(n));
    }
    std::sort(out.begin(), out.end(), [](const Neighbour& a, const Neighbour& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.word < b.word;
    });
    return out;
}

const std::unordered_set<std::string>& Vocabulary::neighbour_set(const std::string& canon) const {
    auto it = neighbours_.find(canon);
    if (it != neighbours_.end()) return it->second;
    std::unordered_set<std::string> out;
    for (const std::string& p : graph_.pos_of(canon)) {
        for (const Neighbour& n : graph_.all_neighbours(canon, p)) out.insert(n.word);
    }
    return neighbours_.emplace(canon, std::move(out)).first->second;
}

bool Vocabulary::is_neighbour(const std::string& a, const std::string& b) const {
    return neighbour_set(a).count(b) != 0;
}

bool Vocabulary::is_homograph(const std::string& canon) const {
    for (const std::string& p : graph_.pos_of(canon)) {
        if (graph_.is_homograph(canon, p)) return true;
    }
    return false;
}

std::vector<std::string> Vocabulary::common_homograph_neighbours(const std::string& a, const std::string& b) const {
    const auto& na = neighbour_set(a);
    const auto& nb = neighbour_set(b);
    std::vector<std::string> out;
    for (const std::string& r : na.size() <= nb.size() ? na : nb) {
        if ((na.size() <= nb.size() ? nb : na).count(r) && is_homograph(r)) out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Vocabulary::related(const std::string& a, const std::string& b) const {
    if (a == b) return true;
    const auto& na = neighbour_set(a);
    if (na.count(b)) return true;
    const auto& nb = neighbour_set(b);
    const auto& small = na.size() <= nb.size() ? na : nb;
    const auto& large = na.size() <= nb.size() ? nb : na;
    for (const std::string& r : small) {
        if (large.count(r)) return true;
    }
    return false;
}

unsigned Vocabulary::label(const std::string& a, const std::string& b) const { return lexgraph::label(a, b, key_); }

Justification parse_justification(std::string_view name) {
    if (name == "none") return Justification::none;
    if (name == "coefficient") return Justification::coefficient;
    if (name == "no-longer-lines") return Justification::no_longer_lines;
    if (name == "exact-width") return Justification::exact_width;
    throw ConfigurationError("unknown justification mode '" + std::string(name) + "'");
}

std::string_view to_string(Justification j) {
    switch (j) {
    case Justification::none: return "none";
    case Justification::coefficient: return "coefficient";
    case Justification::no_longer_lines: return "no-longer-lines";
    case Justification::exact_width: return "exact-width";
    }
    return "none";
}

double justification_coefficient(std::size_t following, long prefix_original, long prefix_watermarked,
                                 long original_len, long candidate_len) {
    if (following == 0) {
        return prefix_original == prefix_watermarked && original_len == candidate_len ? 1.0 : 0.0;
    }
    const double drift = static_cast<double>(prefix_original + original_len - prefix_watermarked - candidate_len);
    return 1.0 - std::abs(drift / static_cast<double>(following));
}

std::size_t max_bits(const WordSequence& d, const Vocabulary& vocab) {
    std::size_t n = 0;
    for (const Token& t : d) n += vocab.eligible(t) ? 1 : 0;
    return n;
}

namespace {

long core_length(const std::string& s) { return static_cast<long>(letter_count(s)); }

// One line at a time: choose, for every eligible word, a labelled candidate,
// a plain synonym (bit kept for the next word) or no change (bit erased), so
// that the line ends no longer than it started. Fewest erasures first, then
// most bits placed, then the highest total weight. With font metrics the
// rendered width must also stay inside the line's slack.
EmbedResult embed_lines(const WordSequence& d, const Bits& payload, const Vocabulary& vocab,
                        const EmbedOptions& options) {
    EmbedResult r;
    r.words = texts(d);
    const bool metric = options.width && options.line_slack;
    const bool count_letters = options.mode == Justification::no_longer_lines;
    if (options.mode == Justification::exact_width && !metric) {
        throw ConfigurationError("exact-width mode needs font metrics");
    }
    constexpr double bucket = 40;

    struct Action {
        std::string text;
        bool carries = false;
        bool forced = false;
    };
    struct Score {
        std::size_t forced = 0;
        std::size_t placed = 0;
        double weight = 0;
        std::size_t changes = 0;
        bool better_than(const Score& o) const {
            if (forced != o.forced) return forced < o.forced;
            if (placed != o.placed) return placed > o.placed;
            if (changes != o.changes) return changes < o.changes;
            return weight > o.weight + 1e-12;
        }
    };
    // bits consumed, letter change, width change bucket
    using Key = std::tuple<std::size_t, long, long>;
    struct Cell {
        Score score;
        double width = 0;
        Key prev;
        Action action;
    };

    std::size_t i = 0;
    std::size_t j = 0;
    while (j < d.size() && i < payload.size()) {
        const std::size_t line = d[j].line;
        std::size_t end = j;
        std::vector<std::size_t> eligible;
        // Touchable words that carry no bit may still give up letters to a shorter synonym.
        std::vector<bool> carrier;
        for (; end < d.size() && d[end].line == line; ++end) {
            if (vocab.eligible(d[end])) {
                eligible.push_back(end);
                carrier.push_back(true);
            } else if (!d[end].untouchable && vocab.pos(d[end].canon)) {
                eligible.push_back(end);
                carrier.push_back(false);
            }
        }
        const auto slack = metric ? options.line_slack(line) : std::pair(0.0, 0.0);
        std::vector<std::map<Key, Cell>> layers(eligible.size() + 1);
        layers[0][{0, 0, 0}] = Cell{};
        for (std::size_t e = 0; e < eligible.size(); ++e) {
            const Token& t = d[eligible[e]];
            const long orig_len = core_length(t.core);
            const double orig_width = metric ? options.width(eligible[e], t.text) : 0;
            auto render = [&](const std::string& word) { return t.prefix + copy_case_pattern(t.core, word) + t.suffix; };
            auto settable = [&](const std::string& text) {
                return !options.settable || options.settable(eligible[e], text);
            };
            // Moves from `from` by replacing the word with `text`; an empty text keeps it.
            auto relax = [&](const Key& from, const Cell& cell, std::size_t k, const std::string& text,
                             const std::string& word, Score score, Action action) {
                long letters = std::get<1>(from);
                double width = cell.width;
                if (!text.empty()) {
                    if (count_letters) letters += core_length(word) - orig_len;
                    if (metric) width += options.width(eligible[e], text) - orig_width;
                }
                const Key to{k, letters, metric ? std::lround(width / bucket) : 0};
                auto it = layers[e + 1].find(to);
                if (it == layers[e + 1].end() || score.better_than(it->second.score) ||
                    (!it->second.score.better_than(score) && width < it->second.width)) {
                    layers[e + 1][to] = Cell{score, width, from, std::move(action)};
                }
            };
            if (!carrier[e]) {
                const auto shorter = vocab.plain_synonyms(t.canon);
                for (const auto& [key, cell] : layers[e]) {
                    relax(key, cell, std::get<0>(key), "", "", cell.score, Action{});
                    for (const Neighbour& n : shorter) {
                        const std::string text = render(n.word);
                        if (!settable(text)) continue;
                        if (count_letters && core_length(n.word) >= orig_len) continue;
                        if (metric && options.width(eligible[e], text) >= orig_width) continue;
                        Score s = cell.score;
                        ++s.changes;
                        relax(key, cell, std::get<0>(key), text, n.word, s, Action{text, false, false});
                    }
                }
                continue;
            }
            for (const auto& [key, cell] : layers[e]) {
                const std::size_t k = std::get<0>(key);
                if (i + k >= payload.size()) {
                    relax(key, cell, k, "", "", cell.score, Action{});
                    continue;
                }
                const unsigned bit = payload[i + k] & 1U;
                for (const Neighbour& n : vocab.candidates(t.canon, bit)) {
                    const std::string text = render(n.word);
                    if (!settable(text)) continue;
                    Score s = cell.score;
                    ++s.placed;
                    s.weight += n.weight;
                    relax(key, cell, k + 1, text, n.word, s, Action{text, true, false});
                }
                for (const Neighbour& n : vocab.plain_synonyms(t.canon)) {
                    const std::string text = render(n.word);
                    if (!settable(text)) continue;
                    relax(key, cell, k, text, n.word, cell.score, Action{text, false, false});
                }
                Score s = cell.score;
                ++s.forced;
                ++s.placed;
                relax(key, cell, k + 1, "", "", s, Action{t.text, false, true});
            }
        }
        const Key* best = nullptr;
        for (const auto& [key, cell] : layers.back()) {
            if (std::get<1>(key) > 0) continue;
            if (metric && (cell.width < slack.first - 1e-9 || cell.width > slack.second + 1e-9)) continue;
            if (!best || cell.score.better_than(layers.back().at(*best).score)) best = &key;
        }
        // Bucketing can hide the keep-everything path behind a better-scored
        // cell that overshoots the slack; fall back to the narrowest cell.
        if (!best) {
            for (const auto& [key, cell] : layers.back()) {
                if (std::get<1>(key) > 0) continue;
                if (!best || cell.width < layers.back().at(*best).width) best = &key;
            }
        }
        std::vector<Action> actions(eligible.size());
        Key at = *best;
        for (std::size_t e = eligible.size(); e-- > 0;) {
            const Cell& c = layers[e + 1].at(at);
            actions[e] = c.action;
            at = c.prev;
        }
        for (std::size_t e = 0; e < eligible.size(); ++e) {
            const Action& a = actions[e];
            const std::size_t idx = eligible[e];
            if (!carrier[e]) {
                if (!a.text.empty()) {
                    r.words[idx] = a.text;
                    r.substitutions.push_back({idx, d[idx].text, a.text, false, 0});
                }
                continue;
            }
            if (i >= payload.size()) break;
            if (a.forced) {
                r.erased_positions.push_back(i);
                ++r.forced_erasures;
                ++i;
            } else if (a.carries) {
                r.words[idx] = a.text;
                r.substitutions.push_back({idx, d[idx].text, a.text, true, static_cast<unsigned>(payload[i] & 1U)});
                ++r.bits_embedded;
                ++i;
            } else if (!a.text.empty()) {
                r.words[idx] = a.text;
                r.substitutions.push_back({idx, d[idx].text, a.text, false, 0});
                ++r.skipped;
            }
        }
        j = end;
    }
    r.complete = i == payload.size();
    return r;
}

} // namespace

EmbedResult embed(const WordSequence& d, const Bits& payload, const Vocabulary& vocab, const EmbedOptions& options) {
    if (options.mode == Justification::no_longer_lines || options.mode == Justification::exact_width) {
        return embed_lines(d, payload, vocab, options);
    }
    EmbedResult r;
    r.words = texts(d);
    std::map<std::size_t, long> letter_delta;

    auto core_len = [](const std::string& s) { return static_cast<long>(letter_count(s)); };

    std::size_t i = 0;
    std::size_t j = 0;
    while (i < payload.size()) {
        if (j == d.size()) return r;
        const Token& t = d[j];
        if (!vocab.eligible(t)) {
            ++j;
            continue;
        }
        const unsigned bit = payload[i] & 1U;
        const long orig_len = core_len(t.core);

        // Prefix sums for the coefficient: letters before j on the same line.
        std::size_t following = 0;
        long prefix_orig = 0;
        for (std::size_t k = j + 1; k < d.size() && d[k].line == t.line; ++k) following += d[k].untouchable ? 0 : 1;
        for (std::size_t k = j; k-- > 0 && d[k].line == t.line;) prefix_orig += core_len(d[k].core);
        const long prefix_wm = prefix_orig + letter_delta[t.line];

        auto render = [&](const std::string& word) { return t.prefix + copy_case_pattern(t.core, word) + t.suffix; };
        auto fits = [&](const std::string& text, const std::string& word) -> std::optional<double> {
            if (options.settable && !options.settable(j, text)) return std::nullopt;
            const long len = core_len(word);
            switch (options.mode) {
            case Justification::none:
                return 1.0;
            case Justification::coefficient: {
                const double q = justification_coefficient(following, prefix_orig, prefix_wm, orig_len, len);
                if (q <= 0) return std::nullopt;
                return q;
            }
            default:
                return std::nullopt;
            }
            return std::nullopt;
        };
        auto commit = [&](const std::string& text, const std::string& word, bool carries) {
            letter_delta[t.line] += core_len(word) - orig_len;
            r.words[j] = text;
            r.substitutions.push_back({j, t.text, text, carries, bit});
        };

        std::optional<std::pair<std::string, std::string>> best;
        double best_score = -1;
        for (const Neighbour& n : vocab.candidates(t.canon, bit)) {
            const std::string text = render(n.word);
            auto q = fits(text, n.word);
            if (!q) continue;
            const double score = *q * n.weight;
            if (!best || score > best_score) {
                best = std::pair(text, n.word);
                best_score = score;
            }
            if (options.mode != Justification::coefficient) break;
        }
        if (best) {
            commit(best->first, best->second, true);
            ++i;
            ++r.bits_embedded;
        } else {
            // No labelled candidate fits: give up this bit on a plain synonym, or leave the word.
            std::optional<std::pair<std::string, std::string>> plain;
            for (const Neighbour& n : vocab.plain_synonyms(t.canon)) {
                const std::string text = render(n.word);
                if (options.mode == Justification::coefficient && core_len(n.word) != orig_len) continue;
                if (fits(text, n.word)) {
                    plain = std::pair(text, n.word);
                    break;
                }
            }
            if (plain) {
                commit(plain->first, plain->second, false);
                ++r.skipped;
            } else {
                r.erased_positions.push_back(i);
                ++r.forced_erasures;
                ++i;
            }
        }
        ++j;
    }
    r.complete = true;
    return r;
}

unsigned extract_bit(const std::string& original, const std::string& replacement, const Vocabulary& vocab) {
    return vocab.label(original, replacement);
}

namespace {

struct Candidate {
    enum Kind { stay, insert, remove } kind;
    std::size_t offset = 0;
};

} // namespace

std::optional<std::size_t> check_inserted(const WordSequence& d, const WordSequence& dw, std::size_t j,
                                          std::size_t l, std::size_t lambda, const Vocabulary& vocab) {
    for (std::size_t x = 1; x <= lambda && l + x < dw.size(); ++x) {
        if (vocab.related(d[j].canon, dw[l + x].canon)) return x;
    }
    return std::nullopt;
}

std::optional<std::pair<std::size_t, std::size_t>> check_deleted(const WordSequence& d, const WordSequence& dw,
                                                                 std::size_t j, std::size_t l, std::size_t lambda,
                                                                 const Vocabulary& vocab) {
    for (std::size_t x = 1; x <= lambda && j + x < d.size(); ++x) {
        if (vocab.related(d[j + x].canon, dw[l].canon)) {
            std::size_t y = 0;
            for (std::size_t k = j; k < j + x; ++k) y += vocab.eligible(d[k]) ? 1 : 0;
            return std::pair(x, y);
        }
    }
    return std::nullopt;
}

ExtractResult extract(const WordSequence& d, const WordSequence& dw, const Vocabulary& vocab,
                      const ExtractOptions& options) {
    ExtractResult r;
    auto full = [&] { return options.max_bits && r.bits.size() >= *options.max_bits; };
    auto emit = [&](unsigned bit, bool erased) {
        if (full()) return;
        r.bits.push_back(static_cast<std::uint8_t>(bit));
        r.erased.push_back(erased);
    };
    auto emit_erasures = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) emit(Csprng::instance().next_bit(), true);
    };
    auto agreement = [&](std::size_t j0, std::size_t l0) {
        std::size_t n = 0;
        for (; n < options.confirm; ++n) {
            if (j0 + n >= d.size() || l0 + n >= dw.size()) return options.confirm;
            if (!vocab.related(d[j0 + n].canon, dw[l0 + n].canon)) break;
        }
        return n;
    };
    // Chooses between staying aligned and the insertion/deletion offsets, insertion first.
    auto resolve = [&](std::size_t j, std::size_t l, bool can_stay) -> std::optional<Candidate> {
        std::vector<std::pair<Candidate, std::size_t>> found;
        auto consider = [&](Candidate c, std::size_t score) {
            if (options.confirm == 0 && !found.empty()) return;
            found.emplace_back(c, score);
        };
        if (can_stay) consider({Candidate::stay, 0}, agreement(j + 1, l + 1));
        for (std::size_t x = 1; x <= options.lambda && l + x < dw.size(); ++x) {
            if (vocab.related(d[j].canon, dw[l + x].canon)) consider({Candidate::insert, x}, agreement(j + 1, l + x + 1));
        }
        for (std::size_t x = 1; x <= options.lambda && j + x < d.size(); ++x) {
            if (vocab.related(d[j + x].canon, dw[l].canon)) consider({Candidate::remove, x}, agreement(j + x + 1, l + 1));
        }
        if (found.empty()) return std::nullopt;
        auto best = found.begin();
        for (auto it = found.begin(); it != found.end(); ++it) {
            if (it->second > best->second) best = it;
        }
        return best->first;
    };
    auto payload_words = [&](std::size_t from, std::size_t to) {
        std::size_t y = 0;
        for (std::size_t k = from; k < to; ++k) y += vocab.eligible(d[k]) ? 1 : 0;
        return y;
    };

    std::size_t j = 0;
    std::size_t l = 0;
    while (l < dw.size() && j < d.size() && !full()) {
        const Token& o = d[j];
        const Token& w = dw[l];
        const bool payload = vocab.eligible(o);

        if (!payload) {
            if (o.canon == w.canon) {
                ++j;
                ++l;
                continue;
            }
        } else {
            if (o.canon == w.canon) {
                // Substitution reverted (or never made): the bit is lost.
                emit_erasures(1);
                ++j;
                ++l;
                continue;
            }
            if (vocab.is_neighbour(o.canon, w.canon)) {
                if (vocab.is_homograph(w.canon)) {
                    emit(extract_bit(o.canon, w.canon, vocab), false);
                } else {
                    r.log.push_back("word " + std::to_string(j) + ": plain synonym '" + w.canon + "', no bit");
                }
                ++j;
                ++l;
                continue;
            }
        }

        std::vector<std::string> common;
        if (payload) common = vocab.common_homograph_neighbours(o.canon, w.canon);
        const bool can_stay = payload ? !common.empty() : vocab.related(o.canon, w.canon);
        if (options.simplified) {
            if (can_stay) {
                if (payload) emit(extract_bit(o.canon, common.front(), vocab), false);
                ++j;
                ++l;
            } else {
                ++l;
                ++r.insertions;
            }
            continue;
        }
        auto c = resolve(j, l, can_stay);
        if (!c) throw SyncLostError(j, l);
        switch (c->kind) {
        case Candidate::stay:
            if (payload) {
                if (common.size() > 1) {
                    std::string all;
                    for (const auto& s : common) all += (all.empty() ? "" : ", ") + s;
                    r.log.push_back("word " + std::to_string(j) + ": common neighbours {" + all + "}, using '" +
                                    common.front() + "'");
                }
                emit(extract_bit(o.canon, common.front(), vocab), false);
            }
            ++j;
            ++l;
            break;
        case Candidate::insert:
            r.insertions += c->offset;
            r.log.push_back("word " + std::to_string(j) + ": " + std::to_string(c->offset) + " inserted at " +
                            std::to_string(l));
            if (payload) {
                l += c->offset;
            } else {
                ++j;
                l += c->offset + 1;
            }
            break;
        case Candidate::remove: {
            const std::size_t y = payload_words(j, j + c->offset);
            r.deletions += c->offset;
            r.log.push_back("word " + std::to_string(j) + ": " + std::to_string(c->offset) + " deleted, " +
                            std::to_string(y) + " payload");
            for (std::size_t k = 0; k < y && !full(); ++k) r.deletion_bits.push_back(r.bits.size() + k);
            emit_erasures(y);
            j += c->offset;
            break;
        }
        }
    }
    if (j < d.size() && !full()) {
        const std::size_t y = payload_words(j, d.size());
        if (y) r.log.push_back("document ends early: " + std::to_string(y) + " payload words missing");
        emit_erasures(y);
    }
    return r;
}

} // namespace tracemark::linguistic
