#include "doctest.h"

#include <fstream>
#include <sstream>

#include "tracemark/common/random.hpp"
#include "tracemark/common/text.hpp"
#include "tracemark/linguistic/linguistic.hpp"

using namespace tracemark;
using namespace tracemark::linguistic;
using lexgraph::GraphKey;
using lexgraph::LexGraph;
using lexgraph::LexicalSource;

namespace {

const std::string kFixtures = TRACEMARK_FIXTURES;

const LexGraph& fixture_graph() {
    static const LexGraph g = LexGraph::build(LexicalSource::load(kFixtures + "/lexicon.json"));
    return g;
}

const GraphKey& fixture_key() {
    static const GraphKey k = [] {
        Bytes b(16);
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<std::uint8_t>(0x40 + i);
        return GraphKey(b);
    }();
    return k;
}

const WordSequence& corpus() {
    static const WordSequence d = [] {
        std::ifstream in(kFixtures + "/advent_lines.txt");
        std::stringstream ss;
        ss << in.rdbuf();
        return tokenize_text(ss.str());
    }();
    return d;
}

Bits random_bits(std::size_t n) {
    Bits b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(Csprng::instance().next_bit());
    return b;
}

WordSequence watermarked(const WordSequence& d, const EmbedResult& r) {
    std::vector<std::size_t> lines;
    for (const Token& t : d) lines.push_back(t.line);
    return tokenize(r.words, lines);
}

// Tiny taxonomy where alpha and beta share the two homographs rho and sigma.
LexGraph two_common_graph() {
    std::vector<lexgraph::Synset> s = {
        {"entity.n.01", "n", {"entity"}, 0.0, 1, {}},
        {"a.n.01", "n", {"alpha", "rho"}, 1.0, 2, {"entity.n.01"}},
        {"b.n.01", "n", {"beta", "rho"}, 1.2, 2, {"entity.n.01"}},
        {"c.n.01", "n", {"alpha", "sigma"}, 1.4, 2, {"entity.n.01"}},
        {"d.n.01", "n", {"beta", "sigma"}, 1.6, 2, {"entity.n.01"}},
        {"e.n.01", "n", {"gamma", "delta"}, 1.1, 2, {"entity.n.01"}},
    };
    return LexGraph::build(LexicalSource({{"n", 2}}, s));
}

} // namespace

TEST_CASE("justification coefficient") {
    CHECK(justification_coefficient(0, 10, 10, 5, 5) == doctest::Approx(1.0));
    CHECK(justification_coefficient(0, 10, 10, 5, 6) == doctest::Approx(0.0));
    CHECK(justification_coefficient(0, 10, 11, 5, 5) == doctest::Approx(0.0));
    // P_j + |d_j| - P_wj - |w| = -1 over two following words.
    CHECK(justification_coefficient(2, 10, 10, 5, 6) == doctest::Approx(0.5));
    CHECK(justification_coefficient(4, 10, 8, 5, 5) == doctest::Approx(0.5));
    CHECK(parse_justification("exact-width") == Justification::exact_width);
    CHECK(to_string(Justification::no_longer_lines) == "no-longer-lines");
    CHECK_THROWS_AS(parse_justification("full"), ConfigurationError);
}

TEST_CASE("embed reports failure when the document runs out") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    WordSequence few;
    for (const Token& t : d) {
        few.push_back(t);
        if (max_bits(few, vocab) == 3) break;
    }
    REQUIRE(max_bits(few, vocab) == 3);
    auto r = embed(few, Bits{1, 0, 1, 1, 0}, vocab, {.mode = Justification::none});
    CHECK_FALSE(r.complete);

    WordSequence locked = d;
    for (Token& t : locked) t.untouchable = true;
    CHECK(max_bits(locked, vocab) == 0);
    CHECK_FALSE(embed(locked, Bits{1}, vocab).complete);
}

TEST_CASE("embed picks the heaviest neighbour with the right label") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    for (unsigned bit : {0U, 1U}) {
        auto r = embed(d, Bits{static_cast<std::uint8_t>(bit)}, vocab, {.mode = Justification::none});
        REQUIRE(r.complete);
        REQUIRE(r.substitutions.size() == 1);
        const auto& sub = r.substitutions.front();
        const Token& t = d[sub.index];
        // Brute force: scan every neighbour, keep homographs with the wanted label.
        const std::string pos = fixture_graph().pos_of(t.canon).front();
        std::string best;
        double best_w = -1;
        for (const auto& n : fixture_graph().all_neighbours(t.canon, pos)) {
            if (!fixture_graph().is_homograph(n.word, pos) || n.word.find(' ') != std::string::npos) continue;
            if (lexgraph::label(t.canon, n.word, fixture_key()) != bit) continue;
            if (n.weight > best_w || (n.weight == best_w && n.word < best)) {
                best = n.word;
                best_w = n.weight;
            }
        }
        CHECK(canonical(tokenize_text(sub.replacement).front().core) == best);
        for (std::size_t k = 0; k < sub.index; ++k) CHECK_FALSE(vocab.eligible(d[k]));
    }
}

TEST_CASE("zero-attack round trip") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    const std::size_t capacity = max_bits(d, vocab);
    REQUIRE(capacity >= 64);
    for (int trial = 0; trial < 200; ++trial) {
        const Bits p = random_bits(48);
        auto r = embed(d, p, vocab, {.mode = Justification::none});
        REQUIRE(r.complete);
        CHECK(r.forced_erasures == 0);
        WordSequence dw = watermarked(d, r);
        auto x = extract(d, dw, vocab, {.max_bits = p.size()});
        REQUIRE(x.bits.size() == p.size());
        CHECK(x.bits == p);
        CHECK(std::count(x.erased.begin(), x.erased.end(), true) == 0);
    }
}

TEST_CASE("substitutions are homograph neighbours with matching pos") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    auto r = embed(d, random_bits(64), vocab, {.mode = Justification::none});
    REQUIRE(r.complete);
    for (const auto& s : r.substitutions) {
        const Token& t = d[s.index];
        const std::string pos = *vocab.pos(t.canon);
        const std::string w = canonical(tokenize_text(s.replacement).front().core);
        CHECK(fixture_graph().is_homograph(w, pos));
        CHECK(vocab.is_neighbour(t.canon, w));
        CHECK(lexgraph::label(t.canon, w, fixture_key()) == s.bit);
    }
}

TEST_CASE("no-longer-lines keeps every line within its letter count") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    for (int trial = 0; trial < 20; ++trial) {
        auto r = embed(d, random_bits(40), vocab);
        std::map<std::size_t, long> delta;
        for (std::size_t j = 0; j < d.size(); ++j) {
            delta[d[j].line] += static_cast<long>(letter_count(r.words[j])) - static_cast<long>(letter_count(d[j].text));
        }
        for (const auto& [line, dl] : delta) CHECK(dl <= 0);
        // Words that could not be placed are honest erasures.
        if (r.complete) {
            auto x = extract(d, watermarked(d, r), vocab, {.max_bits = 40});
            REQUIRE(x.bits.size() == 40);
            std::size_t flagged = std::count(x.erased.begin(), x.erased.end(), true);
            CHECK(flagged == r.forced_erasures);
            for (std::size_t i : r.erased_positions) CHECK(x.erased[i]);
        }
    }
}

TEST_CASE("exact-width keeps every line inside its slack") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    // Proportional toy metric: wide and narrow letters.
    auto measure = [](const std::string& s) {
        double w = 0;
        for (char c : s) w += std::string_view("mwMW").find(c) != std::string_view::npos ? 900 : std::string_view("iljtf.,").find(c) != std::string_view::npos ? 250 : 500;
        return w;
    };
    EmbedOptions opts{.mode = Justification::exact_width};
    opts.width = [&](std::size_t, const std::string& text) { return measure(text); };
    opts.line_slack = [](std::size_t line) { return std::pair(-400.0, line % 3 == 0 ? 0.0 : 700.0); };
    for (int trial = 0; trial < 10; ++trial) {
        auto r = embed(d, random_bits(60), vocab, opts);
        std::map<std::size_t, double> delta;
        for (std::size_t j = 0; j < d.size(); ++j) delta[d[j].line] += measure(r.words[j]) - measure(d[j].text);
        for (const auto& [line, dw] : delta) {
            CHECK(dw >= opts.line_slack(line).first - 1e-9);
            CHECK(dw <= opts.line_slack(line).second + 1e-9);
        }
        REQUIRE(r.complete);
        auto x = extract(d, watermarked(d, r), vocab, {.max_bits = 60});
        CHECK(static_cast<std::size_t>(std::count(x.erased.begin(), x.erased.end(), true)) == r.forced_erasures);
    }
    CHECK_THROWS_AS(embed(d, Bits{1}, vocab, {.mode = Justification::exact_width}), ConfigurationError);
}

TEST_CASE("coefficient mode keeps q positive") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    auto r = embed(d, random_bits(40), vocab, {.mode = Justification::coefficient});
    REQUIRE(r.complete);
    auto x = extract(d, watermarked(d, r), vocab, {.max_bits = 40});
    CHECK(x.bits.size() == 40);
    // Last substitutable word on each line never changes its length.
    for (const auto& s : r.substitutions) {
        bool last = true;
        for (std::size_t k = s.index + 1; k < d.size() && d[k].line == d[s.index].line; ++k) {
            last = last && d[k].untouchable;
        }
        if (last) CHECK(letter_count(s.replacement) == letter_count(s.original));
    }
}

TEST_CASE("reverted substitution becomes an erasure") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    const Bits p = random_bits(32);
    auto r = embed(d, p, vocab, {.mode = Justification::none});
    REQUIRE(r.complete);
    auto words = r.words;
    const auto& sub = r.substitutions[5];
    words[sub.index] = d[sub.index].text;
    std::vector<std::size_t> lines;
    for (const Token& t : d) lines.push_back(t.line);
    auto x = extract(d, tokenize(words, lines), vocab, {.max_bits = p.size()});
    REQUIRE(x.bits.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i == 5) {
            CHECK(x.erased[i]);
        } else {
            CHECK_FALSE(x.erased[i]);
            CHECK(x.bits[i] == p[i]);
        }
    }
}

TEST_CASE("single insertion or deletion of a non-payload word keeps every bit") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    const Bits p = random_bits(40);
    auto r = embed(d, p, vocab, {.mode = Justification::none});
    REQUIRE(r.complete);
    std::vector<std::size_t> lines;
    for (const Token& t : d) lines.push_back(t.line);
    for (std::size_t pos = 3; pos < 300; pos += 17) {
        auto words = r.words;
        auto ls = lines;
        words.insert(words.begin() + pos, "zyzzyva");
        ls.insert(ls.begin() + pos, lines[pos]);
        auto x = extract(d, tokenize(words, ls), vocab, {.max_bits = p.size()});
        CHECK(x.bits == p);
        if (pos <= r.substitutions.back().index) CHECK(x.insertions == 1);

        std::size_t del = pos;
        while (vocab.eligible(d[del])) ++del;
        words = r.words;
        ls = lines;
        words.erase(words.begin() + del);
        ls.erase(ls.begin() + del);
        auto y = extract(d, tokenize(words, ls), vocab, {.max_bits = p.size()});
        CHECK(y.bits == p);
        CHECK(std::count(y.erased.begin(), y.erased.end(), true) == 0);
    }
}

TEST_CASE("two unknown inserted words exceed lambda 1") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    auto r = embed(d, random_bits(16), vocab, {.mode = Justification::none});
    std::vector<std::size_t> lines;
    for (const Token& t : d) lines.push_back(t.line);
    auto words = r.words;
    words.insert(words.begin() + 10, {"zyzzyva", "quokka"});
    lines.insert(lines.begin() + 10, {lines[10], lines[10]});
    auto dw = tokenize(words, lines);
    CHECK_THROWS_AS(extract(d, dw, vocab, {.lambda = 1, .confirm = 0}), SyncLostError);
    try {
        extract(d, dw, vocab, {.lambda = 1});
    } catch (const SyncLostError& e) {
        CHECK(e.original_index() == 10);
        CHECK(e.watermarked_index() == 10);
    }
    CHECK_NOTHROW(extract(d, dw, vocab, {.lambda = 2}));
    // The simplified variant never throws; it only skips watermarked words.
    CHECK_NOTHROW(extract(d, dw, vocab, {.lambda = 1, .simplified = true}));
}

TEST_CASE("check inserted and deleted") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    std::size_t j = 0;
    while (!vocab.eligible(d[j + 1]) || vocab.eligible(d[j])) ++j;
    // d[j] plain, d[j+1] payload, d[j+2] follows.
    WordSequence dw(d.begin() + j + 2, d.end());
    auto del = check_deleted(d, dw, j, 0, 2, vocab);
    REQUIRE(del);
    CHECK(del->first == 2);
    CHECK(del->second == 1);
    CHECK_FALSE(check_deleted(d, dw, j, 0, 1, vocab));

    WordSequence ins = tokenize_text("zyzzyva " + d[j].text);
    CHECK(check_inserted(d, ins, j, 0, 1, vocab) == std::optional<std::size_t>(1));
    CHECK_FALSE(check_inserted(d, ins, j + 1, 0, 1, vocab));
}

TEST_CASE("neighbour relations drive resynchronisation") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    // A neighbour one position ahead counts as the original word.
    const auto& n = fixture_graph().all_neighbours("bank", "n");
    REQUIRE_FALSE(n.empty());
    WordSequence d = tokenize_text("bank");
    WordSequence dw = tokenize_text("zyzzyva " + n.front().word);
    CHECK(check_inserted(d, dw, 0, 0, 1, vocab) == std::optional<std::size_t>(1));
    CHECK(vocab.related("bank", n.front().word));
    CHECK_FALSE(vocab.related("bank", "zyzzyva"));
}

TEST_CASE("ambiguous common neighbour picks the lowest word") {
    const LexGraph g = two_common_graph();
    CHECK(g.is_homograph("rho", "n"));
    CHECK(g.is_homograph("sigma", "n"));
    // Find a key that labels (alpha, rho) and (alpha, sigma) differently, so
    // alpha is eligible and the choice of r matters.
    for (std::uint8_t seed = 0;; ++seed) {
        Bytes b(16, seed);
        GraphKey key(b);
        if (lexgraph::label("alpha", "rho", key) == lexgraph::label("alpha", "sigma", key)) continue;
        Vocabulary vocab(g, key);
        CHECK(vocab.common_homograph_neighbours("alpha", "beta") == std::vector<std::string>{"rho", "sigma"});
        WordSequence d = tokenize_text("alpha gamma");
        REQUIRE(vocab.eligible(d[0]));
        WordSequence dw = tokenize_text("beta gamma");
        for (int run = 0; run < 3; ++run) {
            auto x = extract(d, dw, vocab);
            REQUIRE(x.bits.size() == 1);
            CHECK(x.bits[0] == lexgraph::label("alpha", "rho", key));
            CHECK_FALSE(x.erased[0]);
            REQUIRE(x.log.size() == 1);
            CHECK(x.log[0].find("using 'rho'") != std::string::npos);
        }
        break;
    }
}

TEST_CASE("fixture capacity") {
    Vocabulary vocab(fixture_graph(), fixture_key());
    const WordSequence& d = corpus();
    std::size_t untouchable = 0;
    for (const Token& t : d) untouchable += t.untouchable ? 1 : 0;
    MESSAGE("tokens " << d.size() << ", untouchable " << untouchable << ", eligible " << max_bits(d, vocab));
    CHECK(max_bits(d, vocab) >= 100);
}
