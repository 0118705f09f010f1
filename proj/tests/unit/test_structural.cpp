#include "doctest.h"

#include <fstream>
#include <map>

#include "json.hpp"
#include "support/pdf_builder.hpp"
#include "tracemark/structural/structural.hpp"

using namespace tracemark;
using namespace tracemark::structural;
using pdfio::Document;
using pdfio::Edits;

namespace {

const std::string kFixtures = TRACEMARK_FIXTURES;

const Document& fixture() {
    static const Document d = Document::load(kFixtures + "/advent.pdf");
    return d;
}

Bits payload_a6a3ca() { return bytes_to_bits(Bytes{0xA6, 0xA3, 0xCA}); }

Document watermarked(const Bits& bits, const Params& p = {}) {
    Edits e;
    e.gap_width = plan(fixture(), bits, p).gap_width;
    return Document::parse(fixture().write(e));
}

// Segments per line under the default stride.
std::size_t line_segments(const Document& d, std::size_t line) {
    const std::size_t n = d.lines()[line].words.size();
    return n < 5 ? 0 : std::min<std::size_t>(3, (n - 1) / 4);
}

} // namespace

TEST_CASE("word labels and segment classes") {
    CHECK(classify({10, 8, 8}) == std::vector<unsigned>{1, 0});
    CHECK(classify({8, 8}) == std::vector<unsigned>{0});
    CHECK(classify({5}).empty());
    CHECK(segment_class({1, 0, 1, 1}, 8) == 3);
    CHECK(segment_class({0, 0, 0, 0}, 8) == 0);
    CHECK(segment_class({1, 1, 1, 1}, 3) == 1);
    CHECK(mean_difference({312, 312, 312, 312}) == doctest::Approx(0));
    CHECK(mean_difference({292, 332, 292, 332}) == doctest::Approx(40));
}

TEST_CASE("fixture labels match pairwise comparison") {
    std::ifstream in(kFixtures + "/advent_layout.json");
    const auto layout = nlohmann::json::parse(in);
    const Document& d = fixture();
    REQUIRE(d.lines().size() == layout["lines"].size());
    for (std::size_t li = 0; li < d.lines().size(); ++li) {
        std::vector<double> parsed;
        for (std::size_t w : d.lines()[li].words) parsed.push_back(d.words()[w].width);
        const auto& ref = layout["lines"][li]["widths"];
        std::vector<unsigned> oracle;
        for (std::size_t i = 0; i + 1 < ref.size(); ++i) {
            oracle.push_back(ref[i].get<double>() > ref[i + 1].get<double>() ? 1 : 0);
        }
        CHECK(classify(parsed) == oracle);
    }
}

TEST_CASE("class histogram covers every class") {
    for (std::size_t c = 1; c <= 8; ++c) {
        std::map<unsigned, std::size_t> hist;
        for (const Segment& s : segments(fixture(), {}, c)) ++hist[s.cls];
        CHECK(hist.size() == c);
    }
    // Four labels per segment: the label sum reaches at most class 4.
    Params sum;
    sum.map = ClassMap::label_sum;
    for (std::size_t c = 1; c <= 5; ++c) {
        std::map<unsigned, std::size_t> hist;
        for (const Segment& s : segments(fixture(), sum, c)) ++hist[s.cls];
        CHECK(hist.size() == c);
    }
}

TEST_CASE("segments share boundary words") {
    const auto segs = segments(fixture(), {}, 8);
    REQUIRE(segs.size() > 100);
    for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
        CHECK(segs[i].words.size() == 5);
        CHECK(segs[i].gaps.size() == 4);
        if (segs[i].line == segs[i + 1].line) CHECK(segs[i].words.back() == segs[i + 1].words.front());
    }
}

TEST_CASE("uniform spaces shift to the margin") {
    const std::string pdf = testing::simple_page(
        "BT /F1 10 Tf 72 700 Td [(aa) -312 (bb) -312 (cc) -312 (dd) -312 (ee)] TJ ET");
    const Document d = Document::parse(pdf);
    Params p;
    p.classes = 1;
    auto one = plan(d, Bits{1}, p);
    REQUIRE(one.encoded == 1);
    CHECK(one.gap_width.at(0) == doctest::Approx(292));
    CHECK(one.gap_width.at(1) == doctest::Approx(332));
    CHECK(one.gap_width.at(2) == doctest::Approx(292));
    CHECK(one.gap_width.at(3) == doctest::Approx(332));
    auto zero = plan(d, Bits{0}, p);
    CHECK(zero.gap_width.at(0) == doctest::Approx(332));
    CHECK(zero.gap_width.at(1) == doctest::Approx(292));
    CHECK(plan(d, Bits{}, p).gap_width.empty());

    Edits e;
    e.gap_width = one.gap_width;
    const Document w = Document::parse(d.write(e));
    CHECK(w.words().back().x_end == doctest::Approx(d.words().back().x_end));
    auto r = extract(w, 1, p);
    CHECK(r.bits == Bits{1});
    CHECK(r.confidence == doctest::Approx(1.0));
}

TEST_CASE("cramped segments are skipped") {
    const Document d = Document::parse(testing::simple_page(
        "BT /F1 10 Tf 72 700 Td [(aa) -215 (bb) -215 (cc) -215 (dd) -215 (ee)] TJ ET"));
    auto sp = plan(d, Bits{1}, {});
    CHECK(sp.encoded == 0);
    CHECK(sp.skipped == 1);
    CHECK(sp.gap_width.empty());
    CHECK(sp.to_json()["segments"][0]["reason"] == "segment too cramped");
}

TEST_CASE("no complete segment") {
    const Document d = Document::parse(testing::simple_page("BT /F1 10 Tf 72 700 Td (one two three) Tj ET"));
    CHECK_THROWS_AS(extract(d, 8), NoSignalError);
}

TEST_CASE("fixture round trip keeps line widths") {
    const Bits p = payload_a6a3ca();
    const SpacePlan sp = plan(fixture(), p);
    CHECK(sp.skipped == 0);
    const Document w = watermarked(p);
    std::map<std::size_t, double> shift;
    for (const auto& [g, width] : sp.gap_width) {
        shift[fixture().words()[fixture().gaps()[g].left].line] += width - fixture().gaps()[g].width;
    }
    for (const auto& [line, s] : shift) CHECK(std::abs(s) < 1.0);
    for (std::size_t li = 0; li < w.lines().size(); ++li) {
        const auto& a = fixture().words()[fixture().lines()[li].words.back()];
        const auto& b = w.words()[w.lines()[li].words.back()];
        CHECK(b.x_end == doctest::Approx(a.x_end).epsilon(1e-6));
    }
    auto r = extract(w, p.size());
    CHECK(r.bits == p);
    CHECK(r.confidence == doctest::Approx(1.0));
    CHECK(std::count(r.erased.begin(), r.erased.end(), true) == 0);

    // The unmarked document has no signal at all.
    auto clean = extract(fixture(), p.size());
    CHECK(clean.confidence == doctest::Approx(0.0));
    CHECK(std::count(clean.erased.begin(), clean.erased.end(), true) == static_cast<long>(p.size()));
}

TEST_CASE("plan is deterministic") {
    const Bits p = payload_a6a3ca();
    CHECK(plan(fixture(), p).to_json() == plan(fixture(), p).to_json());
}

TEST_CASE("crop to C segments") {
    const Bits p = payload_a6a3ca();
    const Document w = watermarked(p);
    const std::size_t n = w.lines().size();
    for (std::size_t start = 0; start < n; ++start) {
        std::size_t end = start;
        std::size_t segs = 0;
        while (end < n && segs < p.size()) segs += line_segments(w, end++);
        if (segs < p.size()) break;
        Edits crop;
        for (std::size_t li = 0; li < n; ++li) {
            if (li < start || li >= end) crop.remove_lines.insert(li);
        }
        const Document c = Document::parse(w.write(crop));
        auto r = extract(c, p.size());
        CHECK(r.bits == p);
        CHECK(r.confidence >= 0.9);
    }
}

TEST_CASE("equalized spaces give no payload") {
    const Bits p = payload_a6a3ca();
    const Document w = watermarked(p);
    Edits eq;
    for (const auto& line : w.lines()) {
        double sum = 0;
        for (std::size_t g : line.gaps) sum += w.gaps()[g].width;
        for (std::size_t g : line.gaps) eq.gap_width[g] = sum / static_cast<double>(line.gaps.size());
    }
    const Document flat = Document::parse(w.write(eq));
    auto r = extract(flat, p.size());
    CHECK(r.confidence == doctest::Approx(0.0));
    CHECK(std::count(r.erased.begin(), r.erased.end(), true) == static_cast<long>(p.size()));
    CHECK(r.silent == r.segments);
}

TEST_CASE("one flipped segment is outvoted") {
    const Bits p = payload_a6a3ca();
    const Document w = watermarked(p);
    const auto segs = segments(w, {}, p.size());
    for (std::size_t si : {0UL, 7UL, 40UL}) {
        Edits flip;
        const auto& g = segs[si].gaps;
        for (std::size_t i = 0; i < g.size(); ++i) {
            // Swap odd and even spaces: the difference changes sign.
            flip.gap_width[g[i]] = w.gaps()[g[i % 2 ? i - 1 : i + 1]].width;
        }
        auto r = extract(Document::parse(w.write(flip)), p.size());
        CHECK(r.bits == p);
    }
}
