#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "support/pdf_builder.hpp"
#include "tracemark/pdfio/document.hpp"

using namespace tracemark;
using namespace tracemark::pdfio;

namespace {

const std::string kFixtures = TRACEMARK_FIXTURES;

nlohmann::json layout_oracle() {
    std::ifstream in(kFixtures + "/advent_layout.json");
    return nlohmann::json::parse(in);
}

const Document& advent() {
    static const Document doc = Document::load(kFixtures + "/advent.pdf");
    return doc;
}

std::vector<std::string> texts(const Document& d) {
    std::vector<std::string> out;
    for (const Word& w : d.words()) out.push_back(w.text);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("object lexer round trip") {
    Lexer lx("<< /A 1 /B [2.5 (x\\(y\\)) <414243> /N#20a] /R 12 0 R /T true /Z null >>");
    Object o = lx.parse_object();
    REQUIRE(o.is(Object::Kind::dict));
    CHECK(o.get("A")->as_int() == 1);
    const auto& arr = o.get("B")->items();
    CHECK(arr[0].as_number() == doctest::Approx(2.5));
    CHECK(arr[1].as_string() == "x(y)");
    CHECK(arr[2].as_string() == "ABC");
    CHECK(arr[3].as_name() == "N a");
    CHECK(o.get("R")->as_ref() == Ref{12, 0});
    CHECK(o.get("T")->as_bool());
    CHECK(o.get("Z")->is(Object::Kind::null));
    Lexer again(write_object(o));
    CHECK(write_object(again.parse_object()) == write_object(o));
}

TEST_CASE("octal escapes and nested parentheses") {
    Lexer lx("(a\\101(b)c\\\\)");
    CHECK(lx.parse_object().as_string() == "aA(b)c\\");
}

TEST_CASE("content operators keep byte ranges") {
    const std::string data = "BT /F1 9 Tf\n[(a)-300(b)]TJ ET";
    auto ops = parse_content(data);
    REQUIRE(ops.size() == 4);
    CHECK(ops[1].op == "Tf");
    CHECK(data.substr(ops[2].begin, ops[2].end - ops[2].begin) == "[(a)-300(b)]TJ");
}

TEST_CASE("fixture words and lines match the generator") {
    const auto oracle = layout_oracle();
    const Document& d = advent();
    REQUIRE(d.lines().size() == oracle["lines"].size());
    for (std::size_t i = 0; i < d.lines().size(); ++i) {
        const Line& line = d.lines()[i];
        const auto& ol = oracle["lines"][i];
        CHECK(line.baseline == doctest::Approx(ol["baseline"].get<double>()).epsilon(1e-6));
        REQUIRE(line.words.size() == ol["words"].size());
        for (std::size_t k = 0; k < line.words.size(); ++k) {
            const Word& w = d.words()[line.words[k]];
            CHECK(w.text == ol["words"][k].get<std::string>());
            CHECK(w.width == doctest::Approx(ol["widths"][k].get<double>()));
        }
        REQUIRE(line.gaps.size() == ol["gaps"].size());
        for (std::size_t k = 0; k < line.gaps.size(); ++k) {
            CHECK(d.gaps()[line.gaps[k]].adjustable);
            CHECK(d.gaps()[line.gaps[k]].width == doctest::Approx(ol["gaps"][k].get<double>()));
        }
    }
    CHECK(d.leading() == doctest::Approx(10.8));
    CHECK(d.pages().front().media_top == 792);
}

TEST_CASE("kerning inside a word stays in the word") {
    const Document& d = advent();
    const Word& branch = d.words()[12];
    CHECK(branch.text == "branch");
    const ShowOp& show = d.shows()[branch.show];
    std::size_t numbers = 0;
    for (std::size_t a = branch.atom_begin; a < branch.atom_end; ++a) numbers += show.atoms[a].is_code ? 0 : 1;
    CHECK(numbers == 1);
}

TEST_CASE("stock font copy reads the same") {
    const Document stock = Document::load(kFixtures + "/advent_stock.pdf");
    CHECK(texts(stock) == texts(advent()));
    const Font& f = stock.font_of(stock.words()[0]);
    CHECK_FALSE(f.embedded);
    CHECK(advent().font_of(advent().words()[0]).embedded);
    for (std::size_t i = 0; i < stock.words().size(); ++i) {
        CHECK(stock.words()[i].width == doctest::Approx(advent().words()[i].width));
    }
}

TEST_CASE("unedited write keeps every object's bytes") {
    const std::string original = read_file(kFixtures + "/advent.pdf");
    const std::string out = advent().write({});
    const PdfFile in = PdfFile::parse(original);
    const PdfFile again = PdfFile::parse(out);
    CHECK(again.objects().size() == in.objects().size());
    for (const auto& [num, entry] : in.objects()) {
        const std::string head = std::to_string(num) + " 0 obj\n";
        const std::size_t a = original.find("\n" + head) + 1;
        const std::size_t b = original.find("endobj", a) + 6;
        CHECK(out.find(original.substr(a, b - a)) != std::string::npos);
    }
    CHECK(texts(Document::parse(out)) == texts(advent()));
}

TEST_CASE("word replacement edits one operator") {
    const Document& d = advent();
    Edits e;
    e.replace[2] = "coming";
    const Document out = Document::parse(d.write(e));
    auto expected = texts(d);
    expected[2] = "coming";
    CHECK(texts(out) == expected);
    for (std::size_t g = 0; g < d.gaps().size(); ++g) CHECK(out.gaps()[g].width == doctest::Approx(d.gaps()[g].width));
    CHECK(out.lines()[1].words.front() == d.lines()[1].words.front());
}

TEST_CASE("rejustify keeps the line extent") {
    const Document& d = advent();
    const Line& line = d.lines()[3];
    const std::size_t target = line.words[3];
    REQUIRE(d.words()[target].text == "large");
    Edits e;
    e.replace[target] = "big";
    e.rejustify = true;
    const Document out = Document::parse(d.write(e));
    REQUIRE(out.words().size() == d.words().size());
    const Line& nl = out.lines()[3];
    CHECK(out.words()[nl.words.back()].x_end == doctest::Approx(d.words()[line.words.back()].x_end).epsilon(1e-4));
    double before = 0, after = 0;
    for (std::size_t g : line.gaps) before += d.gaps()[g].width;
    for (std::size_t g : nl.gaps) after += out.gaps()[g].width;
    const Font& f = d.font_of(d.words()[target]);
    CHECK(before - after == doctest::Approx(d.measure("big", f) - d.words()[target].width));
}

TEST_CASE("edits that would merge words are refused") {
    const Document& d = advent();
    Edits e;
    e.replace[d.lines()[3].words[4]] = "remarkable";
    e.rejustify = true;
    CHECK_THROWS_AS(d.write(e), EditError);
    Edits g;
    g.gap_width[0] = kSpaceThreshold;
    CHECK_THROWS_AS(d.write(g), EditError);
}

TEST_CASE("gap widths can be set") {
    const Document& d = advent();
    Edits e;
    e.gap_width[0] = 350;
    e.gap_width[20] = 260.5;
    const Document out = Document::parse(d.write(e));
    CHECK(out.gaps()[0].width == doctest::Approx(350));
    CHECK(out.gaps()[20].width == doctest::Approx(260.5));
    CHECK(out.gaps()[1].width == doctest::Approx(d.gaps()[1].width));
    CHECK(texts(out) == texts(d));
}

TEST_CASE("insertions and deletions") {
    const Document& d = advent();
    Edits e;
    e.insert_after[5] = {"now"};
    e.remove.insert(30);
    const Document out = Document::parse(d.write(e));
    auto expected = texts(d);
    expected.erase(expected.begin() + 30);
    expected.insert(expected.begin() + 6, "now");
    CHECK(texts(out) == expected);
}

TEST_CASE("font code permutation renders the same text") {
    const Document& d = advent();
    const auto used = d.used_codes("F1");
    REQUIRE(used.size() == 67);
    std::vector<std::uint8_t> codes(used.begin(), used.end());
    FontPatch patch{"F1", {}};
    for (std::size_t i = 0; i < codes.size(); ++i) patch.code_map[codes[i]] = codes[(i + 1) % codes.size()];
    Edits e;
    e.font_patches.push_back(patch);
    const Document out = Document::parse(d.write(e));
    CHECK(texts(out) == texts(d));
    CHECK(out.used_codes("F1") == used);
    const Font& f = out.font_of(out.words()[0]);
    CHECK(f.glyph[codes[1]] == d.font_of(d.words()[0]).glyph[codes[0]]);
    for (std::size_t i = 0; i < d.words().size(); ++i) CHECK(out.words()[i].width == doctest::Approx(d.words()[i].width));

    const Document stock = Document::load(kFixtures + "/advent_stock.pdf");
    const Document stock_out = Document::parse(stock.write(e));
    CHECK(texts(stock_out) == texts(stock));
}

TEST_CASE("cropping keeps remaining positions") {
    const Document& d = advent();
    Edits e;
    for (std::size_t l = 40; l < d.lines().size(); ++l) e.remove_lines.insert(l);
    e.remove_lines.insert(10);
    const Document out = Document::parse(d.write(e));
    REQUIRE(out.lines().size() == 39);
    CHECK(out.lines()[10].baseline == doctest::Approx(d.lines()[11].baseline));
    CHECK(out.lines()[9].baseline == doctest::Approx(d.lines()[9].baseline));
}

TEST_CASE("metadata stripping") {
    Edits e;
    e.strip_metadata = true;
    const PdfFile out = PdfFile::parse(advent().write(e));
    CHECK(out.trailer().get("Info") == nullptr);
}

TEST_CASE("literal spaces are gaps that can be adjusted") {
    const std::string pdf = testing::simple_page("BT /F1 10 Tf 72 700 Td (one two  three) Tj ET");
    const Document d = Document::parse(pdf);
    REQUIRE(texts(d) == std::vector<std::string>{"one", "two", "three"});
    CHECK(d.gaps()[0].width == doctest::Approx(278));
    CHECK(d.gaps()[1].width == doctest::Approx(556));
    Edits e;
    e.gap_width[0] = 300;
    const Document out = Document::parse(d.write(e));
    CHECK(texts(out) == texts(d));
    CHECK(out.gaps()[0].width == doctest::Approx(300));
    CHECK(out.gaps()[1].width == doctest::Approx(556));
}

TEST_CASE("separate operators on one baseline give fixed gaps") {
    const Document d = Document::parse(
        testing::simple_page("BT /F1 10 Tf 72 700 Td (left) Tj 30 0 Td (right) Tj ET"));
    REQUIRE(d.gaps().size() == 1);
    CHECK_FALSE(d.gaps()[0].adjustable);
    CHECK(d.gaps()[0].width == doctest::Approx(3000 - d.words()[0].width));
    Edits e;
    e.gap_width[0] = 500;
    CHECK_THROWS_AS(d.write(e), EditError);
}

TEST_CASE("unsupported layouts are rejected") {
    CHECK_THROWS_AS(Document::parse(testing::simple_page("BT /F1 10 Tf 72 700 Td (a) Tj ET", " /Encrypt 9 0 R")),
                    UnsupportedLayout);
    // Second column starts back at the top.
    CHECK_THROWS_AS(Document::parse(testing::simple_page(
                        "BT /F1 10 Tf 72 700 Td (a b) Tj 0 -12 Td (c d) Tj 250 12 Td (e f) Tj ET")),
                    UnsupportedLayout);
    CHECK_THROWS_AS(Document::parse(testing::simple_page("BT /F1 10 Tf 0 1 -1 0 300 300 Tm (up) Tj ET")),
                    UnsupportedLayout);
    try {
        Document::parse(testing::simple_page("BT /F1 10 Tf 72 700 Td (a b) Tj 0 -12 Td (c) Tj 250 12 Td (e) Tj ET"));
        FAIL("expected UnsupportedLayout");
    } catch (const UnsupportedLayout& ex) {
        CHECK(ex.where().find("page 1") != std::string::npos);
    }
}

TEST_CASE("damaged xref falls back to an object scan") {
    std::string pdf = testing::simple_page("BT /F1 10 Tf 72 700 Td (x y) Tj ET");
    const std::size_t sx = pdf.rfind("startxref");
    pdf.replace(sx, std::string::npos, "startxref\n12\n%%EOF\n");
    CHECK(texts(Document::parse(pdf)) == std::vector<std::string>{"x", "y"});
}

TEST_CASE("dump lists lines") {
    const auto j = advent().dump();
    CHECK(j["pages"][0]["lines"].size() == 63);
    CHECK(j["pages"][0]["lines"][0]["words"][0]["text"] == "Before");
}
