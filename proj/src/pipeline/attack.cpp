#include "tracemark/pipeline/attack.hpp"

#include <charconv>
#include <sstream>

namespace tracemark::pipeline {

namespace {

std::size_t index_arg(std::size_t line, const std::string& s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw AttackScriptError(line, "bad index '" + s + "'");
    return v;
}

} // namespace

std::vector<AttackStep> parse_attack_script(const std::string& text) {
    std::vector<AttackStep> out;
    std::istringstream in(text);
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> f;
        for (std::string w; ls >> w;) f.push_back(w);
        if (f.empty()) continue;
        const std::string& cmd = f[0];
        auto want = [&](std::size_t lo, std::size_t hi) {
            if (f.size() - 1 < lo || f.size() - 1 > hi) throw AttackScriptError(n, "wrong argument count for " + cmd);
        };
        using K = AttackStep::Kind;
        if (cmd == "insert" || cmd == "replace") {
            want(2, 2);
            out.push_back({cmd == "insert" ? K::insert : K::replace, index_arg(n, f[1]), 0, f[2]});
        } else if (cmd == "delete" || cmd == "revert") {
            want(1, 1);
            out.push_back({cmd == "delete" ? K::remove : K::revert, index_arg(n, f[1]), 0, {}});
        } else if (cmd == "equalize-spaces") {
            want(0, 0);
            out.push_back({K::equalize_spaces, 0, 0, {}});
        } else if (cmd == "substitute-font") {
            want(0, 1);
            out.push_back({K::substitute_font, 0, 0, f.size() > 1 ? f[1] : std::string()});
        } else if (cmd == "crop") {
            want(2, 2);
            const auto first = index_arg(n, f[1]);
            const auto last = index_arg(n, f[2]);
            if (last < first) throw AttackScriptError(n, "crop range is empty");
            out.push_back({K::crop, first, last, {}});
        } else if (cmd == "strip-metadata") {
            want(0, 0);
            out.push_back({K::strip_metadata, 0, 0, {}});
        } else {
            throw AttackScriptError(n, "unknown command '" + cmd + "'");
        }
    }
    return out;
}

pdfio::Edits equalize_spaces(const pdfio::Document& doc) {
    pdfio::Edits e;
    for (const pdfio::Line& line : doc.lines()) {
        double sum = 0;
        std::size_t n = 0;
        for (std::size_t g : line.gaps) {
            if (!doc.gaps()[g].adjustable) continue;
            sum += doc.gaps()[g].width;
            ++n;
        }
        for (std::size_t g : line.gaps) {
            if (doc.gaps()[g].adjustable) e.gap_width[g] = sum / static_cast<double>(n);
        }
    }
    return e;
}

std::string apply_attack(const std::string& pdf, const std::vector<AttackStep>& steps,
                         const std::optional<std::string>& original, double space_threshold) {
    if (steps.empty()) return pdf;
    const auto doc = pdfio::Document::parse(pdf, space_threshold);
    std::optional<pdfio::Document> orig;
    pdfio::Edits e;
    using K = AttackStep::Kind;
    auto check_word = [&](std::size_t i) {
        if (i >= doc.words().size()) throw Error("attack refers to word " + std::to_string(i) + " of " +
                                                 std::to_string(doc.words().size()));
    };
    for (const AttackStep& s : steps) {
        switch (s.kind) {
        case K::insert:
            check_word(s.index);
            e.insert_after[s.index].push_back(s.text);
            break;
        case K::remove:
            check_word(s.index);
            e.remove.insert(s.index);
            break;
        case K::replace:
            check_word(s.index);
            e.replace[s.index] = s.text;
            break;
        case K::revert:
            check_word(s.index);
            if (!original) throw ConfigurationError("revert needs the original document");
            if (!orig) orig = pdfio::Document::parse(*original, space_threshold);
            if (s.index >= orig->words().size()) throw Error("original has no word " + std::to_string(s.index));
            e.replace[s.index] = orig->words()[s.index].text;
            break;
        case K::equalize_spaces:
            for (const auto& [g, w] : equalize_spaces(doc).gap_width) e.gap_width[g] = w;
            break;
        case K::substitute_font:
            for (const pdfio::Page& page : doc.pages()) {
                for (const auto& [name, font] : page.fonts) {
                    if (!s.text.empty() && name != s.text) continue;
                    if (!e.font_replacements.count(name)) e.font_replacements.emplace(name, pdfio::stock_font_dict(font));
                }
            }
            break;
        case K::crop:
            for (std::size_t li = 0; li < doc.lines().size(); ++li) {
                if (li < s.index || li > s.last) e.remove_lines.insert(li);
            }
            break;
        case K::strip_metadata:
            e.strip_metadata = true;
            break;
        }
    }
    return doc.write(e);
}

} // namespace tracemark::pipeline
