#include "tracemark/pdfio/document.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace tracemark::pdfio {

namespace {

constexpr double kBaselineTolerance = 0.5;

struct TextState {
    double tc = 0;
    double tw = 0;
    double th = 1;
    double tl = 0;
    double rise = 0;
    double size = 0;
    std::string font;
    Matrix tm;
    Matrix tlm;
};

std::vector<Atom> atoms_of(const ContentOp& op) {
    std::vector<Atom> atoms;
    auto push_string = [&](const Object& s) {
        for (unsigned char c : s.as_string()) atoms.push_back({true, c, 0});
    };
    if (op.op == "TJ") {
        if (op.operands.empty() || !op.operands.back().is(Object::Kind::array)) {
            throw PdfSyntaxError(op.begin, "TJ needs an array");
        }
        for (const Object& item : op.operands.back().items()) {
            if (item.is(Object::Kind::string)) push_string(item);
            else if (item.is_number()) atoms.push_back({false, 0, item.as_number()});
        }
    } else if (!op.operands.empty() && op.operands.back().is(Object::Kind::string)) {
        push_string(op.operands.back());
    }
    return atoms;
}

bool is_show(const std::string& op) { return op == "TJ" || op == "Tj" || op == "'" || op == "\""; }

} // namespace

bool Edits::empty() const {
    return replace.empty() && insert_after.empty() && remove.empty() && gap_width.empty() &&
           remove_lines.empty() && font_patches.empty() && font_replacements.empty() && !rejustify &&
           !strip_metadata;
}

Document Document::load(const std::string& path, double space_threshold) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), space_threshold);
}

Document Document::parse(std::string bytes, double space_threshold) {
    if (!(space_threshold > 0)) throw ConfigurationError("space threshold must be positive");
    Document d;
    d.space_threshold_ = space_threshold;
    d.file_ = PdfFile::parse(std::move(bytes));
    d.read_pages();
    for (std::size_t p = 0; p < d.pages_.size(); ++p) d.read_text(p);
    d.build_lines();
    return d;
}

void Document::read_pages() {
    const Object* root = file_.trailer().get("Root");
    if (!root) throw PdfSyntaxError(0, "trailer has no /Root");
    const Object& catalog = file_.resolve(*root);
    const Object* pages = catalog.get("Pages");
    if (!pages) throw PdfSyntaxError(0, "catalog has no /Pages");

    struct Inherited {
        const Object* resources = nullptr;
        const Object* media = nullptr;
    };
    std::function<void(const Object&, Inherited, int)> walk = [&](const Object& node_ref, Inherited inh, int depth) {
        if (depth > 64) throw PdfSyntaxError(0, "page tree too deep");
        const Object& node = file_.resolve(node_ref);
        if (const Object* r = node.get("Resources")) inh.resources = r;
        if (const Object* m = node.get("MediaBox")) inh.media = m;
        const Object* type = node.get("Type");
        const bool is_pages = (type && type->is(Object::Kind::name) && type->as_name() == "Pages") || node.get("Kids");
        if (is_pages) {
            for (const Object& kid : file_.resolve(*node.get("Kids")).items()) walk(kid, inh, depth + 1);
            return;
        }
        Page page;
        if (!node_ref.is(Object::Kind::ref)) throw PdfSyntaxError(0, "page is not an indirect object");
        page.ref = node_ref.as_ref();
        page.media_top = 792;
        if (inh.media) {
            const auto& box = file_.resolve(*inh.media).items();
            page.media_top = std::max(file_.resolve(box[1]).as_number(), file_.resolve(box[3]).as_number());
        }
        if (const Object* c = node.get("Contents")) {
            if (c->is(Object::Kind::ref) && file_.resolve(*c).is(Object::Kind::stream)) {
                page.contents.push_back(c->as_ref());
            } else {
                for (const Object& part : file_.resolve(*c).items()) page.contents.push_back(part.as_ref());
            }
        }
        for (std::size_t i = 0; i < page.contents.size(); ++i) {
            const Object& s = file_.get(page.contents[i]);
            if (const Object* f = s.get("Filter")) page.flate = page.flate || f->is(Object::Kind::name);
            if (i) page.stream += "\n";
            page.stream += file_.decode_stream(s);
        }
        if (inh.resources) {
            const Object& res = file_.resolve(*inh.resources);
            if (const Object* fonts = res.get("Font")) {
                for (const auto& [name, f] : file_.resolve(*fonts).entries()) {
                    page.fonts.emplace(name, load_font(file_, name, f));
                }
            }
        }
        page.ops = parse_content(page.stream);
        pages_.push_back(std::move(page));
    };
    walk(*pages, {}, 0);
}

const Font& Document::font(std::size_t page, const std::string& resource) const {
    auto it = pages_.at(page).fonts.find(resource);
    if (it == pages_.at(page).fonts.end()) {
        throw UnsupportedLayout("text uses undefined font resource", "/" + resource);
    }
    return it->second;
}

void Document::read_text(std::size_t page_index) {
    const Page& page = pages_[page_index];
    std::vector<Matrix> ctm_stack;
    Matrix ctm;
    TextState ts;
    std::vector<TextState> ts_stack;

    auto location = [&](std::size_t op) {
        return "page " + std::to_string(page_index + 1) + ", operator " + std::to_string(op);
    };

    for (std::size_t oi = 0; oi < page.ops.size(); ++oi) {
        const ContentOp& op = page.ops[oi];
        const auto& v = op.operands;
        auto num = [&](std::size_t i) { return v.at(i).as_number(); };
        if (op.op == "q") {
            ctm_stack.push_back(ctm);
            ts_stack.push_back(ts);
        } else if (op.op == "Q") {
            if (!ctm_stack.empty()) {
                ctm = ctm_stack.back();
                ctm_stack.pop_back();
                const Matrix tm = ts.tm;
                const Matrix tlm = ts.tlm;
                ts = ts_stack.back();
                ts.tm = tm;
                ts.tlm = tlm;
                ts_stack.pop_back();
            }
        } else if (op.op == "cm") {
            ctm = Matrix::from_operands(v) * ctm;
        } else if (op.op == "BT") {
            ts.tm = ts.tlm = Matrix{};
        } else if (op.op == "Tc") {
            ts.tc = num(0);
        } else if (op.op == "Tw") {
            ts.tw = num(0);
        } else if (op.op == "Tz") {
            ts.th = num(0) / 100.0;
        } else if (op.op == "TL") {
            ts.tl = num(0);
        } else if (op.op == "Ts") {
            ts.rise = num(0);
        } else if (op.op == "Tf") {
            ts.font = v.at(0).as_name();
            ts.size = num(1);
        } else if (op.op == "Td" || op.op == "TD") {
            if (op.op == "TD") ts.tl = -num(1);
            ts.tlm = Matrix::translate(num(0), num(1)) * ts.tlm;
            ts.tm = ts.tlm;
        } else if (op.op == "Tm") {
            ts.tlm = ts.tm = Matrix::from_operands(v);
        } else if (op.op == "T*") {
            ts.tlm = Matrix::translate(0, -ts.tl) * ts.tlm;
            ts.tm = ts.tlm;
        } else if (is_show(op.op)) {
            if (op.op == "'" || op.op == "\"") {
                if (op.op == "\"") {
                    ts.tw = num(0);
                    ts.tc = num(1);
                }
                ts.tlm = Matrix::translate(0, -ts.tl) * ts.tlm;
                ts.tm = ts.tlm;
            }
            if (ts.font.empty() || ts.size == 0) throw UnsupportedLayout("text shown without a font", location(oi));
            const Font& f = font(page_index, ts.font);
            ShowOp show{page_index, oi, ts.font, ts.size, atoms_of(op)};
            const std::size_t show_index = shows_.size();
            const double per_unit = ts.size / 1000.0 * ts.th;
            const double tc_units = ts.tc * 1000.0 / ts.size;
            const double tw_units = ts.tw * 1000.0 / ts.size;

            auto position = [&](double& x, double& y) {
                const Matrix m = ts.tm * ctm;
                if (std::abs(m.b) > 1e-6 || std::abs(m.c) > 1e-6 || m.a <= 0 || m.d <= 0) {
                    throw UnsupportedLayout("rotated, skewed or mirrored text", location(oi));
                }
                m.apply(0, ts.rise, x, y);
            };

            bool in_word = false;
            Word cur;
            std::size_t last_code = 0;
            double pending_kern = 0;
            std::optional<std::size_t> gap_start;
            double gap_width = 0;
            std::u32string text;

            auto finish_word = [&](std::size_t end_atom) {
                if (!in_word) return;
                std::string utf8;
                for (char32_t c : text) utf8 += utf8_encode(c);
                cur.text = std::move(utf8);
                cur.atom_end = end_atom;
                cur.x_end = cur.x + cur.width * per_unit * (ts.tm * ctm).a;
                words_.push_back(cur);
                in_word = false;
                gap_start.reset();
                gap_width = 0;
            };

            for (std::size_t ai = 0; ai < show.atoms.size(); ++ai) {
                const Atom& a = show.atoms[ai];
                if (!a.is_code) {
                    if (std::abs(a.value) > space_threshold_) {
                        if (in_word) finish_word(last_code + 1);
                        if (!gap_start) gap_start = ai;
                        gap_width += -a.value;
                    } else if (in_word) {
                        pending_kern += a.value;
                    } else if (gap_start) {
                        gap_width += -a.value;
                    }
                    ts.tm = Matrix::translate(-a.value / 1000.0 * ts.size * ts.th, 0) * ts.tm;
                    continue;
                }
                const double w0 = f.width[a.code];
                const bool space = f.unicode[a.code] == U' ';
                if (space) {
                    if (in_word) finish_word(last_code + 1);
                    if (!gap_start) gap_start = ai;
                    gap_width += w0 + tc_units + (a.code == 32 ? tw_units : 0);
                } else {
                    if (!in_word) {
                        if (gap_start && !words_.empty() && words_.back().show == show_index) {
                            gaps_.push_back({words_.size() - 1, gap_width, true, show_index, *gap_start, ai});
                        }
                        cur = Word{};
                        cur.page = page_index;
                        cur.show = show_index;
                        cur.atom_begin = ai;
                        cur.font = ts.font;
                        cur.font_size = ts.size;
                        cur.char_spacing = tc_units;
                        position(cur.x, cur.y);
                        text.clear();
                        in_word = true;
                        gap_start.reset();
                        gap_width = 0;
                    } else {
                        cur.width -= pending_kern;
                    }
                    pending_kern = 0;
                    cur.width += w0 + tc_units;
                    text.push_back(f.unicode[a.code] ? f.unicode[a.code] : U'�');
                    last_code = ai;
                }
                const double adv = (w0 / 1000.0 * ts.size + ts.tc + (a.code == 32 ? ts.tw : 0)) * ts.th;
                ts.tm = Matrix::translate(adv, 0) * ts.tm;
            }
            finish_word(last_code + 1);
            shows_.push_back(std::move(show));
        }
    }
}

void Document::build_lines() {
    std::vector<Gap> atom_gaps = std::move(gaps_);
    gaps_.clear();
    std::map<std::size_t, Gap> by_left;
    for (const Gap& g : atom_gaps) by_left[g.left] = g;

    for (std::size_t i = 0; i < words_.size(); ++i) {
        Word& w = words_[i];
        const bool new_line = lines_.empty() || lines_.back().page != w.page ||
                              std::abs(lines_.back().baseline - w.y) > kBaselineTolerance;
        if (new_line) {
            if (!lines_.empty() && lines_.back().page == w.page && w.y > lines_.back().baseline + kBaselineTolerance) {
                throw UnsupportedLayout("text runs upward; multi-column or out-of-order layout",
                                        "page " + std::to_string(w.page + 1) + ", word '" + w.text + "'");
            }
            lines_.push_back({w.page, w.y, {}, {}});
        } else {
            const Word& prev = words_[i - 1];
            if (w.x < prev.x_end - 1.0) {
                throw UnsupportedLayout("overlapping text on one baseline; multi-column layout",
                                        "page " + std::to_string(w.page + 1) + ", word '" + w.text + "'");
            }
            auto it = by_left.find(i - 1);
            Gap g;
            if (it != by_left.end()) {
                g = it->second;
            } else {
                g.left = i - 1;
                g.adjustable = false;
                g.width = (w.x - prev.x_end) * 1000.0 / prev.font_size;
                g.show = prev.show;
                g.atom_begin = g.atom_end = prev.atom_end;
            }
            lines_.back().gaps.push_back(gaps_.size());
            gaps_.push_back(g);
        }
        w.line = lines_.size() - 1;
        lines_.back().words.push_back(i);
    }
}

std::optional<std::size_t> Document::gap_after(std::size_t word) const {
    if (word + 1 >= words_.size()) return std::nullopt;
    const Line& line = lines_[words_[word].line];
    for (std::size_t k = 0; k + 1 < line.words.size(); ++k) {
        if (line.words[k] == word) return line.gaps[k];
    }
    return std::nullopt;
}

double Document::leading() const {
    std::vector<double> diffs;
    for (std::size_t i = 1; i < lines_.size(); ++i) {
        if (lines_[i].page == lines_[i - 1].page) diffs.push_back(lines_[i - 1].baseline - lines_[i].baseline);
    }
    if (diffs.empty()) return words_.empty() ? 12.0 : words_.front().font_size * 1.2;
    std::nth_element(diffs.begin(), diffs.begin() + static_cast<std::ptrdiff_t>(diffs.size() / 2), diffs.end());
    return diffs[diffs.size() / 2];
}

double Document::measure(std::string_view text, const Font& f, double char_spacing) const {
    auto codes = f.encode(text);
    if (!codes) throw EditError("'" + std::string(text) + "' cannot be set in font /" + f.resource);
    double w = 0;
    for (unsigned char c : *codes) w += f.width[c] + char_spacing;
    return w;
}

std::set<std::uint8_t> Document::used_codes(const std::string& resource) const {
    std::set<std::uint8_t> used;
    for (const ShowOp& s : shows_) {
        if (s.font != resource) continue;
        for (const Atom& a : s.atoms) {
            if (a.is_code) used.insert(a.code);
        }
    }
    return used;
}

std::string Document::page_content(std::size_t page_index, const Edits& edits,
                                   const std::vector<double>& gap_targets) const {
    const Page& page = pages_[page_index];
    std::map<std::size_t, std::string> regenerated;
    std::map<std::string, const FontPatch*> patches;
    for (const FontPatch& p : edits.font_patches) patches[p.resource] = &p;

    for (std::size_t si = 0; si < shows_.size(); ++si) {
        const ShowOp& show = shows_[si];
        if (show.page != page_index) continue;
        const Font& f = font(page_index, show.font);
        // Owners of atom ranges in this operator.
        std::vector<std::size_t> op_words;
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            if (words_[wi].show == si) op_words.push_back(wi);
        }
        bool changed = patches.count(show.font) != 0;
        bool all_cropped = !op_words.empty();
        for (std::size_t wi : op_words) {
            const bool cropped = edits.remove_lines.count(words_[wi].line) != 0;
            all_cropped = all_cropped && cropped;
            if (cropped || edits.replace.count(wi) || edits.remove.count(wi) || edits.insert_after.count(wi)) {
                changed = true;
            }
            if (auto g = gap_after(wi); g && gaps_[*g].show == si && gaps_[*g].adjustable &&
                                        std::abs(gap_targets[*g] - gaps_[*g].width) > 1e-9) {
                changed = true;
            }
        }
        if (!changed || op_words.empty()) continue;

        const ContentOp& op = page.ops[show.op];
        std::string prefix;
        if (op.op == "'" || op.op == "\"") {
            if (op.op == "\"") prefix = write_number(op.operands[0].as_number()) + " Tw " +
                                        write_number(op.operands[1].as_number()) + " Tc ";
            prefix += "T* ";
        }
        if (all_cropped) {
            regenerated[show.op] = prefix.empty() ? std::string() : prefix.substr(0, prefix.size() - 1);
            continue;
        }

        std::vector<Atom> out;
        auto emit_text = [&](const std::string& text) {
            auto codes = f.encode(text);
            if (!codes) throw EditError("'" + text + "' cannot be set in font /" + show.font);
            for (unsigned char c : *codes) out.push_back({true, c, 0});
        };
        auto default_gap = [&](std::size_t wi) {
            if (auto g = gap_after(wi); g && gaps_[*g].adjustable) return gaps_[*g].width;
            const Line& line = lines_[words_[wi].line];
            double sum = 0;
            std::size_t n = 0;
            for (std::size_t g : line.gaps) {
                if (gaps_[g].adjustable) {
                    sum += gaps_[g].width;
                    ++n;
                }
            }
            return n ? sum / static_cast<double>(n) : 2 * space_threshold_;
        };

        auto removed = [&](std::size_t k) {
            const std::size_t wi = op_words[k];
            return edits.remove.count(wi) != 0 || edits.remove_lines.count(words_[wi].line) != 0;
        };
        auto append = [&](std::size_t from, std::size_t to) {
            out.insert(out.end(), show.atoms.begin() + static_cast<std::ptrdiff_t>(from),
                       show.atoms.begin() + static_cast<std::ptrdiff_t>(to));
        };
        // A removed word takes the space after it, or before it when it ends the operator.
        std::vector<bool> drop_gap(op_words.size() + 1, false);
        for (std::size_t k = 0; k < op_words.size(); ++k) {
            if (!removed(k)) continue;
            if (k + 1 < op_words.size()) drop_gap[k + 1] = true;
            else if (k > 0) drop_gap[k] = true;
        }
        append(0, words_[op_words.front()].atom_begin);
        for (std::size_t k = 0; k < op_words.size(); ++k) {
            const std::size_t wi = op_words[k];
            const Word& w = words_[wi];
            if (k > 0 && !drop_gap[k]) {
                const std::size_t before = out.size();
                append(words_[op_words[k - 1]].atom_end, w.atom_begin);
                auto g = gap_after(op_words[k - 1]);
                if (g && gaps_[*g].show == si && gaps_[*g].adjustable) {
                    const double delta = gap_targets[*g] - gaps_[*g].width;
                    if (std::abs(delta) > 1e-9) {
                        auto last = out.end();
                        for (auto it = out.begin() + static_cast<std::ptrdiff_t>(before); it != out.end(); ++it) {
                            if (!it->is_code) last = it;
                        }
                        if (last != out.end()) last->value -= delta;
                        else out.push_back({false, 0, -delta});
                    }
                }
            }
            if (!removed(k)) {
                if (auto rep = edits.replace.find(wi); rep != edits.replace.end()) emit_text(rep->second);
                else append(w.atom_begin, w.atom_end);
            }
            if (auto ins = edits.insert_after.find(wi); ins != edits.insert_after.end()) {
                const double gap = default_gap(wi);
                for (const std::string& extra : ins->second) {
                    out.push_back({false, 0, -gap});
                    emit_text(extra);
                }
            }
        }
        append(words_[op_words.back()].atom_end, show.atoms.size());
        if (auto p = patches.find(show.font); p != patches.end()) {
            for (Atom& a : out) {
                if (!a.is_code) continue;
                auto m = p->second->code_map.find(a.code);
                if (m != p->second->code_map.end()) a.code = m->second;
            }
        }

        std::string text = prefix + "[";
        std::string str;
        auto flush = [&] {
            if (!str.empty()) text += write_string(str);
            str.clear();
        };
        for (const Atom& a : out) {
            if (a.is_code) {
                str.push_back(static_cast<char>(a.code));
            } else {
                flush();
                if (std::abs(a.value) < 1e-9) continue;
                text += write_number(a.value);
            }
        }
        flush();
        text += "]TJ";
        regenerated[show.op] = std::move(text);
    }

    if (regenerated.empty()) return {};
    std::string out;
    std::size_t prev = 0;
    for (std::size_t oi = 0; oi < page.ops.size(); ++oi) {
        const ContentOp& op = page.ops[oi];
        auto it = regenerated.find(oi);
        if (it == regenerated.end()) continue;
        out.append(page.stream, prev, op.begin - prev);
        out += it->second;
        prev = op.end;
    }
    out.append(page.stream, prev, std::string::npos);
    return out;
}

namespace {

Object patched_font(const PdfFile& file, const Font& f, const Object& original, const FontPatch& patch) {
    std::array<std::string, 256> glyph = f.glyph;
    std::array<double, 256> width = f.width;
    std::array<char32_t, 256> unicode = f.unicode;
    for (const auto& [from, to] : patch.code_map) {
        glyph[to] = f.glyph[from];
        width[to] = f.width[from];
        unicode[to] = f.unicode[from];
    }
    Object d = original;
    const bool type3 = f.subtype == "Type3";
    double scale = 1.0;
    if (type3) {
        if (const Object* m = d.get("FontMatrix")) scale = file.resolve(*m).items()[0].as_number() * 1000.0;
    }
    Object diffs = Object::array();
    int expect = -2;
    int lo = 256, hi = -1;
    for (int c = 0; c < 256; ++c) {
        if (glyph[c].empty()) continue;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        if (!type3 && glyph[c] == winansi_glyph(static_cast<std::uint8_t>(c))) continue;
        if (c != expect) diffs.items().push_back(Object::integer(c));
        diffs.items().push_back(Object::name(glyph[c]));
        expect = c + 1;
    }
    Object enc = Object::dict();
    enc.set("Type", Object::name("Encoding"));
    if (!type3) enc.set("BaseEncoding", Object::name("WinAnsiEncoding"));
    enc.set("Differences", diffs);
    d.set("Encoding", enc);
    if (hi >= lo) {
        Object widths = Object::array();
        for (int c = lo; c <= hi; ++c) widths.items().push_back(Object::real(std::round(width[c] / scale * 1e6) / 1e6));
        d.set("FirstChar", Object::integer(lo));
        d.set("LastChar", Object::integer(hi));
        d.set("Widths", widths);
    }
    d.erase("ToUnicode");
    (void)unicode;
    return d;
}

std::string to_unicode_cmap(const std::array<std::string, 256>& glyph, const std::array<char32_t, 256>& unicode) {
    std::string body;
    int n = 0;
    char buf[64];
    for (int c = 0; c < 256; ++c) {
        if (glyph[c].empty() || unicode[c] == 0 || unicode[c] > 0xFFFF) continue;
        std::snprintf(buf, sizeof buf, "<%02X> <%04X>\n", c, static_cast<unsigned>(unicode[c]));
        body += buf;
        ++n;
    }
    return "/CIDInit /ProcSet findresource begin\n12 dict begin\nbegincmap\n"
           "/CIDSystemInfo << /Registry (Adobe) /Ordering (UCS) /Supplement 0 >> def\n"
           "/CMapName /Adobe-Identity-UCS def\n/CMapType 2 def\n"
           "1 begincodespacerange\n<00> <FF>\nendcodespacerange\n" +
           std::to_string(n) + " beginbfchar\n" + body +
           "endbfchar\nendcmap\nCMapName currentdict /CMap defineresource pop\nend\nend\n";
}

} // namespace

Object stock_font_dict(const Font& f) {
    Object d = Object::dict();
    d.set("Type", Object::name("Font"));
    d.set("Subtype", Object::name("Type1"));
    d.set("BaseFont", Object::name("Helvetica"));
    Object diffs = Object::array();
    int expect = -2;
    int lo = 256, hi = -1;
    for (int c = 0; c < 256; ++c) {
        if (f.glyph[c].empty()) continue;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
        if (f.glyph[c] == winansi_glyph(static_cast<std::uint8_t>(c))) continue;
        if (c != expect) diffs.items().push_back(Object::integer(c));
        diffs.items().push_back(Object::name(f.glyph[c]));
        expect = c + 1;
    }
    Object enc = Object::dict();
    enc.set("Type", Object::name("Encoding"));
    enc.set("BaseEncoding", Object::name("WinAnsiEncoding"));
    enc.set("Differences", diffs);
    d.set("Encoding", enc);
    if (hi >= lo) {
        Object widths = Object::array();
        for (int c = lo; c <= hi; ++c) widths.items().push_back(Object::real(f.width[c]));
        d.set("FirstChar", Object::integer(lo));
        d.set("LastChar", Object::integer(hi));
        d.set("Widths", widths);
    }
    return d;
}

std::string Document::write(const Edits& edits) const {
    for (std::size_t w : edits.remove) {
        if (w >= words_.size()) throw EditError("word index out of range");
    }
    // Target widths of every gap after explicit settings and rejustification.
    std::vector<double> targets(gaps_.size());
    for (std::size_t g = 0; g < gaps_.size(); ++g) targets[g] = gaps_[g].width;
    for (const auto& [g, width] : edits.gap_width) {
        if (g >= gaps_.size()) throw EditError("gap index out of range");
        if (!gaps_[g].adjustable) throw EditError("gap " + std::to_string(g) + " is fixed by text positioning");
        targets[g] = width;
    }
    if (edits.rejustify) {
        for (const Line& line : lines_) {
            double delta = 0;
            for (std::size_t k = 0; k < line.words.size(); ++k) {
                const std::size_t wi = line.words[k];
                const Word& w = words_[wi];
                const Font& f = font_of(w);
                if (edits.remove.count(wi)) {
                    delta -= w.width;
                    if (k < line.gaps.size()) delta -= targets[line.gaps[k]];
                    else if (k > 0) delta -= targets[line.gaps[k - 1]];
                } else if (auto r = edits.replace.find(wi); r != edits.replace.end()) {
                    delta += measure(r->second, f, w.char_spacing) - w.width;
                }
                if (auto ins = edits.insert_after.find(wi); ins != edits.insert_after.end()) {
                    const double gap = k < line.gaps.size() ? targets[line.gaps[k]] : 2 * space_threshold_;
                    for (const std::string& extra : ins->second) delta += gap + measure(extra, f, w.char_spacing);
                }
            }
            std::vector<std::size_t> adjustable;
            for (std::size_t k = 0; k < line.gaps.size(); ++k) {
                const std::size_t g = line.gaps[k];
                if (!gaps_[g].adjustable || edits.remove.count(gaps_[g].left) || edits.remove.count(gaps_[g].left + 1)) {
                    continue;
                }
                adjustable.push_back(g);
            }
            if (std::abs(delta) < 1e-9 || adjustable.empty()) continue;
            const double n = static_cast<double>(adjustable.size());
            double acc = 0;
            for (std::size_t k = 0; k < adjustable.size(); ++k) {
                const double next = std::round(-delta * static_cast<double>(k + 1) / n);
                targets[adjustable[k]] += next - acc;
                acc = next;
            }
        }
    }

    for (std::size_t g = 0; g < gaps_.size(); ++g) {
        if (!gaps_[g].adjustable || edits.remove.count(gaps_[g].left) || edits.remove.count(gaps_[g].left + 1)) continue;
        if (targets[g] <= space_threshold_ && std::abs(targets[g] - gaps_[g].width) > 1e-9) {
            throw EditError("space after '" + words_[gaps_[g].left].text + "' would fall below the word-space threshold");
        }
    }

    PdfFile out = file_;
    for (std::size_t p = 0; p < pages_.size(); ++p) {
        const Page& page = pages_[p];
        std::string content = page_content(p, edits, targets);
        if (content.empty() && !page.ops.empty()) continue;
        if (page.contents.empty()) continue;
        Object dict = out.get(page.contents.front());
        Object stream = PdfFile::make_stream(dict, content, page.flate);
        out.replace(page.contents.front(), std::move(stream));
        if (page.contents.size() > 1) {
            Object page_obj = out.get(page.ref);
            page_obj.set("Contents", Object::reference(page.contents.front()));
            out.replace(page.ref, std::move(page_obj));
        }
    }

    auto font_target = [&](const std::string& resource) -> std::pair<const Font*, Ref> {
        for (const Page& page : pages_) {
            auto it = page.fonts.find(resource);
            if (it == page.fonts.end()) continue;
            if (!it->second.ref) throw EditError("font /" + resource + " is not an indirect object");
            return {&it->second, *it->second.ref};
        }
        throw EditError("no font resource /" + resource);
    };
    for (const FontPatch& patch : edits.font_patches) {
        auto [f, ref] = font_target(patch.resource);
        Object d = patched_font(out, *f, file_.get(ref), patch);
        if (file_.get(ref).get("ToUnicode")) {
            std::array<std::string, 256> glyph = f->glyph;
            std::array<char32_t, 256> unicode = f->unicode;
            for (const auto& [from, to] : patch.code_map) {
                glyph[to] = f->glyph[from];
                unicode[to] = f->unicode[from];
            }
            Object cmap = PdfFile::make_stream(Object::dict(), to_unicode_cmap(glyph, unicode), false);
            Ref cref = file_.get(ref).get("ToUnicode")->as_ref();
            out.replace(cref, std::move(cmap));
            d.set("ToUnicode", Object::reference(cref));
        }
        out.replace(ref, std::move(d));
    }
    for (const auto& [resource, dict] : edits.font_replacements) {
        auto [f, ref] = font_target(resource);
        (void)f;
        out.replace(ref, dict);
    }
    if (edits.strip_metadata) {
        out.trailer().erase("Info");
        out.trailer().erase("ID");
        if (const Object* root = out.trailer().get("Root")) {
            Object catalog = out.get(root->as_ref());
            if (catalog.get("Metadata")) {
                catalog.erase("Metadata");
                out.replace(root->as_ref(), std::move(catalog));
            }
        }
    }
    return out.write();
}

void Document::save(const std::string& path, const Edits& edits) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    const std::string bytes = write(edits);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

nlohmann::json Document::dump() const {
    nlohmann::json j;
    j["pages"] = nlohmann::json::array();
    for (std::size_t p = 0; p < pages_.size(); ++p) {
        nlohmann::json fonts = nlohmann::json::object();
        for (const auto& [name, f] : pages_[p].fonts) {
            fonts[name] = {{"subtype", f.subtype}, {"base_font", f.base_font}, {"embedded", f.embedded}};
        }
        j["pages"].push_back({{"media_top", pages_[p].media_top}, {"fonts", fonts}, {"lines", nlohmann::json::array()}});
    }
    for (const Line& line : lines_) {
        nlohmann::json words = nlohmann::json::array();
        for (std::size_t wi : line.words) {
            const Word& w = words_[wi];
            words.push_back({{"index", wi}, {"text", w.text}, {"x", w.x}, {"width", w.width}, {"font", w.font}});
        }
        nlohmann::json gaps = nlohmann::json::array();
        for (std::size_t g : line.gaps) gaps.push_back({{"width", gaps_[g].width}, {"adjustable", gaps_[g].adjustable}});
        j["pages"][line.page]["lines"].push_back({{"baseline", line.baseline}, {"words", words}, {"gaps", gaps}});
    }
    j["leading"] = leading();
    return j;
}

} // namespace tracemark::pdfio
