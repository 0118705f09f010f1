#include "tracemark/fontmark/fontmark.hpp"

#include <algorithm>
#include <set>

namespace tracemark::fontmark {

bool Sip::involution() const {
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (map[i] >= map.size() || map[map[i]] != i) return false;
    }
    return true;
}

bool Sip::identity() const {
    for (std::size_t i = 0; i < map.size(); ++i) {
        if (map[i] != i) return false;
    }
    return true;
}

std::size_t capacity(std::size_t n_slots) { return n_slots / 2 == 0 ? 0 : n_slots / 2 - 1; }

namespace {

Sip from_pairs(const std::vector<bool>& swapped, std::size_t n_slots) {
    if (swapped.size() > n_slots / 2) {
        throw CapacityError("payload needs " + std::to_string(swapped.size()) + " code pairs, font has " +
                            std::to_string(n_slots / 2));
    }
    Sip pi;
    pi.map.resize(n_slots);
    for (std::size_t i = 0; i < n_slots; ++i) pi.map[i] = i;
    for (std::size_t k = 0; k < swapped.size(); ++k) {
        if (swapped[k]) std::swap(pi.map[2 * k], pi.map[2 * k + 1]);
    }
    return pi;
}

// Swapped flag per pair; throws when the map is not built from pair transpositions.
std::vector<bool> to_pairs(const Sip& pi) {
    if (!pi.involution()) throw TamperSuspected("code permutation is not self-inverting");
    std::vector<bool> out;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        const std::size_t partner = i ^ 1U;
        if (pi.map[i] != i && pi.map[i] != partner) throw TamperSuspected("code permutation swaps unpaired slots");
        if (pi.map[i] != i && partner >= pi.size()) throw TamperSuspected("code permutation out of range");
        if (i % 2 == 0) out.push_back(pi.map[i] != i);
    }
    if (out.empty() || !out.front()) throw TamperSuspected("sentinel pair not swapped");
    return out;
}

} // namespace

Sip int_to_sip(std::uint64_t p, std::size_t n_slots) {
    std::vector<bool> pairs{true};
    for (; p; p >>= 1U) pairs.push_back(p & 1U);
    return from_pairs(pairs, n_slots);
}

std::uint64_t sip_to_int(const Sip& pi) {
    const auto pairs = to_pairs(pi);
    if (pairs.size() > 65) {
        for (std::size_t k = 65; k < pairs.size(); ++k) {
            if (pairs[k]) throw CapacityError("permutation holds more than 64 bits");
        }
    }
    std::uint64_t p = 0;
    for (std::size_t k = std::min<std::size_t>(pairs.size(), 65); k-- > 1;) p = (p << 1U) | (pairs[k] ? 1U : 0U);
    return p;
}

Sip bits_to_sip(const Bits& bits, std::size_t n_slots) {
    std::vector<bool> pairs{true};
    for (std::size_t i = 0; i < bits.size(); ++i) pairs.push_back(bits[bits.size() - 1 - i] & 1U);
    while (pairs.size() > 1 && !pairs.back()) pairs.pop_back();
    return from_pairs(pairs, n_slots);
}

Bits sip_to_bits(const Sip& pi, std::size_t n_bits) {
    const auto pairs = to_pairs(pi);
    for (std::size_t k = n_bits + 1; k < pairs.size(); ++k) {
        if (pairs[k]) throw TamperSuspected("code permutation exceeds the payload length");
    }
    Bits out(n_bits, 0);
    for (std::size_t i = 0; i < n_bits; ++i) {
        if (i + 1 < pairs.size() && pairs[i + 1]) out[n_bits - 1 - i] = 1;
    }
    return out;
}

std::vector<std::uint8_t> slots(const pdfio::Font& f) {
    std::vector<std::uint8_t> out;
    for (std::size_t c = 0; c < 256; ++c) {
        if (!f.glyph[c].empty() && f.glyph[c] != ".notdef") out.push_back(static_cast<std::uint8_t>(c));
    }
    return out;
}

std::vector<const pdfio::Font*> embedded_fonts(const pdfio::Document& doc) {
    std::vector<const pdfio::Font*> out;
    std::set<std::string> seen;
    for (const pdfio::Page& page : doc.pages()) {
        for (const auto& [name, font] : page.fonts) {
            if (font.embedded && seen.insert(name).second) out.push_back(&font);
        }
    }
    return out;
}

std::vector<pdfio::FontPatch> patches(const pdfio::Document& doc, const Bits& payload) {
    const auto fonts = embedded_fonts(doc);
    if (fonts.empty()) throw ChannelUnavailable("no embedded font");
    std::vector<pdfio::FontPatch> out;
    for (const pdfio::Font* f : fonts) {
        const auto s = slots(*f);
        const Sip pi = bits_to_sip(payload, s.size());
        pdfio::FontPatch patch{f->resource, {}};
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (pi(i) != i) patch.code_map[s[i]] = s[pi(i)];
        }
        out.push_back(std::move(patch));
    }
    return out;
}

namespace {

const pdfio::Font* find_font(const pdfio::Document& doc, const std::string& resource) {
    for (const pdfio::Page& page : doc.pages()) {
        auto it = page.fonts.find(resource);
        if (it != page.fonts.end()) return &it->second;
    }
    return nullptr;
}

} // namespace

std::optional<Sip> recover(const pdfio::Document& watermarked, const pdfio::Document& reference,
                           const std::string& resource) {
    const pdfio::Font* ref = find_font(reference, resource);
    if (!ref || !ref->embedded) throw ChannelUnavailable("reference font " + resource + " is not embedded");
    const pdfio::Font* wm = find_font(watermarked, resource);
    if (!wm) throw ChannelUnavailable("font " + resource + " is missing");
    if (!wm->embedded) throw ChannelUnavailable("font " + resource + " is not embedded");
    const auto s = slots(*ref);
    std::map<std::string, std::size_t> slot_of_glyph;
    for (std::size_t i = 0; i < s.size(); ++i) slot_of_glyph[ref->glyph[s[i]]] = i;
    Sip pi;
    pi.map.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        // pi(i) is the slot whose code now draws the glyph slot i used to draw.
        std::optional<std::size_t> target;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (wm->glyph[s[j]] == ref->glyph[s[i]]) {
                target = j;
                break;
            }
        }
        if (!target) throw TamperSuspected("glyph " + ref->glyph[s[i]] + " is no longer reachable");
        pi.map[i] = *target;
    }
    if (pi.identity()) return std::nullopt;
    if (!pi.involution()) throw TamperSuspected("code permutation is not self-inverting");
    return pi;
}

std::optional<Bits> extract(const pdfio::Document& watermarked, const pdfio::Document& reference, std::size_t n_bits) {
    const auto fonts = embedded_fonts(reference);
    if (fonts.empty()) throw ChannelUnavailable("reference has no embedded font");
    std::optional<Bits> out;
    bool unmarked = false;
    for (const pdfio::Font* f : fonts) {
        auto pi = recover(watermarked, reference, f->resource);
        if (!pi) {
            unmarked = true;
            continue;
        }
        Bits bits = sip_to_bits(*pi, n_bits);
        if (out && *out != bits) throw TamperSuspected("fonts carry different payloads");
        out = std::move(bits);
    }
    if (out && unmarked) throw TamperSuspected("only some fonts carry a mark");
    return out;
}

std::string copy_text(const pdfio::Document& doc, const pdfio::Document& reference) {
    std::string out;
    for (const pdfio::Word& w : doc.words()) {
        const pdfio::Font* ref = find_font(reference, w.font);
        const pdfio::ShowOp& show = doc.shows()[w.show];
        if (!out.empty()) out += ' ';
        for (std::size_t a = w.atom_begin; a < w.atom_end; ++a) {
            const pdfio::Atom& atom = show.atoms[a];
            if (!atom.is_code) continue;
            const char32_t cp = ref ? ref->unicode[atom.code] : 0;
            out += pdfio::utf8_encode(cp ? cp : U'�');
        }
    }
    return out;
}

} // namespace tracemark::fontmark
