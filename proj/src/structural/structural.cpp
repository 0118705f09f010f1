#include "tracemark/structural/structural.hpp"

#include <algorithm>
#include <cmath>

namespace tracemark::structural {

std::vector<unsigned> classify(const std::vector<double>& widths) {
    std::vector<unsigned> labels;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) labels.push_back(widths[i] > widths[i + 1] ? 1U : 0U);
    return labels;
}

unsigned segment_class(const std::vector<unsigned>& labels, std::size_t classes) {
    if (classes == 0) throw ConfigurationError("class count must be positive");
    std::size_t sum = 0;
    for (unsigned l : labels) sum += l;
    return static_cast<unsigned>(sum % classes);
}

double mean_difference(const std::vector<double>& spaces) {
    double odd = 0;
    double even = 0;
    std::size_t n_odd = 0;
    std::size_t n_even = 0;
    for (std::size_t i = 0; i < spaces.size(); ++i) {
        if (i % 2) {
            odd += spaces[i];
            ++n_odd;
        } else {
            even += spaces[i];
            ++n_even;
        }
    }
    if (!n_odd || !n_even) return 0;
    return odd / static_cast<double>(n_odd) - even / static_cast<double>(n_even);
}

std::vector<Segment> segments(const pdfio::Document& doc, const Params& p, std::size_t classes) {
    if (p.s < 3 || p.s % 2 == 0) throw ConfigurationError("segment size must be odd and at least 3");
    if (classes == 0) throw ConfigurationError("class count must be positive");
    const double leading = doc.leading();
    const std::size_t stride = p.s - 1;
    std::vector<Segment> out;
    for (std::size_t li = 0; li < doc.lines().size(); ++li) {
        const pdfio::Line& line = doc.lines()[li];
        const double top = doc.pages()[line.page].media_top;
        const auto per_page = static_cast<std::size_t>(std::lround(top / leading)) + 1;
        const auto ordinal = static_cast<std::size_t>(std::max(0L, std::lround((top - line.baseline) / leading))) +
                             line.page * per_page;
        for (std::size_t k = 0; k < p.segments_per_line; ++k) {
            const std::size_t first = k * stride;
            if (first + p.s > line.words.size()) break;
            Segment seg;
            seg.line = li;
            seg.index_in_line = k;
            seg.line_ordinal = ordinal;
            bool complete = true;
            for (std::size_t w = 0; w < p.s; ++w) {
                seg.words.push_back(line.words[first + w]);
                if (w + 1 == p.s) break;
                auto g = doc.gap_after(line.words[first + w]);
                if (!g) {
                    complete = false;
                    break;
                }
                seg.gaps.push_back(*g);
                seg.adjustable = seg.adjustable && doc.gaps()[*g].adjustable;
            }
            if (!complete) continue;
            if (p.map == ClassMap::line_position) {
                seg.cls = static_cast<unsigned>((p.segments_per_line * ordinal + k) % classes);
            } else {
                std::vector<double> widths;
                for (std::size_t w : seg.words) widths.push_back(doc.words()[w].width);
                seg.cls = segment_class(classify(widths), classes);
            }
            out.push_back(std::move(seg));
        }
    }
    return out;
}

namespace {

std::vector<double> spaces_of(const pdfio::Document& doc, const Segment& seg) {
    std::vector<double> out;
    for (std::size_t g : seg.gaps) out.push_back(doc.gaps()[g].width);
    return out;
}

} // namespace

SpacePlan plan(const pdfio::Document& doc, const Bits& payload, const Params& p) {
    SpacePlan out;
    if (payload.empty()) return out;
    const std::size_t classes = p.classes ? p.classes : payload.size();
    const double target = p.delta;
    const double floor_width = doc.space_threshold() + p.threshold_margin;
    const auto segs = segments(doc, p, classes);
    for (std::size_t si = 0; si < segs.size(); ++si) {
        const Segment& seg = segs[si];
        SegmentPlan sp{si, seg.cls, false, 0, {}};
        if (seg.cls >= payload.size()) {
            sp.reason = "class carries no payload bit";
            out.segments.push_back(sp);
            continue;
        }
        if (!seg.adjustable) {
            sp.reason = "fixed spaces";
            out.segments.push_back(sp);
            ++out.skipped;
            continue;
        }
        const auto spaces = spaces_of(doc, seg);
        const double d = mean_difference(spaces);
        const bool one = payload[seg.cls] & 1U;
        double x = 0;
        if (one && d < target) x = (target - d) / 2;
        if (!one && d > -target) x = (-target - d) / 2;
        bool fits = std::abs(x) <= p.max_shift;
        for (std::size_t i = 0; fits && i < spaces.size(); ++i) {
            const double w = spaces[i] + (i % 2 ? x : -x);
            fits = w >= std::max(p.min_ratio * spaces[i], floor_width);
        }
        if (!fits) {
            sp.reason = "segment too cramped";
            out.segments.push_back(sp);
            ++out.skipped;
            continue;
        }
        sp.encoded = true;
        sp.shift = x;
        if (x != 0) {
            for (std::size_t i = 0; i < spaces.size(); ++i) {
                out.gap_width[seg.gaps[i]] = spaces[i] + (i % 2 ? x : -x);
            }
        }
        out.segments.push_back(sp);
        ++out.encoded;
    }
    return out;
}

nlohmann::json SpacePlan::to_json() const {
    nlohmann::json segs = nlohmann::json::array();
    for (const SegmentPlan& s : segments) {
        nlohmann::json j{{"segment", s.segment}, {"class", s.cls}, {"encoded", s.encoded}, {"shift", s.shift}};
        if (!s.reason.empty()) j["reason"] = s.reason;
        segs.push_back(std::move(j));
    }
    nlohmann::json gaps = nlohmann::json::object();
    for (const auto& [g, w] : gap_width) gaps[std::to_string(g)] = w;
    return {{"encoded", encoded}, {"skipped", skipped}, {"segments", segs}, {"gap_width", gaps}};
}

Report extract(const pdfio::Document& doc, std::size_t bits, const Params& p) {
    if (bits == 0) throw ConfigurationError("payload length must be positive");
    const std::size_t classes = p.classes ? p.classes : bits;
    const auto segs = segments(doc, p, classes);
    Report r;
    r.bits.assign(bits, 0);
    r.erased.assign(bits, true);
    r.votes_for.assign(bits, 0);
    r.votes_total.assign(bits, 0);
    for (const Segment& seg : segs) {
        if (!seg.adjustable) continue;
        ++r.segments;
        if (seg.cls >= bits) continue;
        const double d = mean_difference(spaces_of(doc, seg));
        if (std::abs(d) < p.delta / 2) {
            ++r.silent;
            continue;
        }
        ++r.votes_total[seg.cls];
        if (d > 0) ++r.votes_for[seg.cls];
    }
    if (r.segments == 0) throw NoSignalError("no complete segment");
    double conf = 0;
    for (std::size_t i = 0; i < bits; ++i) {
        const std::size_t yes = r.votes_for[i];
        const std::size_t no = r.votes_total[i] - yes;
        if (yes == no) continue;
        r.bits[i] = yes > no ? 1 : 0;
        r.erased[i] = false;
        conf += static_cast<double>(std::max(yes, no)) / static_cast<double>(r.votes_total[i]);
    }
    r.confidence = conf / static_cast<double>(bits);
    return r;
}

nlohmann::json Report::to_json() const {
    std::string b;
    for (std::size_t i = 0; i < bits.size(); ++i) b += erased[i] ? '?' : static_cast<char>('0' + bits[i]);
    return {{"bits", b},
            {"confidence", confidence},
            {"segments", segments},
            {"silent", silent},
            {"erasures", std::count(erased.begin(), erased.end(), true)},
            {"votes_for", votes_for},
            {"votes_total", votes_total}};
}

} // namespace tracemark::structural
