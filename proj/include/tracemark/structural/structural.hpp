#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tracemark/common/bits.hpp"
#include "tracemark/pdfio/document.hpp"

namespace tracemark::structural {

/// No complete segment in the document.
class NoSignalError : public Error {
public:
    using Error::Error;
};

enum class ClassMap {
    /// Class from the segment's position: (segments_per_line * line_ordinal + k) mod C.
    line_position,
    /// Class = sum of the width labels of the segment's words, mod C.
    label_sum,
};

struct Params {
    /// Words per segment; odd, consecutive segments share one word.
    std::size_t s = 5;
    /// Number of classes = payload bits carried. 0 means one class per payload bit.
    std::size_t classes = 0;
    double delta = 40;
    double max_shift = 80;
    /// A shifted space keeps at least this fraction of its width.
    double min_ratio = 0.6;
    /// and stays at least this far above the word-space threshold.
    double threshold_margin = 10;
    std::size_t segments_per_line = 3;
    ClassMap map = ClassMap::line_position;
};

/// Width labels: 1 where a word is wider than its successor. The last word has none.
std::vector<unsigned> classify(const std::vector<double>& widths);
unsigned segment_class(const std::vector<unsigned>& labels, std::size_t classes);

struct Segment {
    std::size_t line = 0;
    std::size_t index_in_line = 0;
    std::size_t line_ordinal = 0;
    /// Document word indices (s of them) and the s - 1 gaps between them.
    std::vector<std::size_t> words;
    std::vector<std::size_t> gaps;
    unsigned cls = 0;
    /// All gaps sit inside text-showing operators and can move.
    bool adjustable = true;
};

/// Mean of odd-position spaces minus mean of even-position spaces.
double mean_difference(const std::vector<double>& spaces);

std::vector<Segment> segments(const pdfio::Document& doc, const Params& p, std::size_t classes);

struct SegmentPlan {
    std::size_t segment = 0;
    unsigned cls = 0;
    bool encoded = false;
    double shift = 0;
    std::string reason;
};

struct SpacePlan {
    std::vector<SegmentPlan> segments;
    /// Gap index to new width.
    std::map<std::size_t, double> gap_width;
    std::size_t encoded = 0;
    std::size_t skipped = 0;

    nlohmann::json to_json() const;
};

/// Shifts for each segment whose class is a payload position. Lines keep their width.
SpacePlan plan(const pdfio::Document& doc, const Bits& payload, const Params& p = {});

struct Report {
    Bits bits;
    std::vector<bool> erased;
    std::vector<std::size_t> votes_for;
    std::vector<std::size_t> votes_total;
    /// Mean over payload positions of winner votes / all votes; 0 where nothing voted.
    double confidence = 0;
    std::size_t segments = 0;
    std::size_t silent = 0;

    nlohmann::json to_json() const;
};

/// Blind extraction of `bits` payload bits.
Report extract(const pdfio::Document& doc, std::size_t bits, const Params& p = {});

} // namespace tracemark::structural
