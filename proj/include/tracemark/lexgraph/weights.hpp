#pragma once

#include <span>

#include "tracemark/lexgraph/similarity.hpp"

namespace tracemark::lexgraph {

/// One edge-weight evaluation: the mean similarity over sense_a x sense_b.
struct WeightJob {
    std::span<const SenseId> senses_a;
    std::span<const SenseId> senses_b;
};

/// Reference kernel. Writes one weight per job into `out`.
void average_similarity_serial(const LexicalSource& src, Similarity kind,
                               std::span<const WeightJob> jobs, std::span<double> out);

/// OpenMP kernel over independent jobs; must agree with the serial kernel bit for bit.
void average_similarity_parallel(const LexicalSource& src, Similarity kind,
                                 std::span<const WeightJob> jobs, std::span<double> out);

} // namespace tracemark::lexgraph
