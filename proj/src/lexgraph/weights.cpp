#include "tracemark/lexgraph/weights.hpp"

#include <cstdint>

namespace tracemark::lexgraph {

namespace {

double average(const LexicalSource& src, Similarity kind, const WeightJob& job) {
    double sum = 0.0;
    for (SenseId a : job.senses_a) {
        for (SenseId b : job.senses_b) sum += edge_similarity(src, kind, a, b);
    }
    return sum / static_cast<double>(job.senses_a.size() * job.senses_b.size());
}

void check_sizes(std::span<const WeightJob> jobs, std::span<double> out) {
    if (jobs.size() != out.size()) throw Error("weight kernel: output size mismatch");
}

} // namespace

void average_similarity_serial(const LexicalSource& src, Similarity kind,
                               std::span<const WeightJob> jobs, std::span<double> out) {
    check_sizes(jobs, out);
    for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = average(src, kind, jobs[i]);
}

void average_similarity_parallel(const LexicalSource& src, Similarity kind,
                                 std::span<const WeightJob> jobs, std::span<double> out) {
    check_sizes(jobs, out);
    const auto n = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) out[i] = average(src, kind, jobs[i]);
}

} // namespace tracemark::lexgraph
