// Serial vs OpenMP edge-weight kernel on the fixture lexicon.

#include <benchmark/benchmark.h>

#include "tracemark/lexgraph/lexgraph.hpp"
#include "tracemark/lexgraph/weights.hpp"

using namespace tracemark::lexgraph;

namespace {

const LexicalSource& source() {
    static const LexicalSource src = LexicalSource::load(TRACEMARK_FIXTURES "/lexicon.json");
    return src;
}

// Every pair among the first n nouns, so the work grows quadratically with n.
std::vector<WeightJob> jobs(std::size_t n) {
    const auto& src = source();
    std::vector<std::span<const SenseId>> senses;
    for (const auto& [word, pos] : src.words()) {
        if (pos != "n") continue;
        senses.push_back(src.senses(word, pos));
        if (senses.size() == n) break;
    }
    std::vector<WeightJob> out;
    for (std::size_t a = 0; a < senses.size(); ++a) {
        for (std::size_t b = a + 1; b < senses.size(); ++b) out.push_back({senses[a], senses[b]});
    }
    return out;
}

template <bool Parallel>
void BM_Kernel(benchmark::State& state) {
    const auto kind = static_cast<Similarity>(state.range(1));
    const auto work = jobs(static_cast<std::size_t>(state.range(0)));
    std::vector<double> out(work.size());
    for (auto _ : state) {
        if constexpr (Parallel) {
            average_similarity_parallel(source(), kind, work, out);
        } else {
            average_similarity_serial(source(), kind, work, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * work.size()));
}

void BM_BuildGraph(benchmark::State& state) {
    const BuildOptions opts{Similarity::lin, state.range(0) != 0};
    for (auto _ : state) benchmark::DoNotOptimize(LexGraph::build(source(), opts));
}

void kernel_args(benchmark::internal::Benchmark* b) {
    for (int n : {100, 400}) {
        for (int kind : {static_cast<int>(Similarity::lin), static_cast<int>(Similarity::jcn)}) b->Args({n, kind});
    }
    b->ArgNames({"words", "similarity"})->Unit(benchmark::kMillisecond)->UseRealTime();
}

} // namespace

BENCHMARK_TEMPLATE(BM_Kernel, false)->Apply(kernel_args);
BENCHMARK_TEMPLATE(BM_Kernel, true)->Apply(kernel_args);
BENCHMARK(BM_BuildGraph)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
