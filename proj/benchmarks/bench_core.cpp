#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "viescore/parser.hpp"
#include "viescore/scoring.hpp"
#include "viescore/stats.hpp"

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> value(0.0, 10.0);
    std::vector<double> out(n);
    for (double& v : out) v = value(rng);
    return out;
}

void BM_Spearman(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vector(n, 1);
    const auto y = random_vector(n, 2);
    for (auto _ : state) benchmark::DoNotOptimize(viescore::spearman(x, y));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Spearman)->Range(8, 8 << 10)->Complexity();

void BM_Kendall(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vector(n, 3);
    const auto y = random_vector(n, 4);
    for (auto _ : state) benchmark::DoNotOptimize(viescore::kendall(x, y));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Kendall)->Range(8, 1 << 10)->Complexity();

void BM_ParseScores(benchmark::State& state) {
    const std::string reply =
        "The edit follows the instruction closely although the lighting shifted.\n"
        "```json\n{\"score\" : [7, 5], \"reasoning\" : \"faithful but the shadows "
        "moved and some texture detail was lost near the boundary\"}\n```\n";
    for (auto _ : state) benchmark::DoNotOptimize(viescore::parse_scores(reply, 2));
}
BENCHMARK(BM_ParseScores);

void BM_PenaltyFill(benchmark::State& state) {
    std::uint64_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(viescore::penalty_fill(
            2, 7, "bench-" + std::to_string(i++), viescore::AspectKind::PQ));
}
BENCHMARK(BM_PenaltyFill);

void BM_OverallScore(benchmark::State& state) {
    const std::vector<double> alpha = {7.0, 5.0, 9.0};
    const std::vector<double> beta = {6.0, 8.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(viescore::overall_score(alpha, beta));
}
BENCHMARK(BM_OverallScore);

}  // namespace

BENCHMARK_MAIN();
