#include <benchmark/benchmark.h>

#include <random>

#include "symtrack/distance.hpp"
#include "symtrack/simulate.hpp"
#include "symtrack/tracker.hpp"

#include "../tests/support/generators.hpp"

using namespace symtrack;
using namespace symtrack::testsupport;

namespace {

ScoreSequence benchmark_score(std::size_t onsets) {
    std::mt19937_64 rng(42);
    ScoreGenOptions opt;
    opt.onset_count = onsets;
    opt.max_chord_size = 3;
    return random_score(rng, opt);
}

void BM_PairwiseDistance(benchmark::State& state) {
    const TrackerConfig cfg;
    const ScoreOnset score_prev({60, 64, 67}, 4.0);
    const ScoreOnset score_cur({62, 65}, 5.0);
    const PerformanceNote perf_prev{64, 2.0};
    const PerformanceNote perf_cur{65, 2.48};
    for (auto _ : state) {
        auto result = pairwise_distance(score_cur, score_prev, perf_cur, perf_prev, {0.5}, cfg);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_PairwiseDistance);

// One tracking step per iteration; the session is rebuilt off the clock
// whenever the stream runs out.
void BM_TrackerStep(benchmark::State& state) {
    const ScoreSequence score = benchmark_score(4000);
    const PerformanceStream perf = render_exact(score, 0.5);

    TrackerConfig cfg;
    cfg.window_size = static_cast<int>(state.range(0));

    Tracker tracker(score, cfg);
    std::size_t next = 0;
    for (auto _ : state) {
        if (next == perf.size()) {
            state.PauseTiming();
            tracker = Tracker(score, cfg);
            next = 0;
            state.ResumeTiming();
        }
        benchmark::DoNotOptimize(tracker.step(perf.notes[next++]));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TrackerStep)->Arg(10)->Arg(20)->Arg(40)->Arg(80);

void BM_Synthesize(benchmark::State& state) {
    const ScoreSequence score = benchmark_score(static_cast<std::size_t>(state.range(0)));
    SynthesisParams params;
    params.jitter_sd_s = 0.02;
    params.chord_spread_sd_s = 0.01;
    params.insert_rate = 0.05;
    params.delete_rate = 0.05;
    for (auto _ : state) {
        params.seed++;
        benchmark::DoNotOptimize(synthesize(score, params));
    }
}
BENCHMARK(BM_Synthesize)->Arg(200)->Arg(2000);

void BM_TrackWholePiece(benchmark::State& state) {
    const ScoreSequence score = benchmark_score(500);
    const PerformanceStream perf = render_exact(score, 0.5);
    const TrackerConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(track_stream(score, perf, cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(perf.size()));
}
BENCHMARK(BM_TrackWholePiece);

}  // namespace

BENCHMARK_MAIN();
