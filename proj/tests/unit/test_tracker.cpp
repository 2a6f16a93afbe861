#include <doctest.h>

#include <cmath>
#include <random>

#include "symtrack/tracker.hpp"

#include "../support/generators.hpp"
#include "../support/offline_oracle.hpp"

using namespace symtrack;
using namespace symtrack::testsupport;

namespace {

ScoreSequence tiny_score(std::size_t onsets) {
    ScoreSequence score;
    for (std::size_t i = 0; i < onsets; ++i) {
        score.onsets.emplace_back(std::vector<int>{static_cast<int>(40 + i % 60)},
                                  static_cast<double>(i));
    }
    return score;
}

}  // namespace

TEST_CASE("window is clipped to the score length") {
    TrackerConfig cfg;
    cfg.window_size = 20;

    Tracker short_score(tiny_score(5), cfg);
    CHECK(short_score.score_window_start() == 0);
    CHECK(short_score.window_length() == 5);

    Tracker long_score(tiny_score(100), cfg);
    CHECK(long_score.window_length() == 20);

    CHECK_THROWS_AS(Tracker(ScoreSequence{}, cfg), EmptyScoreError);
}

TEST_CASE("first note of an exact rendering matches the first onset") {
    std::mt19937_64 rng(11);
    const ScoreSequence score = random_score(rng);
    Tracker tracker(score, TrackerConfig{});

    CHECK_FALSE(tracker.current_position().has_value());

    const PerformanceNote first{score.onsets[0].pitch_set[0], 0.0};
    const MatchEvent match = tracker.step(first);
    CHECK(match.score_index == 0);
    CHECK(match.perf_index == 0);
    CHECK(match.perf_onset_s == 0.0);
    CHECK(tracker.current_position()->score_index == 0);
}

TEST_CASE("an exact constant-tempo rendering is tracked onset for onset") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 10; ++round) {
        ScoreGenOptions opt;
        opt.onset_count = 25;
        opt.max_chord_size = 2;
        const ScoreSequence score = random_score(rng, opt);
        const PerformanceStream perf = render_exact(score, 0.5);

        TrackerConfig cfg;
        cfg.window_size = 64;  // covers both sequences completely
        REQUIRE(perf.size() <= 64);

        // Independent route: the offline recurrence on the full matrices.
        const OfflineMatrices oracle = offline_dtw(score, perf.notes, cfg);

        Tracker tracker(score, cfg);
        std::size_t expected_onset = 0;
        std::size_t notes_in_onset = 0;
        for (std::size_t j = 0; j < perf.size(); ++j) {
            const MatchEvent match = tracker.step(perf.notes[j]);
            CHECK(match.score_index == oracle.match_score[j]);
            CHECK(match.perf_index == oracle.match_perf[j]);

            // The online match must also be the note's true score position.
            if (notes_in_onset == score.onsets[expected_onset].pitch_set.size()) {
                ++expected_onset;
                notes_in_onset = 0;
            }
            CHECK(match.score_index == expected_onset);
            ++notes_in_onset;
        }
    }
}

TEST_CASE("online matrices equal the offline recurrence when the window covers everything") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 25; ++round) {
        ScoreGenOptions opt;
        opt.onset_count = 2 + rng() % 28;
        opt.disjoint_consecutive = false;
        const ScoreSequence score = random_score(rng, opt);

        PerformanceStream perf;
        if (round % 2 == 0) {
            perf = random_stream(rng, 2 + rng() % 38);
        } else {
            perf = render_exact(score, 0.4);
            if (perf.size() > 40) {
                perf.notes.resize(40);
            }
        }

        TrackerConfig cfg;
        cfg.window_size = 64;
        cfg.timing_weight = round % 3 == 0 ? 0.5 : 2.0;
        const OfflineMatrices oracle = offline_dtw(score, perf.notes, cfg);

        Tracker tracker(score, cfg);
        for (std::size_t j = 0; j < perf.size(); ++j) {
            tracker.step(perf.notes[j]);
            const auto column = tracker.newest_column();
            REQUIRE(column.has_value());
            REQUIRE(column->window_start == 0);
            REQUIRE(column->cells.size() == score.size());
            for (std::size_t i = 0; i < score.size(); ++i) {
                CHECK(column->cells[i].accumulated_cost ==
                      doctest::Approx(oracle.cost_at(i, j)).epsilon(1e-9));
                CHECK(column->cells[i].path_length == oracle.pl_at(i, j));
                CHECK(column->cells[i].tempo_spq ==
                      doctest::Approx(oracle.tempo_at(i, j)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("per-cell dominance holds on the stored window") {
    // Recompute each newest-column cell from its predecessors by brute
    // force over the three weighted directional hypotheses.
    std::mt19937_64 rng(57);
    ScoreGenOptions opt;
    opt.onset_count = 20;
    opt.disjoint_consecutive = false;
    const ScoreSequence score = random_score(rng, opt);
    const PerformanceStream perf = random_stream(rng, 30);

    TrackerConfig cfg;
    cfg.window_size = 64;
    const OfflineMatrices oracle = offline_dtw(score, perf.notes, cfg);
    for (std::size_t j = 1; j < perf.size(); ++j) {
        for (std::size_t i = 0; i < score.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            if (i > 0) {
                best = std::min(best, cfg.weight_score *
                                              oracle_metric(score.onsets[i], score.onsets[i - 1],
                                                            perf.notes[j], perf.notes[j],
                                                            oracle.tempo_at(i - 1, j), cfg)
                                                  .first +
                                          oracle.cost_at(i - 1, j));
                best = std::min(best, cfg.weight_diagonal *
                                              oracle_metric(score.onsets[i], score.onsets[i - 1],
                                                            perf.notes[j], perf.notes[j - 1],
                                                            oracle.tempo_at(i - 1, j - 1), cfg)
                                                  .first +
                                          oracle.cost_at(i - 1, j - 1));
            }
            best = std::min(best, cfg.weight_performance *
                                          oracle_metric(score.onsets[i], score.onsets[i],
                                                        perf.notes[j], perf.notes[j - 1],
                                                        oracle.tempo_at(i, j - 1), cfg)
                                              .first +
                                      oracle.cost_at(i, j - 1));
            CHECK(oracle.cost_at(i, j) == best);
        }
    }
}

TEST_CASE("a pitch absent from the window still matches on the border and pays for it") {
    std::mt19937_64 rng(71);
    ScoreGenOptions opt;
    opt.onset_count = 15;
    opt.pitch_min = 40;
    opt.pitch_max = 80;
    const ScoreSequence score = random_score(rng, opt);
    const PerformanceStream perf = render_exact(score, 0.5);

    TrackerConfig cfg;
    cfg.window_size = 64;
    Tracker tracker(score, cfg);
    for (std::size_t j = 0; j + 1 < perf.size() / 2; ++j) {
        tracker.step(perf.notes[j]);
    }
    const auto before = *tracker.newest_column();
    const std::vector<Tracker::Cell> prior(before.cells.begin(), before.cells.end());

    // Pitch 20 appears in no score onset; the intruder arrives mid-stream.
    const double at = perf.notes[perf.size() / 2 - 1].onset_s;
    const MatchEvent match = tracker.step(PerformanceNote{20, at});

    const auto column = *tracker.newest_column();
    const double min_dw =
        std::min({cfg.weight_score, cfg.weight_diagonal, cfg.weight_performance});
    const bool on_newest_column = match.perf_index == tracker.notes_consumed() - 1;
    const bool on_rim = match.perf_index < tracker.notes_consumed() - 1;
    CHECK((on_newest_column || on_rim));
    if (on_newest_column) {
        CHECK(match.score_index >= column.window_start);
        CHECK(match.score_index < column.window_start + column.cells.size());
        // Every cell in the new column pays at least min(dw) * 1 on top of
        // some predecessor, all of which are prior-column or lower cells.
        const std::size_t r = match.score_index - column.window_start;
        double min_pred = std::numeric_limits<double>::infinity();
        for (const Tracker::Cell& cell : prior) {
            min_pred = std::min(min_pred, cell.accumulated_cost);
        }
        for (std::size_t k = 0; k < r; ++k) {
            min_pred = std::min(min_pred, column.cells[k].accumulated_cost);
        }
        CHECK(column.cells[r].accumulated_cost >= min_pred + min_dw * 1.0);
    }
}

TEST_CASE("out-of-order input: small regressions clamp, large ones throw") {
    Tracker tracker(tiny_score(10), TrackerConfig{});
    tracker.step({40, 1.0});

    // Half a millisecond early: clamped to the previous onset.
    const MatchEvent clamped = tracker.step({41, 0.9995});
    CHECK(clamped.perf_onset_s == 1.0);

    CHECK_THROWS_AS(tracker.step({42, 0.99}), OutOfOrderInputError);
    CHECK_THROWS_AS(tracker.step({200, 2.0}), ValidationError);
}

TEST_CASE("current_position reports the latest match only") {
    Tracker tracker(tiny_score(10), TrackerConfig{});
    CHECK_FALSE(tracker.current_position().has_value());

    tracker.step({40, 0.0});
    CHECK(tracker.current_position()->perf_index == 0);

    tracker.step({41, 0.5});
    tracker.step({42, 1.0});
    CHECK(tracker.current_position()->perf_index == 2);
    CHECK(tracker.current_position()->score_index == 2);
}

TEST_CASE("extrapolate_position projects along the matched tempo") {
    ScoreSequence score = tiny_score(10);
    Tracker tracker(score, TrackerConfig{});
    CHECK_THROWS_AS(tracker.extrapolate_position(0.1), NoMatchYetError);

    for (int k = 0; k < 5; ++k) {
        tracker.step({40 + k, 0.5 * k});
    }
    const MatchEvent match = *tracker.current_position();
    CHECK(match.score_index == 4);

    CHECK(tracker.extrapolate_position(0.0) == score.onsets[4].onset_b);
    const double expected = score.onsets[4].onset_b + 0.174 / match.tempo.spq;
    CHECK(tracker.extrapolate_position(0.174) == doctest::Approx(expected).epsilon(1e-12));

    // Projection beyond the final onset clips to the score's beat range.
    CHECK(tracker.extrapolate_position(1000.0) == score.last_beat());
    CHECK_THROWS_AS(tracker.extrapolate_position(-0.1), ValidationError);
}

TEST_CASE("extrapolation example: beat 4 at half-second tempo, 174 ms ahead") {
    ScoreSequence score;
    for (int i = 0; i <= 8; ++i) {
        score.onsets.emplace_back(std::vector<int>{60 + i}, static_cast<double>(i));
    }
    Tracker tracker(score, TrackerConfig{});
    for (int k = 0; k <= 4; ++k) {
        tracker.step({60 + k, 0.5 * k});
    }
    REQUIRE(tracker.current_position()->score_index == 4);
    REQUIRE(tracker.current_position()->tempo.spq == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(tracker.extrapolate_position(0.174) == doctest::Approx(4.348).epsilon(1e-9));
}

TEST_CASE("window start never retreats") {
    std::mt19937_64 rng(101);
    ScoreGenOptions opt;
    opt.onset_count = 120;
    const ScoreSequence score = random_score(rng, opt);
    const PerformanceStream perf = render_exact(score, 0.5);

    TrackerConfig cfg;
    cfg.window_size = 10;
    Tracker tracker(score, cfg);
    std::size_t previous_start = 0;
    for (const PerformanceNote& note : perf.notes) {
        tracker.step(note);
        CHECK(tracker.score_window_start() >= previous_start);
        previous_start = tracker.score_window_start();
    }
    CHECK(previous_start > 0);
    CHECK(previous_start <= score.size() - cfg.window_size);
}

TEST_CASE("each step touches at most the window's worth of cells") {
    std::mt19937_64 rng(113);
    ScoreGenOptions opt;
    opt.onset_count = 200;
    const ScoreSequence score = random_score(rng, opt);
    const PerformanceStream perf = render_exact(score, 0.5);

    TrackerConfig cfg;
    cfg.window_size = 20;
    Tracker tracker(score, cfg);
    for (const PerformanceNote& note : perf.notes) {
        tracker.step(note);
        CHECK(tracker.last_step_cell_updates() <=
              4 * static_cast<std::uint64_t>(cfg.window_size));
    }
    CHECK(tracker.total_cell_updates() <=
          4 * static_cast<std::uint64_t>(cfg.window_size) * perf.size());
}

TEST_CASE("identical inputs produce bit-identical match sequences") {
    std::mt19937_64 rng(127);
    const ScoreSequence score = random_score(rng);
    PerformanceStream perf = render_exact(score, 0.48);
    perf.notes[3].pitch = 21;  // a little noise so paths actually compete

    const auto first = track_stream(score, perf, TrackerConfig{});
    const auto second = track_stream(score, perf, TrackerConfig{});
    REQUIRE(first.size() == second.size());
    for (std::size_t k = 0; k < first.size(); ++k) {
        CHECK(first[k].score_index == second[k].score_index);
        CHECK(first[k].perf_index == second[k].perf_index);
        CHECK(first[k].perf_onset_s == second[k].perf_onset_s);
        CHECK(first[k].tempo.spq == second[k].tempo.spq);
    }
}

TEST_CASE("step after close throws SessionEnded") {
    Tracker tracker(tiny_score(5), TrackerConfig{});
    tracker.step({40, 0.0});
    tracker.close();
    CHECK(tracker.closed());
    CHECK_THROWS_AS(tracker.step({41, 0.5}), SessionEndedError);
    // The last position stays queryable.
    CHECK(tracker.current_position()->score_index == 0);
}

TEST_CASE("tracking runs through to the final onset of a long score") {
    std::mt19937_64 rng(131);
    ScoreGenOptions opt;
    opt.onset_count = 80;
    const ScoreSequence score = random_score(rng, opt);
    const PerformanceStream perf = render_exact(score, 0.5);

    TrackerConfig cfg;
    cfg.window_size = 20;
    Tracker tracker(score, cfg);
    for (const PerformanceNote& note : perf.notes) {
        tracker.step(note);
    }
    CHECK(tracker.at_score_end());
    CHECK(tracker.current_position()->score_index == score.size() - 1);
}
