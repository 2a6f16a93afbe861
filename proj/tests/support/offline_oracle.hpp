#pragma once

// Brute-force offline counterpart of the online tracker: materializes the
// full cost / tempo / path-length matrices with plain nested loops and its
// own copy of the distance arithmetic. Deliberately shares no code with
// the library implementation it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "symtrack/types.hpp"

namespace symtrack::testsupport {

struct OfflineMatrices {
    std::size_t rows = 0;  // score onsets
    std::size_t cols = 0;  // performance notes
    std::vector<double> cost;
    std::vector<double> tempo;
    std::vector<int> path_len;
    std::vector<std::size_t> match_score;  // border match per column
    std::vector<std::size_t> match_perf;

    double& cost_at(std::size_t i, std::size_t j) { return cost[i * cols + j]; }
    double cost_at(std::size_t i, std::size_t j) const { return cost[i * cols + j]; }
    double& tempo_at(std::size_t i, std::size_t j) { return tempo[i * cols + j]; }
    double tempo_at(std::size_t i, std::size_t j) const { return tempo[i * cols + j]; }
    int& pl_at(std::size_t i, std::size_t j) { return path_len[i * cols + j]; }
    int pl_at(std::size_t i, std::size_t j) const { return path_len[i * cols + j]; }
};

inline std::pair<double, double> oracle_metric(const ScoreOnset& score_cur,
                                               const ScoreOnset& score_prev,
                                               const PerformanceNote& perf_cur,
                                               const PerformanceNote& perf_prev, double prev_tempo,
                                               const TrackerConfig& cfg) {
    const bool member = std::find(score_cur.pitch_set.begin(), score_cur.pitch_set.end(),
                                  perf_cur.pitch) != score_cur.pitch_set.end();
    const double pitch_error = member ? 0.0 : 1.0;
    const double score_ioi = score_cur.onset_b - score_prev.onset_b;
    const double onset_estimate = perf_prev.onset_s + score_ioi * prev_tempo;
    const double time_error = std::abs(onset_estimate - perf_cur.onset_s);
    const double pd = pitch_error + cfg.timing_weight * time_error;

    double raw;
    if (score_ioi != 0.0) {
        const double numerator = cfg.faithful_tempo_quotient
                                     ? perf_cur.onset_s + perf_prev.onset_s
                                     : perf_cur.onset_s - perf_prev.onset_s;
        raw = numerator / score_ioi;
    } else {
        raw = prev_tempo + (perf_cur.onset_s - perf_prev.onset_s);
    }
    double smoothed = raw * cfg.tempo_decay + (1.0 - cfg.tempo_decay) * prev_tempo;
    smoothed = std::clamp(smoothed, cfg.tempo_min_spq, cfg.tempo_max_spq);
    return {pd, smoothed};
}

/// Full-matrix evaluation of the recurrence. The first column accumulates
/// pitch-only distances weighted by the score-direction weight; later
/// columns take the best of the three weighted directional hypotheses,
/// preferring diagonal, then score, then performance direction on ties.
/// Matches per column minimize cost normalized by path length over that
/// column plus the top-row cells of up to the previous (window - 1)
/// columns, preferring larger score then larger performance indices.
inline OfflineMatrices offline_dtw(const ScoreSequence& score,
                                   const std::vector<PerformanceNote>& notes,
                                   const TrackerConfig& cfg) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    OfflineMatrices m;
    m.rows = score.size();
    m.cols = notes.size();
    m.cost.assign(m.rows * m.cols, kInf);
    m.tempo.assign(m.rows * m.cols, 0.0);
    m.path_len.assign(m.rows * m.cols, 0);

    double running = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
        const bool member = std::find(score.onsets[i].pitch_set.begin(),
                                      score.onsets[i].pitch_set.end(),
                                      notes[0].pitch) != score.onsets[i].pitch_set.end();
        running += cfg.weight_score * (member ? 0.0 : 1.0);
        m.cost_at(i, 0) = running;
        m.tempo_at(i, 0) = cfg.initial_tempo_spq;
        m.pl_at(i, 0) = static_cast<int>(i + 1);
    }

    for (std::size_t j = 1; j < m.cols; ++j) {
        for (std::size_t i = 0; i < m.rows; ++i) {
            double dc[3] = {kInf, kInf, kInf};
            double ts[3] = {0.0, 0.0, 0.0};
            int pl[3] = {0, 0, 0};

            if (i > 0) {
                // Score direction: the note is compared against the next
                // score onset with itself as timing predecessor.
                auto [pd0, t0] = oracle_metric(score.onsets[i], score.onsets[i - 1], notes[j],
                                               notes[j], m.tempo_at(i - 1, j), cfg);
                dc[0] = cfg.weight_score * pd0 + m.cost_at(i - 1, j);
                ts[0] = t0;
                pl[0] = m.pl_at(i - 1, j);

                auto [pd1, t1] = oracle_metric(score.onsets[i], score.onsets[i - 1], notes[j],
                                               notes[j - 1], m.tempo_at(i - 1, j - 1), cfg);
                dc[1] = cfg.weight_diagonal * pd1 + m.cost_at(i - 1, j - 1);
                ts[1] = t1;
                pl[1] = m.pl_at(i - 1, j - 1);
            }
            {
                auto [pd2, t2] = oracle_metric(score.onsets[i], score.onsets[i], notes[j],
                                               notes[j - 1], m.tempo_at(i, j - 1), cfg);
                dc[2] = cfg.weight_performance * pd2 + m.cost_at(i, j - 1);
                ts[2] = t2;
                pl[2] = m.pl_at(i, j - 1);
            }

            int pick = 1;
            if (dc[0] < dc[pick]) {
                pick = 0;
            }
            if (dc[2] < dc[pick]) {
                pick = 2;
            }
            m.cost_at(i, j) = dc[pick];
            m.tempo_at(i, j) = ts[pick];
            m.pl_at(i, j) = 1 + pl[pick];
        }
    }

    // Border matches.
    m.match_score.resize(m.cols);
    m.match_perf.resize(m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) {
        double best_norm = kInf;
        std::size_t best_i = 0, best_j = 0;
        auto consider = [&](std::size_t ci, std::size_t cj) {
            const double norm = m.cost_at(ci, cj) / m.pl_at(ci, cj);
            if (norm < best_norm ||
                (norm == best_norm && (ci > best_i || (ci == best_i && cj > best_j)))) {
                best_norm = norm;
                best_i = ci;
                best_j = cj;
            }
        };
        const std::size_t rim_cap = static_cast<std::size_t>(cfg.window_size);
        const std::size_t rim_from = j > rim_cap ? j - rim_cap : 0;
        for (std::size_t jp = rim_from; jp < j; ++jp) {
            consider(m.rows - 1, jp);
        }
        for (std::size_t i = 0; i < m.rows; ++i) {
            consider(i, j);
        }
        m.match_score[j] = best_i;
        m.match_perf[j] = best_j;
    }
    return m;
}

}  // namespace symtrack::testsupport
