#include "symtrack/distance.hpp"

#include <algorithm>
#include <cmath>

namespace symtrack {

double clamp_tempo(double spq, const TrackerConfig& cfg) {
    return std::clamp(spq, cfg.tempo_min_spq, cfg.tempo_max_spq);
}

PairwiseResult pairwise_distance(const ScoreOnset& score_cur, const ScoreOnset& score_prev,
                                 const PerformanceNote& perf_cur, const PerformanceNote& perf_prev,
                                 TempoEstimate prev_tempo, const TrackerConfig& cfg) {
    const double pitch_error = score_cur.contains(perf_cur.pitch) ? 0.0 : 1.0;

    const double score_ioi = score_cur.onset_b - score_prev.onset_b;
    const double onset_estimate = perf_prev.onset_s + score_ioi * prev_tempo.spq;
    const double time_error = std::abs(onset_estimate - perf_cur.onset_s);
    const double distance = pitch_error + cfg.timing_weight * time_error;

    double raw_tempo;
    if (score_ioi != 0.0) {
        const double numerator = cfg.faithful_tempo_quotient
                                     ? perf_cur.onset_s + perf_prev.onset_s
                                     : perf_cur.onset_s - perf_prev.onset_s;
        raw_tempo = numerator / score_ioi;
    } else {
        // Coinciding score onsets: nudge the previous tempo by the raw
        // performance gap.
        raw_tempo = prev_tempo.spq + (perf_cur.onset_s - perf_prev.onset_s);
    }
    const double smoothed = raw_tempo * cfg.tempo_decay + (1.0 - cfg.tempo_decay) * prev_tempo.spq;

    return {distance, TempoEstimate{clamp_tempo(smoothed, cfg)}};
}

}  // namespace symtrack
