#pragma once

#include "symtrack/types.hpp"

namespace symtrack {

/// Distance between a performed note and a score onset, together with the
/// tempo estimate implied by the comparison.
struct PairwiseResult {
    double distance = 0.0;
    TempoEstimate tempo;
};

/// Clamp a tempo estimate to the configured bounds.
double clamp_tempo(double spq, const TrackerConfig& cfg);

/// Pairwise distance combining pitch membership and extrapolated-onset
/// timing error, plus an exponentially smoothed tempo update.
///
/// The pitch error is 0 when the performed pitch lies in the score onset's
/// pitch set and 1 otherwise. The performed onset is extrapolated from the
/// predecessor note with the score inter-onset interval and the previous
/// tempo; the absolute deviation from the observed onset is the time
/// error, weighted by `cfg.timing_weight`.
///
/// The tempo update divides the performance IOI by the score IOI and
/// smooths the quotient into `prev_tempo` with decay `cfg.tempo_decay`.
/// When the score IOI is zero (same onset, e.g. chord notes) the previous
/// tempo is nudged by the raw performance gap instead. The result is
/// clamped to [tempo_min_spq, tempo_max_spq].
///
/// `cfg.faithful_tempo_quotient` switches the quotient numerator from the
/// difference of the two performance onsets to their sum, for comparison
/// runs; the clamp keeps the result bounded either way.
///
/// Preconditions: prev_tempo.spq > 0 and
/// score_prev.onset_b <= score_cur.onset_b.
PairwiseResult pairwise_distance(const ScoreOnset& score_cur, const ScoreOnset& score_prev,
                                 const PerformanceNote& perf_cur, const PerformanceNote& perf_prev,
                                 TempoEstimate prev_tempo, const TrackerConfig& cfg);

}  // namespace symtrack
