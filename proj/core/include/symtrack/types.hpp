#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "symtrack/errors.hpp"

namespace symtrack {

inline constexpr int kMidiPitchMin = 0;
inline constexpr int kMidiPitchMax = 127;

/// One performed (or transcribed) note: MIDI pitch plus onset in seconds
/// from the start of the performance.
struct PerformanceNote {
    int pitch = 0;
    double onset_s = 0.0;
};

/// Ordered stream of performed notes. Onsets are non-decreasing; equal
/// onsets (chords) are allowed.
struct PerformanceStream {
    std::vector<PerformanceNote> notes;

    bool empty() const noexcept { return notes.empty(); }
    std::size_t size() const noexcept { return notes.size(); }
};

/// One score event: the set of pitches that start together at a beat
/// position. The pitch set is kept sorted and duplicate-free.
struct ScoreOnset {
    std::vector<int> pitch_set;
    double onset_b = 0.0;  // quarter-note beats from score start

    ScoreOnset() = default;

    /// Normalizing constructor: sorts and deduplicates the pitches.
    /// Throws EmptyPitchSetError / ValidationError on invalid input.
    ScoreOnset(std::vector<int> pitches, double onset_beats);

    bool contains(int pitch) const {
        return std::binary_search(pitch_set.begin(), pitch_set.end(), pitch);
    }
};

/// Score as an ordered sequence of onsets with strictly increasing beat
/// positions (coinciding notes are grouped into one pitch set).
struct ScoreSequence {
    std::vector<ScoreOnset> onsets;

    bool empty() const noexcept { return onsets.empty(); }
    std::size_t size() const noexcept { return onsets.size(); }
    double first_beat() const { return onsets.front().onset_b; }
    double last_beat() const { return onsets.back().onset_b; }
};

/// Local performance speed in seconds per quarter-note beat.
struct TempoEstimate {
    double spq = 0.0;
};

/// Tuning parameters of the metric and the tracker. Defaults are the best
/// configuration found in tuning: window 20, timing weight 2, unit
/// directional weights, tempo decay 0.1, initial tempo 0.5 s/quarter.
struct TrackerConfig {
    int window_size = 20;             // score onsets covered by the window
    double timing_weight = 2.0;       // weight of the time error in the metric
    double weight_score = 1.0;        // directional weight, score direction
    double weight_diagonal = 1.0;     // directional weight, diagonal
    double weight_performance = 1.0;  // directional weight, performance direction
    double tempo_decay = 0.1;         // EMA decay of the tempo estimate
    double initial_tempo_spq = 0.5;   // tempo assumed before any evidence
    double tempo_min_spq = 0.05;      // clamp bounds applied to every
    double tempo_max_spq = 5.0;       //   smoothed tempo estimate

    // Reproduce the summed-onset tempo quotient instead of the performance
    // IOI quotient. Off by default; see pairwise_distance().
    bool faithful_tempo_quotient = false;

    void validate() const;  // throws InvalidConfigError
};

/// One alignment decision: performance note `perf_index` corresponds to
/// score onset `score_index`.
struct MatchEvent {
    std::size_t score_index = 0;
    std::size_t perf_index = 0;
    double perf_onset_s = 0.0;
    TempoEstimate tempo;
};

/// One ground-truth correspondence between a score beat and the second at
/// which it was actually played.
struct AlignmentPair {
    double score_beats = 0.0;
    double perf_seconds = 0.0;
};

/// Note-aligned ground truth for a whole performance; beats strictly
/// increasing, seconds non-decreasing.
struct GroundTruthAlignment {
    std::vector<AlignmentPair> pairs;

    bool empty() const noexcept { return pairs.empty(); }
    std::size_t size() const noexcept { return pairs.size(); }
};

/// Throws EmptyScoreError, EmptyPitchSetError, NonIncreasingOnsetsError or
/// ValidationError if any ScoreSequence invariant is violated.
void validate_score(const ScoreSequence& score);

/// Throws ValidationError / NonIncreasingOnsetsError on invalid streams.
void validate_performance(const PerformanceStream& stream);

/// Throws ValidationError / NonIncreasingOnsetsError on invalid alignments.
void validate_alignment(const GroundTruthAlignment& alignment);

}  // namespace symtrack
