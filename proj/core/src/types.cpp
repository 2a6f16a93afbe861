#include "symtrack/types.hpp"

#include <cmath>
#include <string>

namespace symtrack {

namespace {

bool pitch_in_range(int pitch) {
    return pitch >= kMidiPitchMin && pitch <= kMidiPitchMax;
}

}  // namespace

ScoreOnset::ScoreOnset(std::vector<int> pitches, double onset_beats)
    : pitch_set(std::move(pitches)), onset_b(onset_beats) {
    if (pitch_set.empty()) {
        throw EmptyPitchSetError("score onset has an empty pitch set");
    }
    std::sort(pitch_set.begin(), pitch_set.end());
    pitch_set.erase(std::unique(pitch_set.begin(), pitch_set.end()), pitch_set.end());
    for (int p : pitch_set) {
        if (!pitch_in_range(p)) {
            throw ValidationError("pitch " + std::to_string(p) + " outside MIDI range");
        }
    }
    if (!std::isfinite(onset_b) || onset_b < 0.0) {
        throw ValidationError("score onset beat must be finite and >= 0");
    }
}

void validate_score(const ScoreSequence& score) {
    if (score.empty()) {
        throw EmptyScoreError();
    }
    double prev_beat = -1.0;
    for (std::size_t i = 0; i < score.size(); ++i) {
        const ScoreOnset& onset = score.onsets[i];
        if (onset.pitch_set.empty()) {
            throw EmptyPitchSetError("score onset " + std::to_string(i) + " has an empty pitch set");
        }
        int prev_pitch = kMidiPitchMin - 1;
        for (int p : onset.pitch_set) {
            if (!pitch_in_range(p)) {
                throw ValidationError("score onset " + std::to_string(i) + ": pitch " +
                                      std::to_string(p) + " outside MIDI range");
            }
            if (p <= prev_pitch) {
                throw ValidationError("score onset " + std::to_string(i) +
                                      ": pitch set not sorted/unique");
            }
            prev_pitch = p;
        }
        if (!std::isfinite(onset.onset_b) || onset.onset_b < 0.0) {
            throw ValidationError("score onset " + std::to_string(i) +
                                  ": beat must be finite and >= 0");
        }
        if (i > 0 && !(onset.onset_b > prev_beat)) {
            throw NonIncreasingOnsetsError("score onsets must be strictly increasing (index " +
                                           std::to_string(i) + ")");
        }
        prev_beat = onset.onset_b;
    }
}

void validate_performance(const PerformanceStream& stream) {
    double prev_onset = 0.0;
    for (std::size_t j = 0; j < stream.size(); ++j) {
        const PerformanceNote& note = stream.notes[j];
        if (!pitch_in_range(note.pitch)) {
            throw ValidationError("performance note " + std::to_string(j) + ": pitch " +
                                  std::to_string(note.pitch) + " outside MIDI range");
        }
        if (!std::isfinite(note.onset_s) || note.onset_s < 0.0) {
            throw ValidationError("performance note " + std::to_string(j) +
                                  ": onset must be finite and >= 0");
        }
        if (j > 0 && note.onset_s < prev_onset) {
            throw NonIncreasingOnsetsError("performance onsets must be non-decreasing (index " +
                                           std::to_string(j) + ")");
        }
        prev_onset = note.onset_s;
    }
}

void validate_alignment(const GroundTruthAlignment& alignment) {
    for (std::size_t k = 0; k < alignment.size(); ++k) {
        const AlignmentPair& pair = alignment.pairs[k];
        if (!std::isfinite(pair.score_beats) || !std::isfinite(pair.perf_seconds)) {
            throw ValidationError("alignment pair " + std::to_string(k) + " is not finite");
        }
        if (k > 0) {
            if (!(pair.score_beats > alignment.pairs[k - 1].score_beats)) {
                throw NonIncreasingOnsetsError("alignment beats must be strictly increasing (index " +
                                               std::to_string(k) + ")");
            }
            if (pair.perf_seconds < alignment.pairs[k - 1].perf_seconds) {
                throw NonIncreasingOnsetsError("alignment seconds must be non-decreasing (index " +
                                               std::to_string(k) + ")");
            }
        }
    }
}

void TrackerConfig::validate() const {
    if (window_size < 2) {
        throw InvalidConfigError("window_size must be >= 2");
    }
    if (!(timing_weight >= 0.0) || !std::isfinite(timing_weight)) {
        throw InvalidConfigError("timing_weight must be finite and >= 0");
    }
    for (double dw : {weight_score, weight_diagonal, weight_performance}) {
        if (!(dw > 0.0) || !std::isfinite(dw)) {
            throw InvalidConfigError("directional weights must be finite and > 0");
        }
    }
    if (!(tempo_decay > 0.0 && tempo_decay <= 1.0)) {
        throw InvalidConfigError("tempo_decay must be in (0, 1]");
    }
    if (!(tempo_min_spq > 0.0) || !(tempo_min_spq < tempo_max_spq)) {
        throw InvalidConfigError("tempo bounds must satisfy 0 < tempo_min < tempo_max");
    }
    if (!(initial_tempo_spq > tempo_min_spq) || !(initial_tempo_spq < tempo_max_spq)) {
        throw InvalidConfigError("initial tempo must lie strictly inside the clamp bounds");
    }
}

}  // namespace symtrack
