#pragma once

#include <filesystem>

#include "symtrack/types.hpp"

namespace symtrack {

struct ScoreMidiOptions {
    /// Merge score onsets closer than this many beats into one pitch set.
    /// 0 keeps exact tick grouping only.
    double merge_epsilon_beats = 0.0;

    /// Drop channel-10 (percussion) notes. Off by default: the expected
    /// corpus is piano music where every channel is pitched.
    bool exclude_percussion = false;
};

/// Load a Standard MIDI File (format 0 or 1, metrical division) as a score:
/// note-on events across all tracks are merged, onsets are converted to
/// beats as tick/division, and notes at the same tick form one pitch set.
///
/// Throws ParseError on malformed files, UnsupportedDivisionError for SMPTE
/// time division, and EmptyScoreError when the file contains no notes.
ScoreSequence load_score_midi(const std::filesystem::path& path,
                              const ScoreMidiOptions& options = {});

/// Load a Standard MIDI File as a performance: note-on onsets are converted
/// to seconds through the file's tempo map (120 quarter notes per minute
/// when no tempo event is present) and ordered by onset, ties broken by
/// ascending pitch.
PerformanceStream load_performance_midi(const std::filesystem::path& path);

}  // namespace symtrack
