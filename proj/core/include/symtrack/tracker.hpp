#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "symtrack/distance.hpp"
#include "symtrack/types.hpp"

namespace symtrack {

/// Onset regressions up to this tolerance are clamped to the previous
/// onset; larger regressions are rejected as out-of-order input.
inline constexpr double kReorderToleranceS = 1e-3;

/// Event-driven windowed online time warping tracker.
///
/// The tracker consumes one performance note at a time and appends one
/// column of the accumulated-cost matrix per note, spanning the current
/// score window. Each cell evaluates three directional hypotheses (score,
/// diagonal, performance), weighted by the configured directional weights
/// and each using the predecessor cell's own tempo estimate, so that every
/// surviving path carries a continuously updated tempo. Alongside the cost
/// the tracker maintains a tempo matrix and a path-length matrix; border
/// costs are normalized by path length and the match for the incoming note
/// is the border cell with the minimal normalized cost.
///
/// The border consists of the newest column plus the retained top cells of
/// earlier columns (the upper rim of the computed region). After each match
/// the window is recentered so the match sits half a window from the start,
/// advancing monotonically and never past the end of the score.
///
/// Memory is O(window): only the two most recent columns and a bounded rim
/// buffer are kept. A session is single-owner mutable state; it may be
/// moved between threads but never shared mutably.
class Tracker {
public:
    struct Cell {
        double accumulated_cost = std::numeric_limits<double>::infinity();
        double tempo_spq = 0.0;
        std::int32_t path_length = 0;
    };

    /// Read-only view of the newest matrix column, for diagnostics and
    /// equivalence testing. `window_start` is the absolute score index of
    /// `cells[0]`.
    struct ColumnView {
        std::size_t window_start = 0;
        std::size_t perf_index = 0;
        std::span<const Cell> cells;
    };

    /// Validates the configuration and the score. Throws EmptyScoreError
    /// on an empty score and InvalidConfigError on bad parameters.
    Tracker(ScoreSequence score, TrackerConfig cfg);

    /// Consume one note and return the alignment decision for it.
    ///
    /// Throws OutOfOrderInputError when the onset precedes the previous
    /// note's by more than kReorderToleranceS (smaller regressions are
    /// clamped), ValidationError on out-of-range pitches, and
    /// SessionEndedError when called after close().
    MatchEvent step(const PerformanceNote& note);

    /// Last match, or nullopt before the first note.
    std::optional<MatchEvent> current_position() const { return last_match_; }

    /// Score position `lookahead_s` seconds past the last match, moving at
    /// the matched tempo, clipped to the score's beat range. Throws
    /// NoMatchYetError before the first match.
    double extrapolate_position(double lookahead_s) const;

    /// Declare the session finished; subsequent step() calls throw
    /// SessionEndedError.
    void close() noexcept { closed_ = true; }
    bool closed() const noexcept { return closed_; }

    const ScoreSequence& score() const noexcept { return score_; }
    const TrackerConfig& config() const noexcept { return cfg_; }

    /// First score index covered by the current window. Non-decreasing
    /// over the lifetime of the session.
    std::size_t score_window_start() const noexcept { return window_start_; }

    /// Rows the next column will span: min(window_size, |score| - start).
    std::size_t window_length() const noexcept;

    std::size_t notes_consumed() const noexcept { return perf_count_; }

    /// True once the last match reached the final score onset.
    bool at_score_end() const noexcept {
        return last_match_ && last_match_->score_index + 1 == score_.size();
    }

    /// Matrix cells written in total / by the most recent step.
    std::uint64_t total_cell_updates() const noexcept { return cell_updates_total_; }
    std::uint64_t last_step_cell_updates() const noexcept { return cell_updates_last_; }

    /// Newest column, or nullopt before the first note.
    std::optional<ColumnView> newest_column() const;

private:
    // Top cell of a finished column, kept as a border candidate.
    struct RimCell {
        std::size_t score_index = 0;
        std::size_t perf_index = 0;
        double perf_onset_s = 0.0;
        double accumulated_cost = 0.0;
        double tempo_spq = 0.0;
        std::int32_t path_length = 0;
    };

    struct Column {
        std::vector<Cell> cells;
        std::size_t start = 0;  // absolute score index of cells[0]
    };

    const Cell* previous_cell(std::size_t score_index) const;
    void seed_first_column(const PerformanceNote& note);
    void compute_column(const PerformanceNote& note);
    MatchEvent select_match(const PerformanceNote& note, std::size_t perf_index) const;
    void advance_window(std::size_t match_score_index);

    ScoreSequence score_;
    TrackerConfig cfg_;

    std::size_t window_start_ = 0;
    Column current_;
    Column previous_;
    std::deque<RimCell> rim_;

    PerformanceNote last_note_{};
    std::size_t perf_count_ = 0;
    std::optional<MatchEvent> last_match_;
    bool closed_ = false;

    std::uint64_t cell_updates_total_ = 0;
    std::uint64_t cell_updates_last_ = 0;
};

/// Run a whole pre-recorded stream through a fresh tracker and collect the
/// per-note matches.
std::vector<MatchEvent> track_stream(const ScoreSequence& score, const PerformanceStream& stream,
                                     const TrackerConfig& cfg);

}  // namespace symtrack
