#pragma once

#include <array>
#include <vector>

#include "symtrack/types.hpp"

namespace symtrack {

/// Precision thresholds in seconds: 25, 50, 100, 250, 500 ms.
inline constexpr std::array<double, 5> kErrorThresholdsS = {0.025, 0.05, 0.1, 0.25, 0.5};

/// A tracker counts as lost once any absolute error exceeds this bound.
inline constexpr double kLostThresholdS = 10.0;

/// Per-piece evaluation: one absolute error per ground-truth score onset,
/// the lost flag, and the share of errors at or below each threshold.
struct PieceReport {
    std::vector<double> errors_s;
    bool lost = false;
    std::array<double, 5> quantile_pcts{};
};

/// Dataset aggregation. Precision percentages average the per-piece
/// quantiles over robustly tracked (non-lost) pieces only and are
/// undefined when every piece was lost.
struct DatasetReport {
    std::size_t piece_count = 0;
    std::size_t lost_count = 0;
    double robustness_pct = 0.0;
    bool precision_defined = false;
    std::array<double, 5> precision_pcts{};
};

/// Predicted performance time for every ground-truth score onset: the
/// onset of the first performance note matched to that score index, or,
/// for onsets the tracker never reported, linear beat-to-seconds
/// interpolation between the nearest matched onsets (constant at the
/// ends). Throws NoMatchesError on an empty trace.
std::vector<double> predicted_times(const std::vector<MatchEvent>& matches,
                                    const ScoreSequence& score,
                                    const GroundTruthAlignment& gt);

/// Absolute errors against the ground truth, the 10-second lost rule, and
/// the threshold quantiles. `predicted` must cover every ground-truth pair.
PieceReport piece_report(const std::vector<double>& predicted, const GroundTruthAlignment& gt);

/// Aggregate piece reports; throws ValidationError on an empty input.
DatasetReport dataset_report(const std::vector<PieceReport>& reports);

}  // namespace symtrack
