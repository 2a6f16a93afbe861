#include "symtrack/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace symtrack {

std::vector<double> predicted_times(const std::vector<MatchEvent>& matches,
                                    const ScoreSequence& score,
                                    const GroundTruthAlignment& gt) {
    if (matches.empty()) {
        throw NoMatchesError();
    }
    validate_score(score);

    // First match per score index, as (beat, seconds) anchors ordered by beat.
    struct Anchor {
        double beat;
        double seconds;
    };
    std::vector<char> seen(score.size(), 0);
    std::vector<Anchor> anchors;
    anchors.reserve(matches.size());
    for (const MatchEvent& match : matches) {
        if (match.score_index >= score.size()) {
            throw ValidationError("match score index " + std::to_string(match.score_index) +
                                  " out of range");
        }
        if (!seen[match.score_index]) {
            seen[match.score_index] = 1;
            anchors.push_back(Anchor{score.onsets[match.score_index].onset_b, match.perf_onset_s});
        }
    }
    std::sort(anchors.begin(), anchors.end(),
              [](const Anchor& a, const Anchor& b) { return a.beat < b.beat; });

    std::vector<double> predicted;
    predicted.reserve(gt.size());
    for (const AlignmentPair& pair : gt.pairs) {
        const double beat = pair.score_beats;
        if (beat <= anchors.front().beat) {
            predicted.push_back(anchors.front().seconds);
            continue;
        }
        if (beat >= anchors.back().beat) {
            predicted.push_back(anchors.back().seconds);
            continue;
        }
        const auto hi = std::upper_bound(
            anchors.begin(), anchors.end(), beat,
            [](double b, const Anchor& a) { return b < a.beat; });
        const auto lo = std::prev(hi);
        if (lo->beat == beat) {
            predicted.push_back(lo->seconds);
            continue;
        }
        const double f = (beat - lo->beat) / (hi->beat - lo->beat);
        predicted.push_back(lo->seconds + f * (hi->seconds - lo->seconds));
    }
    return predicted;
}

PieceReport piece_report(const std::vector<double>& predicted, const GroundTruthAlignment& gt) {
    if (predicted.size() != gt.size()) {
        throw ValidationError("predicted times must cover every ground-truth onset");
    }
    PieceReport report;
    report.errors_s.reserve(gt.size());
    for (std::size_t k = 0; k < gt.size(); ++k) {
        const double error = std::abs(predicted[k] - gt.pairs[k].perf_seconds);
        report.errors_s.push_back(error);
        if (error > kLostThresholdS) {
            report.lost = true;
        }
    }
    const double n = static_cast<double>(report.errors_s.size());
    for (std::size_t t = 0; t < kErrorThresholdsS.size(); ++t) {
        std::size_t within = 0;
        for (double error : report.errors_s) {
            if (error <= kErrorThresholdsS[t]) {
                ++within;
            }
        }
        report.quantile_pcts[t] = n > 0 ? 100.0 * static_cast<double>(within) / n : 0.0;
    }
    return report;
}

DatasetReport dataset_report(const std::vector<PieceReport>& reports) {
    if (reports.empty()) {
        throw ValidationError("dataset report needs at least one piece");
    }
    DatasetReport summary;
    summary.piece_count = reports.size();
    for (const PieceReport& report : reports) {
        if (report.lost) {
            ++summary.lost_count;
            continue;
        }
        for (std::size_t t = 0; t < kErrorThresholdsS.size(); ++t) {
            summary.precision_pcts[t] += report.quantile_pcts[t];
        }
    }
    const std::size_t robust = summary.piece_count - summary.lost_count;
    summary.robustness_pct =
        100.0 * static_cast<double>(robust) / static_cast<double>(summary.piece_count);
    summary.precision_defined = robust > 0;
    if (summary.precision_defined) {
        for (double& pct : summary.precision_pcts) {
            pct /= static_cast<double>(robust);
        }
    } else {
        summary.precision_pcts.fill(0.0);
    }
    return summary;
}

}  // namespace symtrack
