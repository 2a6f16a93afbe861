#include "symtrack/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace symtrack {

TempoCurve::TempoCurve(std::vector<TempoPoint> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw DegenerateTempoCurveError("tempo curve needs at least one control point");
    }
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const TempoPoint& p = points_[k];
        if (!std::isfinite(p.beat) || !std::isfinite(p.spq)) {
            throw DegenerateTempoCurveError("tempo curve control point is not finite");
        }
        if (!(p.spq > 0.0)) {
            throw DegenerateTempoCurveError("tempo must be strictly positive everywhere");
        }
        if (k > 0 && !(p.beat > points_[k - 1].beat)) {
            throw DegenerateTempoCurveError("tempo curve beats must be strictly increasing");
        }
    }
    prefix_seconds_.resize(points_.size());
    prefix_seconds_[0] = points_[0].beat * points_[0].spq;  // constant before the first point
    for (std::size_t k = 1; k < points_.size(); ++k) {
        const double db = points_[k].beat - points_[k - 1].beat;
        prefix_seconds_[k] =
            prefix_seconds_[k - 1] + db * 0.5 * (points_[k - 1].spq + points_[k].spq);
    }
}

double TempoCurve::spq_at(double beat) const {
    if (beat <= points_.front().beat) {
        return points_.front().spq;
    }
    if (beat >= points_.back().beat) {
        return points_.back().spq;
    }
    const auto it = std::upper_bound(
        points_.begin(), points_.end(), beat,
        [](double b, const TempoPoint& p) { return b < p.beat; });
    const TempoPoint& hi = *it;
    const TempoPoint& lo = *std::prev(it);
    const double f = (beat - lo.beat) / (hi.beat - lo.beat);
    return lo.spq + f * (hi.spq - lo.spq);
}

double TempoCurve::seconds_at(double beat) const {
    if (beat <= points_.front().beat) {
        return beat * points_.front().spq;
    }
    if (beat >= points_.back().beat) {
        return prefix_seconds_.back() + (beat - points_.back().beat) * points_.back().spq;
    }
    const auto it = std::upper_bound(
        points_.begin(), points_.end(), beat,
        [](double b, const TempoPoint& p) { return b < p.beat; });
    const std::size_t hi = static_cast<std::size_t>(it - points_.begin());
    const TempoPoint& lo = points_[hi - 1];
    const double db = beat - lo.beat;
    // Trapezoid over the partial segment.
    return prefix_seconds_[hi - 1] + db * 0.5 * (lo.spq + spq_at(beat));
}

void replay(const PerformanceStream& perf, Pacing pacing, const NoteSink& sink) {
    validate_performance(perf);
    if (perf.empty()) {
        return;
    }
    const double first_onset = perf.notes.front().onset_s;
    const auto start = std::chrono::steady_clock::now();
    for (const PerformanceNote& note : perf.notes) {
        if (pacing == Pacing::realtime) {
            const auto due = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                         std::chrono::duration<double>(note.onset_s - first_onset));
            std::this_thread::sleep_until(due);
        }
        if (!sink(note)) {
            throw SinkClosedError();
        }
    }
}

namespace {

/// Deterministic noise source: fixed algorithms on top of mt19937_64 so the
/// draw sequence does not depend on the standard library.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double gaussian() {  // Box-Muller, one value per call
        double u1 = uniform01();
        while (u1 <= 0.0) {
            u1 = uniform01();
        }
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    int pitch() { return static_cast<int>(engine_() % 128); }

private:
    std::mt19937_64 engine_;
};

}  // namespace

SynthesisResult synthesize(const ScoreSequence& score, const SynthesisParams& params) {
    validate_score(score);
    if (params.insert_rate < 0.0 || params.insert_rate > 1.0 || params.delete_rate < 0.0 ||
        params.delete_rate > 1.0) {
        throw ValidationError("insert/delete rates must lie in [0, 1]");
    }
    if (params.jitter_sd_s < 0.0 || params.chord_spread_sd_s < 0.0) {
        throw ValidationError("noise standard deviations must be >= 0");
    }

    NoiseSource noise(params.seed);
    SynthesisResult result;
    result.ground_truth.pairs.reserve(score.size());

    for (const ScoreOnset& onset : score.onsets) {
        const double nominal = params.tempo_curve.seconds_at(onset.onset_b);
        result.ground_truth.pairs.push_back(AlignmentPair{onset.onset_b, nominal});
        for (int pitch : onset.pitch_set) {
            if (noise.uniform01() < params.delete_rate) {
                continue;
            }
            const double spread = noise.gaussian() * params.chord_spread_sd_s;
            const double jitter = noise.gaussian() * params.jitter_sd_s;
            const double emitted = std::max(0.0, nominal + spread + jitter);
            result.performance.notes.push_back(PerformanceNote{pitch, emitted});
        }
    }

    // Spurious notes model transcription false positives; they land at
    // uniform random times over the nominal performance span.
    const double span = params.tempo_curve.seconds_at(score.last_beat());
    for (const ScoreOnset& onset : score.onsets) {
        for (std::size_t k = 0; k < onset.pitch_set.size(); ++k) {
            if (noise.uniform01() < params.insert_rate) {
                const double at = noise.uniform01() * span;
                result.performance.notes.push_back(PerformanceNote{noise.pitch(), at});
            }
        }
    }

    std::sort(result.performance.notes.begin(), result.performance.notes.end(),
              [](const PerformanceNote& a, const PerformanceNote& b) {
                  return a.onset_s != b.onset_s ? a.onset_s < b.onset_s : a.pitch < b.pitch;
              });
    validate_performance(result.performance);
    validate_alignment(result.ground_truth);
    return result;
}

}  // namespace symtrack
