#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "symtrack/types.hpp"

namespace symtrack {

struct TempoPoint {
    double beat = 0.0;
    double spq = 0.5;
};

/// Piecewise-linear tempo over score beats, in seconds per quarter note.
/// Constant before the first and after the last control point. Control
/// beats must be strictly increasing and every tempo strictly positive.
class TempoCurve {
public:
    static TempoCurve constant(double spq) { return TempoCurve({TempoPoint{0.0, spq}}); }

    explicit TempoCurve(std::vector<TempoPoint> points);

    double spq_at(double beat) const;

    /// Integral of the tempo from beat 0: the nominal performance time of
    /// a score position.
    double seconds_at(double beat) const;

    const std::vector<TempoPoint>& points() const noexcept { return points_; }

private:
    std::vector<TempoPoint> points_;
    std::vector<double> prefix_seconds_;  // seconds_at(points_[k].beat)
};

enum class Pacing { accelerated, realtime };

/// Returns false to close the sink and stop the replay.
using NoteSink = std::function<bool(const PerformanceNote&)>;

/// Deliver a recorded stream to a sink in order. Realtime pacing sleeps to
/// reproduce the recorded inter-onset gaps (within a few milliseconds);
/// accelerated pacing delivers immediately. Throws SinkClosedError if the
/// sink closes before the stream ends.
void replay(const PerformanceStream& perf, Pacing pacing, const NoteSink& sink);

struct SynthesisParams {
    TempoCurve tempo_curve = TempoCurve::constant(0.5);
    double jitter_sd_s = 0.0;        // Gaussian onset noise per note
    double chord_spread_sd_s = 0.0;  // extra Gaussian spread inside chords
    double insert_rate = 0.0;        // spurious-note probability per score note
    double delete_rate = 0.0;        // dropped-note probability per score note
    std::uint64_t seed = 0;
};

struct SynthesisResult {
    PerformanceStream performance;
    GroundTruthAlignment ground_truth;
};

/// Render a score into a synthetic performance plus its ground-truth
/// alignment. Every score onset maps to a nominal time by integrating the
/// tempo curve; each pitch is emitted with independent chord-spread and
/// jitter noise, deletions drop pitches, insertions add uniform random
/// pitches at uniform random times. Ground truth records the nominal
/// (noise-free) time for every score onset; inserted notes carry no pair.
/// Deterministic for a fixed seed.
SynthesisResult synthesize(const ScoreSequence& score, const SynthesisParams& params);

}  // namespace symtrack
