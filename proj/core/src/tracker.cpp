#include "symtrack/tracker.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace symtrack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Tracker::Tracker(ScoreSequence score, TrackerConfig cfg)
    : score_(std::move(score)), cfg_(cfg) {
    cfg_.validate();
    validate_score(score_);
}

std::size_t Tracker::window_length() const noexcept {
    const auto w = static_cast<std::size_t>(cfg_.window_size);
    return std::min(w, score_.size() - window_start_);
}

std::optional<Tracker::ColumnView> Tracker::newest_column() const {
    if (perf_count_ == 0) {
        return std::nullopt;
    }
    return ColumnView{current_.start, perf_count_ - 1,
                      std::span<const Cell>(current_.cells)};
}

const Tracker::Cell* Tracker::previous_cell(std::size_t score_index) const {
    if (score_index < previous_.start ||
        score_index >= previous_.start + previous_.cells.size()) {
        return nullptr;
    }
    return &previous_.cells[score_index - previous_.start];
}

MatchEvent Tracker::step(const PerformanceNote& note) {
    if (closed_) {
        throw SessionEndedError("step() called on a closed tracking session");
    }
    if (note.pitch < kMidiPitchMin || note.pitch > kMidiPitchMax) {
        throw ValidationError("note pitch " + std::to_string(note.pitch) + " outside MIDI range");
    }
    if (!std::isfinite(note.onset_s) || note.onset_s < 0.0) {
        throw ValidationError("note onset must be finite and >= 0");
    }

    PerformanceNote incoming = note;
    if (perf_count_ > 0) {
        if (incoming.onset_s < last_note_.onset_s - kReorderToleranceS) {
            throw OutOfOrderInputError("note onset regressed by more than the reorder tolerance");
        }
        // Sub-tolerance jitter is clamped to the previous onset.
        incoming.onset_s = std::max(incoming.onset_s, last_note_.onset_s);
    }

    const std::size_t perf_index = perf_count_;
    std::swap(current_, previous_);
    current_.start = window_start_;
    current_.cells.assign(window_length(), Cell{});

    if (perf_index == 0) {
        seed_first_column(incoming);
    } else {
        compute_column(incoming);
    }
    cell_updates_last_ = current_.cells.size();
    cell_updates_total_ += cell_updates_last_;

    MatchEvent match = select_match(incoming, perf_index);
    last_match_ = match;
    advance_window(match.score_index);

    // Retain this column's top cell as a border candidate for later steps.
    const Cell& top = current_.cells.back();
    rim_.push_back(RimCell{current_.start + current_.cells.size() - 1, perf_index,
                           incoming.onset_s, top.accumulated_cost, top.tempo_spq,
                           top.path_length});
    if (rim_.size() > static_cast<std::size_t>(cfg_.window_size)) {
        rim_.pop_front();
    }

    last_note_ = incoming;
    ++perf_count_;
    return match;
}

// The first column carries pitch information only: timing is meaningless
// before a second onset exists. Costs accumulate down the column with the
// score-direction weight; tempo is seeded with the configured initial value.
void Tracker::seed_first_column(const PerformanceNote& note) {
    double running = 0.0;
    for (std::size_t r = 0; r < current_.cells.size(); ++r) {
        const double pitch_error =
            score_.onsets[current_.start + r].contains(note.pitch) ? 0.0 : 1.0;
        running += cfg_.weight_score * pitch_error;
        current_.cells[r] = Cell{running, cfg_.initial_tempo_spq,
                                 static_cast<std::int32_t>(r + 1)};
    }
}

void Tracker::compute_column(const PerformanceNote& note) {
    for (std::size_t r = 0; r < current_.cells.size(); ++r) {
        const std::size_t i = current_.start + r;
        const ScoreOnset& score_cur = score_.onsets[i];

        double dc_score = kInf, dc_diag = kInf, dc_perf = kInf;
        PairwiseResult pw_score{}, pw_diag{}, pw_perf{};
        std::int32_t pl_score = 0, pl_diag = 0, pl_perf = 0;

        // Score direction: predecessor (i-1, j) in this same column pairs
        // the incoming note with the next score onset; the note acts as its
        // own timing predecessor.
        if (r > 0) {
            const Cell& pred = current_.cells[r - 1];
            pw_score = pairwise_distance(score_cur, score_.onsets[i - 1], note, note,
                                         TempoEstimate{pred.tempo_spq}, cfg_);
            dc_score = cfg_.weight_score * pw_score.distance + pred.accumulated_cost;
            pl_score = pred.path_length;
        }
        // Diagonal: predecessor (i-1, j-1).
        if (i > 0) {
            if (const Cell* pred = previous_cell(i - 1)) {
                pw_diag = pairwise_distance(score_cur, score_.onsets[i - 1], note, last_note_,
                                            TempoEstimate{pred->tempo_spq}, cfg_);
                dc_diag = cfg_.weight_diagonal * pw_diag.distance + pred->accumulated_cost;
                pl_diag = pred->path_length;
            }
        }
        // Performance direction: predecessor (i, j-1); zero score IOI.
        if (const Cell* pred = previous_cell(i)) {
            pw_perf = pairwise_distance(score_cur, score_cur, note, last_note_,
                                        TempoEstimate{pred->tempo_spq}, cfg_);
            dc_perf = cfg_.weight_performance * pw_perf.distance + pred->accumulated_cost;
            pl_perf = pred->path_length;
        }

        // Argmin with deterministic tie-breaking: diagonal, then score,
        // then performance direction.
        double best = dc_diag;
        const PairwiseResult* best_pw = &pw_diag;
        std::int32_t best_pl = pl_diag;
        if (dc_score < best) {
            best = dc_score;
            best_pw = &pw_score;
            best_pl = pl_score;
        }
        if (dc_perf < best) {
            best = dc_perf;
            best_pw = &pw_perf;
            best_pl = pl_perf;
        }
        assert(std::isfinite(best) && "window overlap guarantees a predecessor");

        current_.cells[r] = Cell{best, best_pw->tempo.spq,
                                 static_cast<std::int32_t>(1 + best_pl)};
    }
}

MatchEvent Tracker::select_match(const PerformanceNote& note, std::size_t perf_index) const {
    double best_norm = kInf;
    MatchEvent best{};

    auto consider = [&](double norm, std::size_t score_index, std::size_t note_index,
                        double onset_s, double tempo_spq) {
        const bool better =
            norm < best_norm ||
            (norm == best_norm &&
             (score_index > best.score_index ||
              (score_index == best.score_index && note_index > best.perf_index)));
        if (better) {
            best_norm = norm;
            best = MatchEvent{score_index, note_index, onset_s, TempoEstimate{tempo_spq}};
        }
    };

    for (const RimCell& rim : rim_) {
        consider(rim.accumulated_cost / rim.path_length, rim.score_index, rim.perf_index,
                 rim.perf_onset_s, rim.tempo_spq);
    }
    for (std::size_t r = 0; r < current_.cells.size(); ++r) {
        const Cell& cell = current_.cells[r];
        consider(cell.accumulated_cost / cell.path_length, current_.start + r, perf_index,
                 note.onset_s, cell.tempo_spq);
    }
    return best;
}

// Recenter so the match sits half a window past the start; the window only
// moves forward and never past the tail of the score.
void Tracker::advance_window(std::size_t match_score_index) {
    const auto w = static_cast<std::size_t>(cfg_.window_size);
    const std::size_t half = w / 2;
    const std::size_t target = match_score_index > half ? match_score_index - half : 0;
    const std::size_t max_start = score_.size() > w ? score_.size() - w : 0;
    window_start_ = std::max(window_start_, std::min(target, max_start));
}

double Tracker::extrapolate_position(double lookahead_s) const {
    if (!last_match_) {
        throw NoMatchYetError();
    }
    if (!(lookahead_s >= 0.0)) {
        throw ValidationError("lookahead must be >= 0");
    }
    const MatchEvent& match = *last_match_;
    const double beats =
        score_.onsets[match.score_index].onset_b + lookahead_s / match.tempo.spq;
    return std::clamp(beats, score_.first_beat(), score_.last_beat());
}

std::vector<MatchEvent> track_stream(const ScoreSequence& score, const PerformanceStream& stream,
                                     const TrackerConfig& cfg) {
    Tracker tracker(score, cfg);
    std::vector<MatchEvent> matches;
    matches.reserve(stream.size());
    for (const PerformanceNote& note : stream.notes) {
        matches.push_back(tracker.step(note));
    }
    return matches;
}

}  // namespace symtrack
