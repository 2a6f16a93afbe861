// Command line front end: single-piece tracking, dataset evaluation,
// parameter grid search, and synthetic-corpus generation.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symtrack/config_file.hpp"
#include "symtrack/evaluate.hpp"
#include "symtrack/midi.hpp"
#include "symtrack/simulate.hpp"
#include "symtrack/tracker.hpp"
#include "symtrack/tsv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace symtrack;

namespace {

// ---------------------------------------------------------------------------
// Input helpers
// ---------------------------------------------------------------------------

bool is_midi_file(const fs::path& path) {
    std::ifstream stream(path, std::ios::binary);
    char magic[4] = {};
    stream.read(magic, 4);
    return stream.gcount() == 4 && std::string_view(magic, 4) == "MThd";
}

ScoreSequence load_score_any(const fs::path& path) {
    return is_midi_file(path) ? load_score_midi(path) : load_score_tsv(path);
}

PerformanceStream load_performance_any(const fs::path& path) {
    return is_midi_file(path) ? load_performance_midi(path) : load_performance_tsv(path);
}

TrackerConfig load_config_or_default(const std::string& config_path) {
    if (config_path.empty()) {
        TrackerConfig cfg;
        cfg.validate();
        return cfg;
    }
    return load_tracker_config(config_path);
}

double parse_number(std::string_view text, const std::string& what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("invalid " + what + ": '" + std::string(text) + "'");
    }
    return value;
}

// Tempo curve specification: either a single number (constant seconds per
// quarter) or comma-separated beat:spq control points, e.g. "0:0.5,16:0.65".
TempoCurve parse_tempo_curve(const std::string& spec) {
    if (spec.find(':') == std::string::npos) {
        return TempoCurve::constant(parse_number(spec, "tempo"));
    }
    std::vector<TempoPoint> points;
    std::string_view rest = spec;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError("tempo curve point '" + std::string(item) + "' must be beat:spq");
        }
        points.push_back(TempoPoint{parse_number(item.substr(0, colon), "curve beat"),
                                    parse_number(item.substr(colon + 1), "curve tempo")});
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return TempoCurve(points);
}

json config_to_json(const TrackerConfig& cfg) {
    return json{{"w", cfg.window_size},
                {"c", cfg.timing_weight},
                {"dw0", cfg.weight_score},
                {"dw1", cfg.weight_diagonal},
                {"dw2", cfg.weight_performance},
                {"d", cfg.tempo_decay},
                {"t_init_spq", cfg.initial_tempo_spq},
                {"tempo_min", cfg.tempo_min_spq},
                {"tempo_max", cfg.tempo_max_spq}};
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) {
        throw ParseError(path.string() + ": cannot open for writing");
    }
    return stream;
}

// ---------------------------------------------------------------------------
// Manifests and piece evaluation
// ---------------------------------------------------------------------------

struct ManifestEntry {
    fs::path score;
    fs::path performance;
    fs::path alignment;
};

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
    std::ifstream stream(path);
    if (!stream) {
        throw ParseError(path.string() + ": cannot open file");
    }
    const fs::path base = path.parent_path();
    auto resolve = [&](std::string field) {
        const fs::path p(field);
        return p.is_absolute() ? p : base / p;
    };

    std::vector<ManifestEntry> entries;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) {
            throw ParseError(path.string(), line_number,
                             "expected score<TAB>performance<TAB>alignment");
        }
        entries.push_back(ManifestEntry{resolve(line.substr(0, tab1)),
                                        resolve(line.substr(tab1 + 1, tab2 - tab1 - 1)),
                                        resolve(line.substr(tab2 + 1))});
    }
    if (entries.empty()) {
        throw ParseError(path.string() + ": manifest lists no pieces");
    }
    return entries;
}

struct LoadedPiece {
    ManifestEntry entry;
    ScoreSequence score;
    PerformanceStream performance;
    GroundTruthAlignment ground_truth;
    std::string load_error;  // empty when usable
};

LoadedPiece load_piece(const ManifestEntry& entry) {
    LoadedPiece piece;
    piece.entry = entry;
    try {
        piece.score = load_score_any(entry.score);
        piece.performance = load_performance_any(entry.performance);
        piece.ground_truth = load_alignment_tsv(entry.alignment);
        if (piece.performance.empty()) {
            piece.load_error = "performance contains no notes";
        }
        if (piece.ground_truth.empty()) {
            piece.load_error = "alignment contains no pairs";
        }
    } catch (const Error& err) {
        piece.load_error = err.what();
    }
    return piece;
}

struct PieceOutcome {
    std::string error;
    PieceReport report;
    double max_error_s = 0.0;
};

PieceOutcome evaluate_piece(const LoadedPiece& piece, const TrackerConfig& cfg) {
    PieceOutcome outcome;
    if (!piece.load_error.empty()) {
        outcome.error = piece.load_error;
        return outcome;
    }
    try {
        const auto matches = track_stream(piece.score, piece.performance, cfg);
        const auto predicted = predicted_times(matches, piece.score, piece.ground_truth);
        outcome.report = piece_report(predicted, piece.ground_truth);
        for (double e : outcome.report.errors_s) {
            outcome.max_error_s = std::max(outcome.max_error_s, e);
        }
    } catch (const Error& err) {
        outcome.error = err.what();
    }
    return outcome;
}

json dataset_to_json(const std::vector<LoadedPiece>& pieces,
                     const std::vector<PieceOutcome>& outcomes, const TrackerConfig& cfg) {
    json piece_array = json::array();
    std::vector<PieceReport> scored;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const PieceOutcome& outcome = outcomes[k];
        json item{{"score", pieces[k].entry.score.string()},
                  {"performance", pieces[k].entry.performance.string()},
                  {"alignment", pieces[k].entry.alignment.string()}};
        if (!outcome.error.empty()) {
            item["status"] = "error";
            item["error"] = outcome.error;
        } else {
            scored.push_back(outcome.report);
            item["status"] = outcome.report.lost ? "lost" : "ok";
            item["lost"] = outcome.report.lost;
            item["onset_count"] = outcome.report.errors_s.size();
            item["max_error_s"] = outcome.max_error_s;
            item["quantile_pcts"] = outcome.report.quantile_pcts;
        }
        piece_array.push_back(std::move(item));
    }

    json out{{"config", config_to_json(cfg)},
             {"thresholds_s", kErrorThresholdsS},
             {"piece_count", pieces.size()},
             {"failed_count", pieces.size() - scored.size()},
             {"pieces", std::move(piece_array)}};
    if (!scored.empty()) {
        const DatasetReport summary = dataset_report(scored);
        out["robustness_pct"] = summary.robustness_pct;
        out["lost_count"] = summary.lost_count;
        if (summary.precision_defined) {
            out["precision_pcts"] = summary.precision_pcts;
        } else {
            out["precision_pcts"] = nullptr;
        }
    } else {
        out["robustness_pct"] = nullptr;
        out["lost_count"] = nullptr;
        out["precision_pcts"] = nullptr;
    }
    return out;
}

// ---------------------------------------------------------------------------
// track
// ---------------------------------------------------------------------------

struct TrackOptions {
    std::string score_path;
    std::string perf_path;
    std::string config_path;
    std::string out_path;
    bool realtime = false;
    double lookahead_ms = -1.0;  // < 0: no extrapolation field
};

int cmd_track(const TrackOptions& opt) {
    const TrackerConfig cfg = load_config_or_default(opt.config_path);
    const ScoreSequence score = load_score_any(opt.score_path);
    const PerformanceStream perf = load_performance_any(opt.perf_path);

    std::ofstream out = open_output(opt.out_path);
    Tracker tracker(score, cfg);

    const auto start = std::chrono::steady_clock::now();
    replay(perf, opt.realtime ? Pacing::realtime : Pacing::accelerated,
           [&](const PerformanceNote& note) {
               const MatchEvent match = tracker.step(note);
               const double wallclock =
                   std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
               json record{{"perf_index", match.perf_index},
                           {"score_index", match.score_index},
                           {"perf_onset_s", match.perf_onset_s},
                           {"score_beats", score.onsets[match.score_index].onset_b},
                           {"tempo_spq", match.tempo.spq},
                           {"wallclock_s", wallclock}};
               if (opt.lookahead_ms >= 0.0) {
                   record["extrapolated_beats"] =
                       tracker.extrapolate_position(opt.lookahead_ms * 1e-3);
               }
               out << record.dump() << '\n';
               return true;
           });
    tracker.close();
    return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalOptions {
    std::string manifest_path;
    std::string config_path;
    std::string out_path;
};

int cmd_eval(const EvalOptions& opt) {
    const TrackerConfig cfg = load_config_or_default(opt.config_path);
    const auto entries = load_manifest(opt.manifest_path);

    std::vector<LoadedPiece> pieces;
    std::vector<PieceOutcome> outcomes;
    for (const ManifestEntry& entry : entries) {
        pieces.push_back(load_piece(entry));
        outcomes.push_back(evaluate_piece(pieces.back(), cfg));
    }

    std::ofstream out = open_output(opt.out_path);
    out << dataset_to_json(pieces, outcomes, cfg).dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// grid
// ---------------------------------------------------------------------------

struct GridOptions {
    std::string manifest_path;
    std::string grid_path;
    std::string out_path;
};

// Axis order fixes both the enumeration order and the column labels.
const std::vector<std::string> kAxisOrder = {"w",  "c",          "dw0",       "dw1",      "dw2",
                                             "d",  "t_init_spq", "tempo_min", "tempo_max"};

std::map<std::string, std::vector<std::string>> load_grid_axes(const fs::path& path) {
    std::ifstream stream(path);
    if (!stream) {
        throw ParseError(path.string() + ": cannot open file");
    }
    std::map<std::string, std::vector<std::string>> axes;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path.string(), line_number, "expected key=v1,v2,...");
        }
        const std::string key = line.substr(0, eq);
        if (std::find(kAxisOrder.begin(), kAxisOrder.end(), key) == kAxisOrder.end()) {
            throw ParseError(path.string(), line_number, "unknown grid axis '" + key + "'");
        }
        std::vector<std::string> values;
        std::string_view rest = std::string_view(line).substr(eq + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            if (!item.empty()) {
                values.emplace_back(item);
            }
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        if (values.empty()) {
            throw ParseError(path.string(), line_number, "axis '" + key + "' lists no values");
        }
        axes[key] = std::move(values);
    }
    if (axes.empty()) {
        throw ParseError(path.string() + ": grid file lists no axes");
    }
    return axes;
}

struct GridPoint {
    std::string label;
    TrackerConfig cfg;
};

std::vector<GridPoint> expand_grid(const std::map<std::string, std::vector<std::string>>& axes) {
    std::vector<std::string> active;
    for (const std::string& key : kAxisOrder) {
        if (axes.count(key)) {
            active.push_back(key);
        }
    }

    std::vector<GridPoint> points;
    std::vector<std::size_t> index(active.size(), 0);
    while (true) {
        GridPoint point;
        std::string label;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const std::string& value = axes.at(active[a])[index[a]];
            apply_config_key(point.cfg, active[a], value);
            if (!label.empty()) {
                label += ',';
            }
            label += active[a] + "=" + value;
        }
        point.cfg.validate();
        point.label = label;
        points.push_back(std::move(point));

        std::size_t a = active.size();
        while (a > 0) {
            --a;
            if (++index[a] < axes.at(active[a]).size()) {
                break;
            }
            index[a] = 0;
            if (a == 0) {
                return points;
            }
        }
    }
}

int cmd_grid(const GridOptions& opt) {
    const auto entries = load_manifest(opt.manifest_path);
    const auto axes = load_grid_axes(opt.grid_path);
    const auto points = expand_grid(axes);

    std::vector<LoadedPiece> pieces;
    for (const ManifestEntry& entry : entries) {
        pieces.push_back(load_piece(entry));
    }

    json configurations = json::array();
    std::vector<std::string> labels;
    std::vector<std::optional<DatasetReport>> summaries;
    for (const GridPoint& point : points) {
        std::vector<PieceReport> scored;
        std::size_t failed = 0;
        for (const LoadedPiece& piece : pieces) {
            const PieceOutcome outcome = evaluate_piece(piece, point.cfg);
            if (!outcome.error.empty()) {
                ++failed;
            } else {
                scored.push_back(outcome.report);
            }
        }
        json item{{"label", point.label},
                  {"params", config_to_json(point.cfg)},
                  {"piece_count", pieces.size()},
                  {"failed_count", failed}};
        std::optional<DatasetReport> summary;
        if (!scored.empty()) {
            summary = dataset_report(scored);
            item["robustness_pct"] = summary->robustness_pct;
            item["lost_count"] = summary->lost_count;
            if (summary->precision_defined) {
                item["precision_pcts"] = summary->precision_pcts;
            } else {
                item["precision_pcts"] = nullptr;
            }
        } else {
            item["robustness_pct"] = nullptr;
            item["lost_count"] = nullptr;
            item["precision_pcts"] = nullptr;
        }
        configurations.push_back(std::move(item));
        labels.push_back(point.label);
        summaries.push_back(summary);
    }

    json out_json{{"axes", axes},
                  {"thresholds_s", kErrorThresholdsS},
                  {"piece_count", pieces.size()},
                  {"configurations", std::move(configurations)}};
    std::ofstream out = open_output(opt.out_path);
    out << out_json.dump(2) << '\n';

    // Companion table, one column per configuration: robustness on top,
    // then the five precision rows from the loosest threshold down.
    fs::path tsv_path(opt.out_path);
    tsv_path.replace_extension(".tsv");
    std::ofstream tsv = open_output(tsv_path);
    tsv << "metric";
    for (const std::string& label : labels) {
        tsv << '\t' << label;
    }
    tsv << '\n';
    auto row = [&](const std::string& name, auto value_of) {
        tsv << name;
        for (std::size_t k = 0; k < summaries.size(); ++k) {
            tsv << '\t';
            if (summaries[k].has_value()) {
                tsv << value_of(*summaries[k]);
            } else {
                tsv << "n/a";
            }
        }
        tsv << '\n';
    };
    row("robustness", [](const DatasetReport& s) { return format_double(s.robustness_pct); });
    for (int t = 4; t >= 0; --t) {
        row("pct_le_" + format_double(kErrorThresholdsS[static_cast<std::size_t>(t)]) + "s",
            [t](const DatasetReport& s) {
                return s.precision_defined
                           ? format_double(s.precision_pcts[static_cast<std::size_t>(t)])
                           : std::string("n/a");
            });
    }
    return 0;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthOptions {
    std::string score_path;
    std::string curve_spec = "0.5";
    double jitter_ms = 0.0;
    double chord_spread_ms = 0.0;
    double insert_rate = 0.0;
    double delete_rate = 0.0;
    std::uint64_t seed = 0;
    std::string out_perf;
    std::string out_align;
};

int cmd_synth(const SynthOptions& opt) {
    const ScoreSequence score = load_score_any(opt.score_path);

    SynthesisParams params;
    params.tempo_curve = parse_tempo_curve(opt.curve_spec);
    params.jitter_sd_s = opt.jitter_ms * 1e-3;
    params.chord_spread_sd_s = opt.chord_spread_ms * 1e-3;
    params.insert_rate = opt.insert_rate;
    params.delete_rate = opt.delete_rate;
    params.seed = opt.seed;

    const SynthesisResult result = synthesize(score, params);
    save_performance_tsv(opt.out_perf, result.performance);
    save_alignment_tsv(opt.out_align, result.ground_truth);
    return 0;
}

// ---------------------------------------------------------------------------

int dispatch(int argc, char** argv) {
    CLI::App app{"Real-time symbolic music tracking harness"};
    app.require_subcommand(1);

    TrackOptions track;
    CLI::App* track_cmd =
        app.add_subcommand("track", "Align one performance against a score");
    track_cmd->add_option("--score", track.score_path, "Score file (SMF or TSV)")->required();
    track_cmd->add_option("--perf", track.perf_path, "Performance file (SMF or TSV)")->required();
    track_cmd->add_option("--config", track.config_path, "Tracker configuration file");
    track_cmd->add_flag("--realtime", track.realtime, "Pace the stream at recorded speed");
    track_cmd->add_option("--lookahead-ms", track.lookahead_ms,
                          "Extrapolate the score position this far ahead");
    track_cmd->add_option("--out", track.out_path, "JSON-lines output path")->required();

    EvalOptions eval;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a manifest of pieces");
    eval_cmd->add_option("--manifest", eval.manifest_path, "TSV manifest of piece triples")
        ->required();
    eval_cmd->add_option("--config", eval.config_path, "Tracker configuration file");
    eval_cmd->add_option("--out", eval.out_path, "JSON report path")->required();

    GridOptions grid;
    CLI::App* grid_cmd =
        app.add_subcommand("grid", "Evaluate the cartesian product of a parameter grid");
    grid_cmd->add_option("--manifest", grid.manifest_path, "TSV manifest of piece triples")
        ->required();
    grid_cmd->add_option("--grid", grid.grid_path, "Axis file, one key=v1,v2,... per line")
        ->required();
    grid_cmd->add_option("--out", grid.out_path, "JSON output path (a .tsv table is written beside it)")
        ->required();

    SynthOptions synth;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate a synthetic performance from a score");
    synth_cmd->add_option("--score", synth.score_path, "Score file (SMF or TSV)")->required();
    synth_cmd->add_option("--tempo-curve", synth.curve_spec,
                          "Constant s/q or beat:spq control points");
    synth_cmd->add_option("--jitter-ms", synth.jitter_ms, "Onset jitter standard deviation")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--chord-spread-ms", synth.chord_spread_ms,
                          "Chord spread standard deviation")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--insert-rate", synth.insert_rate, "Spurious note probability")
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--delete-rate", synth.delete_rate, "Dropped note probability")
        ->check(CLI::Range(0.0, 1.0));
    synth_cmd->add_option("--seed", synth.seed, "Noise seed");
    synth_cmd->add_option("--out-perf", synth.out_perf, "Performance TSV output")->required();
    synth_cmd->add_option("--out-align", synth.out_align, "Alignment TSV output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 1;
    }

    if (*track_cmd) {
        return cmd_track(track);
    }
    if (*eval_cmd) {
        return cmd_eval(eval);
    }
    if (*grid_cmd) {
        return cmd_grid(grid);
    }
    return cmd_synth(synth);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const EmptyScoreError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const SessionEndedError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 3;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
}
