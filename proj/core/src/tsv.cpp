#include "symtrack/tsv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace symtrack {

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    return text;
}

double parse_double(std::string_view field, const std::string& file, std::size_t line) {
    field = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(file, line, "expected a number, got '" + std::string(field) + "'");
    }
    return value;
}

int parse_pitch(std::string_view field, const std::string& file, std::size_t line) {
    field = trim(field);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(file, line, "expected a MIDI pitch, got '" + std::string(field) + "'");
    }
    if (value < kMidiPitchMin || value > kMidiPitchMax) {
        throw ParseError(file, line, "pitch " + std::to_string(value) + " outside MIDI range");
    }
    return value;
}

/// Calls `record(line_number, first_field, second_field)` for every data line.
template <typename Record>
void for_each_record(const std::filesystem::path& path, Record&& record) {
    std::ifstream stream(path);
    if (!stream) {
        throw ParseError(path.string() + ": cannot open file");
    }
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        const std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ParseError(path.string(), line_number, "expected two tab-separated fields");
        }
        record(line_number, std::string_view(line).substr(0, tab),
               std::string_view(line).substr(tab + 1));
    }
}

}  // namespace

ScoreSequence load_score_tsv(const std::filesystem::path& path) {
    ScoreSequence score;
    for_each_record(path, [&](std::size_t line, std::string_view beats, std::string_view pitches) {
        const double onset_b = parse_double(beats, path.string(), line);
        std::vector<int> pitch_set;
        std::string_view rest = trim(pitches);
        if (rest.empty()) {
            throw ParseError(path.string(), line, "empty pitch list");
        }
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            pitch_set.push_back(parse_pitch(rest.substr(0, comma), path.string(), line));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        try {
            score.onsets.emplace_back(std::move(pitch_set), onset_b);
        } catch (const ValidationError& err) {
            throw ParseError(path.string(), line, err.what());
        }
    });
    validate_score(score);
    return score;
}

PerformanceStream load_performance_tsv(const std::filesystem::path& path) {
    PerformanceStream stream;
    for_each_record(path, [&](std::size_t line, std::string_view seconds, std::string_view pitch) {
        stream.notes.push_back(PerformanceNote{parse_pitch(pitch, path.string(), line),
                                               parse_double(seconds, path.string(), line)});
    });
    validate_performance(stream);
    return stream;
}

GroundTruthAlignment load_alignment_tsv(const std::filesystem::path& path) {
    GroundTruthAlignment alignment;
    for_each_record(path, [&](std::size_t line, std::string_view beats, std::string_view seconds) {
        alignment.pairs.push_back(AlignmentPair{parse_double(beats, path.string(), line),
                                                parse_double(seconds, path.string(), line)});
    });
    validate_alignment(alignment);
    return alignment;
}

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::string score_to_tsv(const ScoreSequence& score) {
    std::ostringstream out;
    for (const ScoreOnset& onset : score.onsets) {
        out << format_double(onset.onset_b) << '\t';
        for (std::size_t k = 0; k < onset.pitch_set.size(); ++k) {
            if (k > 0) {
                out << ',';
            }
            out << onset.pitch_set[k];
        }
        out << '\n';
    }
    return out.str();
}

std::string performance_to_tsv(const PerformanceStream& stream) {
    std::ostringstream out;
    for (const PerformanceNote& note : stream.notes) {
        out << format_double(note.onset_s) << '\t' << note.pitch << '\n';
    }
    return out.str();
}

std::string alignment_to_tsv(const GroundTruthAlignment& alignment) {
    std::ostringstream out;
    for (const AlignmentPair& pair : alignment.pairs) {
        out << format_double(pair.score_beats) << '\t' << format_double(pair.perf_seconds) << '\n';
    }
    return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) {
        throw ParseError(path.string() + ": cannot open file for writing");
    }
    stream << contents;
    if (!stream) {
        throw ParseError(path.string() + ": write failed");
    }
}

}  // namespace

void save_score_tsv(const std::filesystem::path& path, const ScoreSequence& score) {
    write_file(path, score_to_tsv(score));
}

void save_performance_tsv(const std::filesystem::path& path, const PerformanceStream& stream) {
    write_file(path, performance_to_tsv(stream));
}

void save_alignment_tsv(const std::filesystem::path& path, const GroundTruthAlignment& alignment) {
    write_file(path, alignment_to_tsv(alignment));
}

}  // namespace symtrack
