#pragma once

#include <filesystem>
#include <string>

#include "symtrack/types.hpp"

namespace symtrack {

/// Text fixture formats, one record per line, tab-separated, with '#'
/// comment lines and blank lines ignored:
///
///   score:        beats<TAB>pitch[,pitch...]
///   performance:  seconds<TAB>pitch
///   alignment:    beats<TAB>seconds
///
/// Loaders throw ParseError (with the offending line number) on malformed
/// input and ValidationError when the parsed value violates an invariant.

ScoreSequence load_score_tsv(const std::filesystem::path& path);
PerformanceStream load_performance_tsv(const std::filesystem::path& path);
GroundTruthAlignment load_alignment_tsv(const std::filesystem::path& path);

void save_score_tsv(const std::filesystem::path& path, const ScoreSequence& score);
void save_performance_tsv(const std::filesystem::path& path, const PerformanceStream& stream);
void save_alignment_tsv(const std::filesystem::path& path, const GroundTruthAlignment& alignment);

std::string score_to_tsv(const ScoreSequence& score);
std::string performance_to_tsv(const PerformanceStream& stream);
std::string alignment_to_tsv(const GroundTruthAlignment& alignment);

/// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

}  // namespace symtrack
