#pragma once

#include <filesystem>

#include "symtrack/types.hpp"

namespace symtrack {

/// Load a tracker configuration from a flat key=value file. Recognized
/// keys: w, c, dw0, dw1, dw2, d, t_init_spq, tempo_min, tempo_max.
/// Omitted keys keep their defaults; unknown keys are a ParseError. '#'
/// starts a comment line. The result is validated before being returned.
TrackerConfig load_tracker_config(const std::filesystem::path& path);

/// Apply one key=value assignment to a config (same keys as above).
void apply_config_key(TrackerConfig& cfg, const std::string& key, const std::string& value);

}  // namespace symtrack
