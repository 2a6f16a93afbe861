#include "symtrack/config_file.hpp"

#include <charconv>
#include <fstream>
#include <string>

namespace symtrack {

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

double to_double(const std::string& value) {
    double parsed = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ParseError("expected a number, got '" + value + "'");
    }
    return parsed;
}

}  // namespace

void apply_config_key(TrackerConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "w") {
        const double w = to_double(value);
        cfg.window_size = static_cast<int>(w);
        if (static_cast<double>(cfg.window_size) != w) {
            throw ParseError("w must be an integer, got '" + value + "'");
        }
    } else if (key == "c") {
        cfg.timing_weight = to_double(value);
    } else if (key == "dw0") {
        cfg.weight_score = to_double(value);
    } else if (key == "dw1") {
        cfg.weight_diagonal = to_double(value);
    } else if (key == "dw2") {
        cfg.weight_performance = to_double(value);
    } else if (key == "d") {
        cfg.tempo_decay = to_double(value);
    } else if (key == "t_init_spq") {
        cfg.initial_tempo_spq = to_double(value);
    } else if (key == "tempo_min") {
        cfg.tempo_min_spq = to_double(value);
    } else if (key == "tempo_max") {
        cfg.tempo_max_spq = to_double(value);
    } else {
        throw ParseError("unknown configuration key '" + key + "'");
    }
}

TrackerConfig load_tracker_config(const std::filesystem::path& path) {
    std::ifstream stream(path);
    if (!stream) {
        throw ParseError(path.string() + ": cannot open file");
    }
    TrackerConfig cfg;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path.string(), line_number, "expected key=value");
        }
        try {
            apply_config_key(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
        } catch (const ParseError& err) {
            throw ParseError(path.string(), line_number, err.what());
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace symtrack
