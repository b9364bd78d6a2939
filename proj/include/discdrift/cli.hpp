#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "discdrift/model.hpp"
#include "discdrift/schemes.hpp"

namespace discdrift::cli {

enum class ExperimentKind { Converge, Evolution, Histogram, Stationary, Atlas, Paths };

std::string_view to_string(ExperimentKind kind) noexcept;

struct AtlasSettings {
    std::size_t dimension = 3;
    double g = 0.1;
    double sigma = 0.09;
    std::vector<double> initial_log_caps{3.4, 4.1, 5.7};
    std::vector<double> horizons{100.0, 250.0, 500.0, 750.0, 1000.0};
    double dt = 1.0 / 1024.0;
    std::size_t noise_substeps = 1;
};

struct StationarySettings {
    double dt = 1.0 / 256.0;
    std::size_t burn_in = 10000;
    std::size_t length = 10000000;
    double probe_lo = -4.0;
    double probe_hi = 4.0;
    std::size_t probe_count = 161;
};

/// A validated experiment description. Fields not used by the chosen
/// experiment keep their defaults.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Converge;
    std::optional<std::string> catalog_name;
    SdeSpec spec;
    SchemeKind scheme = SchemeKind::Euler;
    int fine_exponent = 14;
    std::vector<int> coarse_exponents{4, 5, 6, 7, 8, 9, 10};
    std::size_t replications = 100000;
    std::uint64_t master_seed = 0;
    std::filesystem::path output_dir = "out";
    std::optional<std::pair<int, int>> regression_window;
    std::size_t samples = 10000; // evolution
    std::size_t path_count = 100; // paths
    StationarySettings stationary;
    AtlasSettings atlas;

    /// Normalized JSON echo with every default filled in.
    nlohmann::json to_json() const;
};

/// Parses and validates a UTF-8 JSON config. Throws ConfigError naming the
/// field (or the line for syntax errors).
ExperimentConfig parse_config(std::string_view text);

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> output_dir;
    unsigned threads = 0;
};

struct RunResult {
    nlohmann::json summary;
    std::vector<std::filesystem::path> files;
};

/// Runs the experiment and writes summary.json plus its CSV files into the
/// output directory (created if missing).
RunResult run(ExperimentConfig cfg, const RunOptions& options = {});

} // namespace discdrift::cli
