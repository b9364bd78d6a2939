#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "discdrift/model.hpp"
#include "discdrift/schemes.hpp"

namespace discdrift {

/// Absolute error below which a terminal error counts as machine accuracy.
inline constexpr double kMachineAccuracy = 1e-12;

struct ConvergenceStudyConfig {
    SdeSpec spec;
    SchemeKind scheme = SchemeKind::Euler;
    int fine_exponent = 14;
    std::vector<int> coarse_exponents{4, 5, 6, 7, 8, 9, 10};
    std::size_t replications = 100000;
    std::uint64_t master_seed = 0;
    // Inclusive [first, last] exponent window for the regression; all levels
    // when unset.
    std::optional<std::pair<int, int>> regression_window;
    unsigned threads = 0;

    void validate() const;
};

struct Regression {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_norm = 0.0;
    double slope_standard_error = 0.0; // 0 for two points
};

/// Ordinary least squares of y on x; needs at least two distinct x.
Regression regress(std::span<const std::pair<double, double>> points);

struct LevelStats {
    int exponent = 0;
    double rmse = 0.0;
    double rmse_standard_error = 0.0;
    double mean_drift_changes = 0.0;
    double fraction_with_drift_change = 0.0;
    double max_error = 0.0;
    double min_error = 0.0;
};

struct ConvergenceReport {
    std::vector<LevelStats> levels;
    double reference_mean_drift_changes = 0.0;
    double reference_fraction_with_drift_change = 0.0;
    std::size_t reference_paths_with_drift_change = 0;
    std::optional<Regression> regression;
    std::optional<double> rate;
    std::string rate_note; // why rate is missing, empty otherwise
};

ConvergenceReport run_convergence(const ConvergenceStudyConfig& cfg);

/// Fills rate/regression/rate_note of a report from its levels.
void fit_rate(ConvergenceReport& report, std::optional<std::pair<int, int>> window);

struct ErrorEvolution {
    int exponent = 0;
    std::size_t samples = 0;
    std::vector<double> times;                 // k * dt, k = 0..n
    std::vector<double> rmse;                  // per grid time
    std::vector<std::size_t> coarse_changes;   // per grid time, detections at t_k
    std::vector<std::size_t> reference_changes; // fine detections binned to (t_{k-1}, t_k]
    double mean_coarse_changes = 0.0;
    double mean_reference_changes = 0.0;
    std::vector<double> most_frequent_times; // coarse detection times with top counts
    std::optional<double> earliest_reference_change;
    std::optional<double> earliest_coarse_change;
};

ErrorEvolution error_evolution(const ConvergenceStudyConfig& cfg, int exponent,
                               std::size_t samples);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
};

struct ErrorHistogram {
    int exponent = 0;
    std::size_t total = 0;
    std::size_t underflow = 0; // errors below kMachineAccuracy
    std::vector<HistogramBin> bins; // [2^j, 2^{j+1}) octaves
};

/// Octave bins of |terminal reference - terminal coarse| over all
/// replications of cfg.
ErrorHistogram error_histogram(const ConvergenceStudyConfig& cfg, int exponent);

/// Bins arbitrary absolute errors the same way.
ErrorHistogram bin_errors(std::span<const double> errors);

struct StationaryConfig {
    double alpha1 = 1.0;
    double alpha2 = -1.0;
    double dt = 1.0 / 256.0;
    std::size_t burn_in = 10000;
    std::size_t length = 10000000;
    double initial_value = 0.0;
    std::vector<double> probes; // sorted ascending
    std::uint64_t seed = 0;
};

struct StationaryCheck {
    double dt = 0.0;
    std::size_t burn_in = 0;
    std::size_t length = 0;
    std::vector<double> probes;
    std::vector<double> empirical_cdf;
    std::vector<double> invariant_cdf;
    double sup_distance = 0.0;
    double ergodic_second_moment = 0.0;
    double invariant_second_moment = 0.0;
};

/// Long unit-diffusion Euler chain for the inward drift alpha1 1{x<0} +
/// alpha2 1{x>=0}, compared against the invariant law of the SDE.
StationaryCheck stationary_check(const StationaryConfig& cfg);

/// Sup distance between two empirical CDFs evaluated on the same probes.
double cdf_sup_distance(std::span<const double> lhs, std::span<const double> rhs);

std::vector<double> uniform_probes(double lo, double hi, std::size_t count);

} // namespace discdrift
