#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace discdrift {

/// First-order rank-based market: the firm ranked k (0 = largest log
/// capitalization) has log-drift gamma + growth_rates[k] and volatility
/// volatilities[k].
struct FirstOrderModel {
    double gamma = 0.0;
    std::vector<double> growth_rates;
    std::vector<double> volatilities;
    std::vector<double> initial_log_caps;

    std::size_t dimension() const noexcept { return growth_rates.size(); }

    /// Partial sums of growth_rates negative except the full sum, which is
    /// zero (to a relative 1e-12); volatilities positive.
    void validate() const;
};

/// Atlas parameters: gamma = g, growth -g for every rank but the last,
/// (d-1) g for the last, constant sigma. Only the smallest firm grows, at
/// rate d * g.
FirstOrderModel atlas_model(std::size_t dimension, double g, double sigma,
                            std::vector<double> initial_log_caps);

/// ranks[i] = rank of firm i, 0 for the largest value. Ties go to the lower
/// firm index.
std::vector<std::size_t> rank(std::span<const double> log_caps);

/// Fraction of the grid times t = dt, 2 dt, ..., T that firm i spent at
/// rank k, averaged over replications.
struct OccupationMatrix {
    std::size_t dimension = 0;
    double horizon = 0.0;
    double dt = 0.0;
    std::size_t replications = 0;
    std::vector<double> rates; // firm-major: rates[firm * dimension + rank]

    double at(std::size_t firm, std::size_t rank_index) const {
        return rates[firm * dimension + rank_index];
    }
};

struct MarketRun {
    double horizon = 100.0;
    double dt = 1.0 / 1024.0;
    std::size_t replications = 1000;
    std::uint64_t seed = 0;
    // Each Euler increment is the sum of this many finer Gaussian increments,
    // so runs with dt and dt / substeps share one Brownian path.
    std::size_t noise_substeps = 1;
    unsigned threads = 0;
};

struct MarketPath {
    std::vector<std::size_t> occupation_counts; // firm-major, d x d
    std::vector<double> terminal_log_caps;
    std::size_t steps = 0;
};

/// One Euler path of the model. Ranks are recomputed after every step.
MarketPath simulate_market_path(const FirstOrderModel& model, const MarketRun& run,
                                std::uint64_t replication);

OccupationMatrix simulate_market(const FirstOrderModel& model, const MarketRun& run);

/// Per firm: sum over ranks of (rate - 1/d)^2.
std::vector<double> occupation_deviation(const OccupationMatrix& occupation);

} // namespace discdrift
