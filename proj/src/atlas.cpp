#include "discdrift/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "discdrift/errors.hpp"
#include "discdrift/parallel.hpp"
#include "discdrift/rng.hpp"

namespace discdrift {

void FirstOrderModel::validate() const {
    const std::size_t d = dimension();
    if (d == 0) throw ParameterError("market model needs at least one firm");
    if (volatilities.size() != d || initial_log_caps.size() != d) {
        throw ParameterError("growth rates, volatilities and initial values must have length d");
    }
    for (double s : volatilities) {
        if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("volatilities must be positive");
    }
    for (double y : initial_log_caps) {
        if (!std::isfinite(y)) throw ParameterError("initial log capitalizations must be finite");
    }
    double partial = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        partial += growth_rates[k];
        scale += std::abs(growth_rates[k]);
        if (k + 1 < d && !(partial < 0.0)) {
            throw ParameterError("partial sums of rank growth rates must be negative (rank " +
                                 std::to_string(k + 1) + ")");
        }
    }
    if (std::abs(partial) > 1e-12 * std::max(scale, 1.0)) {
        throw ParameterError("rank growth rates must sum to zero");
    }
}

FirstOrderModel atlas_model(std::size_t dimension, double g, double sigma,
                            std::vector<double> initial_log_caps) {
    if (dimension == 0) throw ParameterError("Atlas model needs at least one firm");
    if (!(g > 0.0) || !std::isfinite(g)) throw ParameterError("Atlas model needs g > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("Atlas model needs sigma > 0");
    FirstOrderModel model;
    model.gamma = g;
    model.growth_rates.assign(dimension, -g);
    model.growth_rates.back() = static_cast<double>(dimension - 1) * g;
    model.volatilities.assign(dimension, sigma);
    model.initial_log_caps = std::move(initial_log_caps);
    model.validate();
    return model;
}

namespace {

// order[r] = firm holding rank r. Insertion sort: d is tiny and the order
// changes little between steps, so starting from the previous order is cheap.
void update_order(std::span<const double> y, std::vector<std::size_t>& order) {
    for (std::size_t r = 1; r < order.size(); ++r) {
        const std::size_t firm = order[r];
        std::size_t s = r;
        while (s > 0) {
            const std::size_t other = order[s - 1];
            const bool better = y[firm] > y[other] || (y[firm] == y[other] && firm < other);
            if (!better) break;
            order[s] = other;
            --s;
        }
        order[s] = firm;
    }
}

std::size_t step_count(const MarketRun& run) {
    if (!(run.horizon > 0.0) || !(run.dt > 0.0)) {
        throw ParameterError("market horizon and step must be positive");
    }
    const double ratio = run.horizon / run.dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
        throw ParameterError("horizon / dt must be a positive integer");
    }
    if (run.noise_substeps == 0) throw ParameterError("noise_substeps must be positive");
    return static_cast<std::size_t>(rounded);
}

} // namespace

std::vector<std::size_t> rank(std::span<const double> log_caps) {
    std::vector<std::size_t> order(log_caps.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    update_order(log_caps, order);
    std::vector<std::size_t> ranks(log_caps.size());
    for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = r;
    return ranks;
}

MarketPath simulate_market_path(const FirstOrderModel& model, const MarketRun& run,
                                std::uint64_t replication) {
    model.validate();
    const std::size_t steps = step_count(run);
    const std::size_t d = model.dimension();

    std::vector<Xoshiro256pp> streams;
    streams.reserve(d);
    for (std::size_t i = 0; i < d; ++i) streams.emplace_back(run.seed, replication, i);
    StandardNormal normal;

    const double dt = run.dt;
    const double sub_scale = std::sqrt(dt / static_cast<double>(run.noise_substeps));
    std::vector<double> drift_by_rank(d);
    for (std::size_t k = 0; k < d; ++k) drift_by_rank[k] = (model.gamma + model.growth_rates[k]) * dt;

    MarketPath path;
    path.steps = steps;
    path.occupation_counts.assign(d * d, 0);
    std::vector<double> y = model.initial_log_caps;
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    update_order(y, order);

    for (std::size_t step = 0; step < steps; ++step) {
        for (std::size_t r = 0; r < d; ++r) {
            const std::size_t firm = order[r];
            double dw = 0.0;
            for (std::size_t s = 0; s < run.noise_substeps; ++s) {
                dw += sub_scale * normal(streams[firm]);
            }
            y[firm] += drift_by_rank[r] + model.volatilities[r] * dw;
        }
        update_order(y, order);
        for (std::size_t r = 0; r < d; ++r) ++path.occupation_counts[order[r] * d + r];
    }
    path.terminal_log_caps = std::move(y);
    return path;
}

OccupationMatrix simulate_market(const FirstOrderModel& model, const MarketRun& run) {
    model.validate();
    const std::size_t steps = step_count(run);
    if (run.replications == 0) throw ParameterError("at least one replication is needed");
    const std::size_t d = model.dimension();

    std::vector<std::vector<std::size_t>> counts(run.replications);
    for_each_block(run.replications, 1, run.threads,
                   [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t rep = begin; rep < end; ++rep) {
            counts[rep] = simulate_market_path(model, run, rep).occupation_counts;
        }
    });

    // Integer totals, so the average does not depend on summation order.
    std::vector<unsigned long long> total(d * d, 0);
    for (const auto& c : counts) {
        for (std::size_t j = 0; j < d * d; ++j) total[j] += c[j];
    }
    OccupationMatrix out;
    out.dimension = d;
    out.horizon = run.horizon;
    out.dt = run.dt;
    out.replications = run.replications;
    out.rates.resize(d * d);
    const double denom = static_cast<double>(steps) * static_cast<double>(run.replications);
    for (std::size_t j = 0; j < d * d; ++j) out.rates[j] = static_cast<double>(total[j]) / denom;
    return out;
}

std::vector<double> occupation_deviation(const OccupationMatrix& occupation) {
    const std::size_t d = occupation.dimension;
    const double target = 1.0 / static_cast<double>(d);
    std::vector<double> deviation(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const double diff = occupation.at(i, k) - target;
            deviation[i] += diff * diff;
        }
    }
    return deviation;
}

} // namespace discdrift
