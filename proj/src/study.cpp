#include "discdrift/study.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "discdrift/analytics.hpp"
#include "discdrift/errors.hpp"
#include "discdrift/noise.hpp"
#include "discdrift/parallel.hpp"
#include "discdrift/rng.hpp"

namespace discdrift {

namespace {

constexpr std::size_t kBlockSize = 64;

// Per-replication outputs of a coupled fine/coarse run, laid out
// replication-major: entry [rep * levels + l].
struct CoupledRuns {
    std::size_t levels = 0;
    std::vector<double> errors;              // reference - coarse at T
    std::vector<std::size_t> coarse_changes;
    std::vector<std::size_t> reference_changes;
};

CoupledRuns run_coupled(const ConvergenceStudyConfig& cfg, std::span<const int> exponents) {
    const std::size_t m = cfg.replications;
    const std::size_t levels = exponents.size();
    CoupledRuns runs;
    runs.levels = levels;
    runs.errors.resize(m * levels);
    runs.coarse_changes.resize(m * levels);
    runs.reference_changes.resize(m);

    const NoiseOptions noise_options{.bridge_integrals = cfg.scheme == SchemeKind::Platen};
    for_each_block(m, kBlockSize, cfg.threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        CoarseNoise coarse;
        for (std::size_t rep = begin; rep < end; ++rep) {
            const NoisePath path = generate(cfg.master_seed, rep, cfg.fine_exponent,
                                            cfg.spec.horizon, noise_options);
            const PathSummary reference =
                simulate_summary(cfg.spec, SchemeKind::Euler, path.step(), path.increments);
            runs.reference_changes[rep] = reference.drift_changes;
            for (std::size_t l = 0; l < levels; ++l) {
                coarsen_into(path, exponents[l], coarse);
                const PathSummary approx = simulate_summary(cfg.spec, cfg.scheme, coarse.step,
                                                            coarse.increments,
                                                            coarse.bridge_integrals);
                runs.errors[rep * levels + l] = reference.terminal - approx.terminal;
                runs.coarse_changes[rep * levels + l] = approx.drift_changes;
            }
        }
    });
    return runs;
}

} // namespace

void ConvergenceStudyConfig::validate() const {
    spec.validate();
    if (fine_exponent < 1 || fine_exponent > 30) {
        throw ParameterError("fine exponent must lie in [1, 30]");
    }
    if (coarse_exponents.empty()) throw ParameterError("at least one coarse exponent is needed");
    for (int e : coarse_exponents) {
        if (e < 0 || e >= fine_exponent) {
            throw ParameterError("coarse exponent " + std::to_string(e) +
                                 " must lie in [0, fine exponent)");
        }
    }
    if (replications < 2) throw ParameterError("at least two replications are needed");
    if (regression_window && regression_window->first > regression_window->second) {
        throw ParameterError("regression window is empty");
    }
}

Regression regress(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw ParameterError("regression needs at least two points");
    const double n = static_cast<double>(points.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if (!(sxx > 0.0)) throw ParameterError("regression needs at least two distinct abscissae");

    Regression fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    double ssr = 0.0;
    for (const auto& [x, y] : points) {
        const double r = y - (fit.intercept + fit.slope * x);
        ssr += r * r;
    }
    fit.residual_norm = std::sqrt(ssr);
    if (points.size() > 2) fit.slope_standard_error = std::sqrt(ssr / (n - 2.0) / sxx);
    return fit;
}

void fit_rate(ConvergenceReport& report, std::optional<std::pair<int, int>> window) {
    report.regression.reset();
    report.rate.reset();
    std::vector<std::pair<double, double>> points;
    bool machine_accuracy = false;
    for (const auto& level : report.levels) {
        if (window && (level.exponent < window->first || level.exponent > window->second)) {
            continue;
        }
        if (level.rmse < kMachineAccuracy) machine_accuracy = true;
        points.emplace_back(level.exponent, std::log2(level.rmse));
    }
    if (machine_accuracy) {
        report.rate_note = "errors at machine accuracy; rate not meaningful";
        return;
    }
    if (points.size() < 2) {
        report.rate_note = "fewer than two levels in the regression window";
        return;
    }
    report.regression = regress(points);
    report.rate = -report.regression->slope;
    report.rate_note.clear();
}

ConvergenceReport run_convergence(const ConvergenceStudyConfig& cfg) {
    cfg.validate();
    const CoupledRuns runs = run_coupled(cfg, cfg.coarse_exponents);
    const std::size_t m = cfg.replications;
    const double mf = static_cast<double>(m);

    ConvergenceReport report;
    for (std::size_t l = 0; l < runs.levels; ++l) {
        double sum_sq = 0.0;
        double sum_quad = 0.0;
        double max_error = 0.0;
        double min_error = std::numeric_limits<double>::infinity();
        std::size_t changes = 0;
        std::size_t paths_with_change = 0;
        for (std::size_t rep = 0; rep < m; ++rep) {
            const double e = runs.errors[rep * runs.levels + l];
            const double sq = e * e;
            sum_sq += sq;
            sum_quad += sq * sq;
            max_error = std::max(max_error, std::abs(e));
            min_error = std::min(min_error, std::abs(e));
            const std::size_t c = runs.coarse_changes[rep * runs.levels + l];
            changes += c;
            paths_with_change += c > 0 ? 1 : 0;
        }
        LevelStats level;
        level.exponent = cfg.coarse_exponents[l];
        const double mean_sq = sum_sq / mf;
        level.rmse = std::sqrt(mean_sq);
        // Delta method: se(sqrt(m2)) = se(m2) / (2 sqrt(m2)).
        const double var_sq = std::max(0.0, (sum_quad / mf - mean_sq * mean_sq) * mf / (mf - 1.0));
        level.rmse_standard_error =
            level.rmse > 0.0 ? std::sqrt(var_sq / mf) / (2.0 * level.rmse) : 0.0;
        level.mean_drift_changes = static_cast<double>(changes) / mf;
        level.fraction_with_drift_change = static_cast<double>(paths_with_change) / mf;
        level.max_error = max_error;
        level.min_error = min_error;
        report.levels.push_back(level);
    }

    std::size_t ref_changes = 0;
    for (std::size_t c : runs.reference_changes) {
        ref_changes += c;
        report.reference_paths_with_drift_change += c > 0 ? 1 : 0;
    }
    report.reference_mean_drift_changes = static_cast<double>(ref_changes) / mf;
    report.reference_fraction_with_drift_change =
        static_cast<double>(report.reference_paths_with_drift_change) / mf;

    fit_rate(report, cfg.regression_window);
    return report;
}

ErrorEvolution error_evolution(const ConvergenceStudyConfig& cfg, int exponent,
                               std::size_t samples) {
    ConvergenceStudyConfig checked = cfg;
    checked.coarse_exponents = {exponent};
    checked.replications = std::max<std::size_t>(samples, 2);
    checked.validate();
    if (samples == 0) throw ParameterError("error evolution needs at least one sample");

    const std::size_t n = std::size_t{1} << exponent;
    const std::size_t ratio = std::size_t{1} << (cfg.fine_exponent - exponent);
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    struct Block {
        std::vector<double> sq_err;
        std::vector<std::size_t> coarse_changes;
        std::vector<std::size_t> reference_changes;
        std::size_t coarse_total = 0;
        std::size_t reference_total = 0;
        std::size_t earliest_reference = kNone; // fine step index
        std::size_t earliest_coarse = kNone;    // coarse step index
    };
    const std::size_t block_count = (samples + kBlockSize - 1) / kBlockSize;
    std::vector<Block> blocks(block_count);

    const NoiseOptions noise_options{.bridge_integrals = cfg.scheme == SchemeKind::Platen};
    for_each_block(samples, kBlockSize, cfg.threads,
                   [&](std::size_t b, std::size_t begin, std::size_t end) {
        Block& acc = blocks[b];
        acc.sq_err.assign(n + 1, 0.0);
        acc.coarse_changes.assign(n + 1, 0);
        acc.reference_changes.assign(n + 1, 0);
        Trajectory reference;
        Trajectory approx;
        CoarseNoise coarse;
        for (std::size_t rep = begin; rep < end; ++rep) {
            const NoisePath path = generate(cfg.master_seed, rep, cfg.fine_exponent,
                                            cfg.spec.horizon, noise_options);
            simulate_into(cfg.spec, SchemeKind::Euler, path.step(), path.increments, {},
                          reference);
            coarsen_into(path, exponent, coarse);
            simulate_into(cfg.spec, cfg.scheme, coarse.step, coarse.increments,
                          coarse.bridge_integrals, approx);
            for (std::size_t k = 0; k <= n; ++k) {
                const double e = reference.values[k * ratio] - approx.values[k];
                acc.sq_err[k] += e * e;
            }
            for (std::size_t k : approx.drift_changes) ++acc.coarse_changes[k + 1];
            for (std::size_t k : reference.drift_changes) {
                ++acc.reference_changes[(k + ratio) / ratio];
            }
            acc.coarse_total += approx.drift_changes.size();
            acc.reference_total += reference.drift_changes.size();
            if (!approx.drift_changes.empty()) {
                acc.earliest_coarse = std::min(acc.earliest_coarse, approx.drift_changes.front());
            }
            if (!reference.drift_changes.empty()) {
                acc.earliest_reference =
                    std::min(acc.earliest_reference, reference.drift_changes.front());
            }
        }
    });

    ErrorEvolution out;
    out.exponent = exponent;
    out.samples = samples;
    const double dt = cfg.spec.horizon / static_cast<double>(n);
    const double fine_dt = dt / static_cast<double>(ratio);
    out.times.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out.times[k] = static_cast<double>(k) * dt;
    std::vector<double> sq_err(n + 1, 0.0);
    out.coarse_changes.assign(n + 1, 0);
    out.reference_changes.assign(n + 1, 0);
    std::size_t coarse_total = 0;
    std::size_t reference_total = 0;
    std::size_t earliest_reference = kNone;
    std::size_t earliest_coarse = kNone;
    for (const Block& acc : blocks) {
        for (std::size_t k = 0; k <= n; ++k) {
            sq_err[k] += acc.sq_err[k];
            out.coarse_changes[k] += acc.coarse_changes[k];
            out.reference_changes[k] += acc.reference_changes[k];
        }
        coarse_total += acc.coarse_total;
        reference_total += acc.reference_total;
        earliest_reference = std::min(earliest_reference, acc.earliest_reference);
        earliest_coarse = std::min(earliest_coarse, acc.earliest_coarse);
    }
    const double sf = static_cast<double>(samples);
    out.rmse.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) out.rmse[k] = std::sqrt(sq_err[k] / sf);
    out.mean_coarse_changes = static_cast<double>(coarse_total) / sf;
    out.mean_reference_changes = static_cast<double>(reference_total) / sf;
    if (earliest_reference != kNone) {
        out.earliest_reference_change = static_cast<double>(earliest_reference + 1) * fine_dt;
    }
    if (earliest_coarse != kNone) {
        out.earliest_coarse_change = static_cast<double>(earliest_coarse + 1) * dt;
    }

    // As many times as the average number of changes (at least one), plus
    // every time tied with the last one picked.
    if (coarse_total > 0) {
        std::vector<std::size_t> order(n + 1);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return out.coarse_changes[a] > out.coarse_changes[b];
        });
        const auto wanted = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::llround(out.mean_coarse_changes)), 1, n);
        const std::size_t threshold = out.coarse_changes[order[wanted - 1]];
        for (std::size_t k = 0; k <= n; ++k) {
            if (out.coarse_changes[k] > 0 && out.coarse_changes[k] >= threshold) {
                out.most_frequent_times.push_back(out.times[k]);
            }
        }
    }
    return out;
}

ErrorHistogram bin_errors(std::span<const double> errors) {
    ErrorHistogram hist;
    hist.total = errors.size();
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (double e : errors) {
        const double a = std::abs(e);
        if (a < kMachineAccuracy) {
            ++hist.underflow;
            continue;
        }
        const int octave = std::ilogb(a);
        lo = std::min(lo, octave);
        hi = std::max(hi, octave);
    }
    if (hist.underflow == hist.total) return hist;

    hist.bins.resize(static_cast<std::size_t>(hi - lo + 1));
    for (int j = lo; j <= hi; ++j) {
        auto& bin = hist.bins[static_cast<std::size_t>(j - lo)];
        bin.lower = std::ldexp(1.0, j);
        bin.upper = std::ldexp(1.0, j + 1);
    }
    for (double e : errors) {
        const double a = std::abs(e);
        if (a < kMachineAccuracy) continue;
        ++hist.bins[static_cast<std::size_t>(std::ilogb(a) - lo)].count;
    }
    return hist;
}

ErrorHistogram error_histogram(const ConvergenceStudyConfig& cfg, int exponent) {
    ConvergenceStudyConfig checked = cfg;
    checked.coarse_exponents = {exponent};
    checked.validate();
    const int exponents[] = {exponent};
    const CoupledRuns runs = run_coupled(checked, exponents);
    ErrorHistogram hist = bin_errors(runs.errors);
    hist.exponent = exponent;
    return hist;
}

StationaryCheck stationary_check(const StationaryConfig& cfg) {
    const PiecewiseDrift drift({0.0}, {cfg.alpha1, cfg.alpha2});
    const DriftDirection direction = classify(drift);
    if (direction.kind != DriftDirection::Kind::Inward || direction.point != 0.0) {
        throw ParameterError("stationary check needs an inward drift about 0");
    }
    if (!(cfg.dt > 0.0)) throw ParameterError("step size must be positive");
    if (cfg.length == 0) throw ParameterError("chain length must be positive");
    if (cfg.probes.empty() || !std::is_sorted(cfg.probes.begin(), cfg.probes.end())) {
        throw ParameterError("probes must be non-empty and sorted");
    }
    const InvariantDensity density(cfg.alpha1, cfg.alpha2);

    Xoshiro256pp rng(cfg.seed);
    StandardNormal normal;
    const double sqrt_dt = std::sqrt(cfg.dt);
    double x = cfg.initial_value;
    for (std::size_t k = 0; k < cfg.burn_in; ++k) {
        x = euler_step(x, drift, 1.0, cfg.dt, sqrt_dt * normal(rng));
    }

    // below[j] counts states in (probe[j-1], probe[j]].
    std::vector<std::size_t> below(cfg.probes.size() + 1, 0);
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < cfg.length; ++k) {
        x = euler_step(x, drift, 1.0, cfg.dt, sqrt_dt * normal(rng));
        const auto j = std::lower_bound(cfg.probes.begin(), cfg.probes.end(), x) -
                       cfg.probes.begin();
        ++below[static_cast<std::size_t>(j)];
        sum_sq += x * x;
    }

    StationaryCheck check;
    check.dt = cfg.dt;
    check.burn_in = cfg.burn_in;
    check.length = cfg.length;
    check.probes = cfg.probes;
    const double lf = static_cast<double>(cfg.length);
    std::size_t cumulative = 0;
    for (std::size_t j = 0; j < cfg.probes.size(); ++j) {
        cumulative += below[j];
        const double empirical = static_cast<double>(cumulative) / lf;
        const double exact = density.cdf(cfg.probes[j]);
        check.empirical_cdf.push_back(empirical);
        check.invariant_cdf.push_back(exact);
        check.sup_distance = std::max(check.sup_distance, std::abs(empirical - exact));
    }
    check.ergodic_second_moment = sum_sq / lf;
    check.invariant_second_moment = density.second_moment();
    return check;
}

double cdf_sup_distance(std::span<const double> lhs, std::span<const double> rhs) {
    if (lhs.size() != rhs.size()) throw ParameterError("CDFs must share their probe points");
    double sup = 0.0;
    for (std::size_t j = 0; j < lhs.size(); ++j) sup = std::max(sup, std::abs(lhs[j] - rhs[j]));
    return sup;
}

std::vector<double> uniform_probes(double lo, double hi, std::size_t count) {
    if (count < 2 || !(hi > lo)) throw ParameterError("probe range needs lo < hi and count >= 2");
    std::vector<double> probes(count);
    for (std::size_t j = 0; j < count; ++j) {
        probes[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(count - 1);
    }
    return probes;
}

} // namespace discdrift
