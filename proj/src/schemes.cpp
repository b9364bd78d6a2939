#include "discdrift/schemes.hpp"

#include <string>

#include "discdrift/errors.hpp"

namespace discdrift {

std::string_view to_string(SchemeKind kind) noexcept {
    switch (kind) {
    case SchemeKind::Euler:
        return "euler";
    case SchemeKind::Heun:
        return "heun";
    case SchemeKind::Platen:
        return "platen";
    }
    return "euler";
}

SchemeKind scheme_from_string(std::string_view name) {
    if (name == "euler") return SchemeKind::Euler;
    if (name == "heun") return SchemeKind::Heun;
    if (name == "platen") return SchemeKind::Platen;
    throw LookupError("unknown scheme '" + std::string(name) + "' (expected euler, heun, platen)");
}

namespace {

void check_inputs(const SdeSpec& spec, SchemeKind scheme, double dt,
                  std::span<const double> increments, std::span<const double> bridge_integrals) {
    spec.validate();
    if (!(dt > 0.0)) throw ParameterError("step size must be positive");
    if (scheme == SchemeKind::Platen && bridge_integrals.size() != increments.size()) {
        throw ParameterError("Platen scheme needs one bridge integral per increment");
    }
}

// Visits (k, x_{k+1}) for every step; the scheme switch is hoisted out of the loop.
template <class Visit>
double integrate(const SdeSpec& spec, SchemeKind scheme, double dt,
                 std::span<const double> increments, std::span<const double> bridge_integrals,
                 Visit&& visit) {
    const PiecewiseDrift& drift = spec.drift;
    const double sigma = spec.sigma;
    const std::size_t n = increments.size();
    double x = spec.initial_value;
    switch (scheme) {
    case SchemeKind::Euler:
        for (std::size_t k = 0; k < n; ++k) {
            x = euler_step(x, drift, sigma, dt, increments[k]);
            visit(k, x);
        }
        break;
    case SchemeKind::Heun:
        for (std::size_t k = 0; k < n; ++k) {
            x = heun_step(x, drift, sigma, dt, increments[k]);
            visit(k, x);
        }
        break;
    case SchemeKind::Platen:
        for (std::size_t k = 0; k < n; ++k) {
            x = platen_step(x, drift, sigma, dt, increments[k], bridge_integrals[k]);
            visit(k, x);
        }
        break;
    }
    return x;
}

} // namespace

PathSummary simulate_summary(const SdeSpec& spec, SchemeKind scheme, double dt,
                             std::span<const double> increments,
                             std::span<const double> bridge_integrals) {
    check_inputs(spec, scheme, dt, increments, bridge_integrals);
    PathSummary summary;
    std::size_t region = spec.drift.region_index(spec.initial_value);
    summary.terminal = integrate(spec, scheme, dt, increments, bridge_integrals,
                                 [&](std::size_t k, double x) {
                                     const std::size_t next = spec.drift.region_index(x);
                                     if (next != region) {
                                         if (summary.drift_changes == 0) summary.first_change = k;
                                         ++summary.drift_changes;
                                         region = next;
                                     }
                                 });
    return summary;
}

void simulate_into(const SdeSpec& spec, SchemeKind scheme, double dt,
                   std::span<const double> increments, std::span<const double> bridge_integrals,
                   Trajectory& out) {
    check_inputs(spec, scheme, dt, increments, bridge_integrals);
    out.scheme = scheme;
    out.values.resize(increments.size() + 1);
    out.values[0] = spec.initial_value;
    out.drift_changes.clear();
    std::size_t region = spec.drift.region_index(spec.initial_value);
    integrate(spec, scheme, dt, increments, bridge_integrals, [&](std::size_t k, double x) {
        out.values[k + 1] = x;
        const std::size_t next = spec.drift.region_index(x);
        if (next != region) {
            out.drift_changes.push_back(k);
            region = next;
        }
    });
}

Trajectory simulate(const SdeSpec& spec, SchemeKind scheme, const NoisePath& path,
                    int coarse_exponent) {
    if (spec.horizon != path.horizon) {
        throw ParameterError("SDE horizon does not match the noise path horizon");
    }
    if (scheme == SchemeKind::Platen && !path.has_bridge_integrals()) {
        throw ParameterError("Platen scheme needs a noise path with bridge integrals");
    }
    const CoarseNoise noise = coarsen(path, coarse_exponent);
    Trajectory trajectory;
    trajectory.grid_exponent = coarse_exponent;
    simulate_into(spec, scheme, noise.step, noise.increments, noise.bridge_integrals, trajectory);
    return trajectory;
}

std::vector<std::size_t> drift_change_indices(const PiecewiseDrift& drift,
                                              std::span<const double> values) {
    std::vector<std::size_t> changes;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        if (drift.region_index(values[k + 1]) != drift.region_index(values[k])) {
            changes.push_back(k);
        }
    }
    return changes;
}

std::optional<double> implicit_solvable(const PiecewiseDrift& drift, double dt, double z) {
    const auto breakpoints = drift.breakpoints();
    const auto values = drift.values();
    if (breakpoints.size() != 1 || breakpoints[0] != 0.0) {
        throw ParameterError("implicit Euler check needs a two-region drift split at 0");
    }
    const double left = values[0];
    const double right = values[1];
    if (!(left > 0.0 && right < 0.0)) {
        throw ParameterError("implicit Euler check needs alpha1 > 0 > alpha2");
    }
    if (!(dt > 0.0)) throw ParameterError("step size must be positive");

    // y < 0 solves y - left*dt = z iff z < -left*dt; y >= 0 solves
    // y - right*dt = z iff z >= -right*dt.
    if (z < -left * dt) return z + left * dt;
    if (z >= -right * dt) return z + right * dt;
    return std::nullopt;
}

} // namespace discdrift
