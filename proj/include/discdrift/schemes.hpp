#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "discdrift/model.hpp"
#include "discdrift/noise.hpp"

namespace discdrift {

enum class SchemeKind { Euler, Heun, Platen };

std::string_view to_string(SchemeKind kind) noexcept;
SchemeKind scheme_from_string(std::string_view name);

// The one-step maps below keep the Euler expression (x + a*dt) + sigma*dw as
// a common prefix, so Heun and Platen reproduce Euler bit for bit whenever
// their probe points see the same drift value.

inline double euler_step(double x, const PiecewiseDrift& drift, double sigma, double dt,
                         double dw) noexcept {
    return x + drift(x) * dt + sigma * dw;
}

inline double heun_step(double x, const PiecewiseDrift& drift, double sigma, double dt,
                        double dw) noexcept {
    const double a = drift(x);
    const double predictor = x + a * dt + sigma * dw;
    const double a_pred = drift(predictor);
    return x + 0.5 * (a + a_pred) * dt + sigma * dw;
}

/// Wagner-Platen type step for additive noise. bridge_integral is the
/// integral over the step of W(u) - W(t_k).
inline double platen_step(double x, const PiecewiseDrift& drift, double sigma, double dt,
                          double dw, double bridge_integral) noexcept {
    const double a = drift(x);
    const double sqrt_dt = std::sqrt(dt);
    const double base = x + a * dt;
    const double a_plus = drift(base + sigma * sqrt_dt);
    const double a_minus = drift(base - sigma * sqrt_dt);
    return base + sigma * dw + 0.25 * (a_plus - 2.0 * a + a_minus) * dt +
           (a_plus - a_minus) / (2.0 * sqrt_dt) * bridge_integral;
}

struct Trajectory {
    int grid_exponent = 0;
    SchemeKind scheme = SchemeKind::Euler;
    std::vector<double> values;              // x_0 .. x_n
    std::vector<std::size_t> drift_changes;  // k with region(x_{k+1}) != region(x_k)
};

/// Drift-change bookkeeping without storing the path.
struct PathSummary {
    double terminal = 0.0;
    std::size_t drift_changes = 0;
    std::optional<std::size_t> first_change; // step index k of the first change
};

/// Runs the scheme over the given increments. bridge_integrals is only read
/// by Platen and must then have the same length as increments.
PathSummary simulate_summary(const SdeSpec& spec, SchemeKind scheme, double dt,
                             std::span<const double> increments,
                             std::span<const double> bridge_integrals = {});

void simulate_into(const SdeSpec& spec, SchemeKind scheme, double dt,
                   std::span<const double> increments, std::span<const double> bridge_integrals,
                   Trajectory& out);

/// Scheme on the 2^coarse_exponent grid driven by the coarsened path.
Trajectory simulate(const SdeSpec& spec, SchemeKind scheme, const NoisePath& path,
                    int coarse_exponent);

/// Recomputes drift-change indices from a value sequence.
std::vector<std::size_t> drift_change_indices(const PiecewiseDrift& drift,
                                              std::span<const double> values);

/// Solves y - a(y) dt = z for the inward two-region drift about 0
/// (values {alpha1 > 0, alpha2 < 0}, breakpoint 0). Returns nullopt when no
/// solution exists, which is the case for z in [-alpha1 dt, -alpha2 dt).
std::optional<double> implicit_solvable(const PiecewiseDrift& drift, double dt, double z);

} // namespace discdrift
