#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace discdrift {

/// Brownian driving input on the finest dyadic grid of [0, horizon].
///
/// increments[k]       = W((k+1)h) - W(kh)
/// bridge_integrals[k] = integral over [kh, (k+1)h] of (W(u) - W(kh)) du
/// with h = horizon / 2^fine_exponent. bridge_integrals is empty when the
/// path was generated without them (see NoiseOptions).
struct NoisePath {
    int fine_exponent = 0;
    double horizon = 0.0;
    std::vector<double> increments;
    std::vector<double> bridge_integrals;
    std::uint64_t seed = 0;
    std::uint64_t replication_index = 0;

    std::size_t steps() const noexcept { return increments.size(); }
    double step() const noexcept { return horizon / static_cast<double>(increments.size()); }
    bool has_bridge_integrals() const noexcept { return !bridge_integrals.empty(); }
};

struct NoiseOptions {
    // The increments come from their own stream, so turning this off does not
    // change them.
    bool bridge_integrals = true;
};

/// Deterministic in (seed, replication_index): increment = sqrt(h) Z1,
/// bridge = (h/2) increment + h^{3/2}/sqrt(12) Z2, Z1 and Z2 independent.
NoisePath generate(std::uint64_t seed, std::uint64_t replication_index, int fine_exponent,
                   double horizon, NoiseOptions options = {});

/// Noise aggregated to a coarser dyadic grid of the same horizon.
struct CoarseNoise {
    int exponent = 0;
    double step = 0.0;
    std::vector<double> increments;
    std::vector<double> bridge_integrals;
};

/// Aggregates fine increments (summed left to right) and, when present, fine
/// bridge integrals into steps of 2^(fine - coarse_exponent) fine steps.
CoarseNoise coarsen(const NoisePath& path, int coarse_exponent);

/// Same as coarsen() but writes into caller buffers; reuses their storage.
void coarsen_into(const NoisePath& path, int coarse_exponent, CoarseNoise& out);

/// Trapezoid-rule estimate of the coarse bridge integrals from the fine-grid
/// values of W alone, ignoring the sampled fine bridge integrals.
std::vector<double> trapezoid_bridge_integrals(std::span<const double> fine_increments,
                                               double fine_step, int ratio_exponent);

} // namespace discdrift
