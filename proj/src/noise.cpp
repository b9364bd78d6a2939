#include "discdrift/noise.hpp"

#include <cmath>
#include <string>

#include "discdrift/errors.hpp"
#include "discdrift/rng.hpp"

namespace discdrift {

namespace {

constexpr std::uint64_t kIncrementStream = 0;
constexpr std::uint64_t kBridgeStream = 1;
constexpr int kMaxExponent = 30;

void check_exponent(int exponent, const char* what) {
    if (exponent < 0 || exponent > kMaxExponent) {
        throw ParameterError(std::string(what) + " must lie in [0, 30], got " +
                             std::to_string(exponent));
    }
}

} // namespace

NoisePath generate(std::uint64_t seed, std::uint64_t replication_index, int fine_exponent,
                   double horizon, NoiseOptions options) {
    if (fine_exponent < 1 || fine_exponent > kMaxExponent) {
        throw ParameterError("fine_exponent must lie in [1, 30], got " +
                             std::to_string(fine_exponent));
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ParameterError("horizon must be positive and finite");
    }

    NoisePath path;
    path.fine_exponent = fine_exponent;
    path.horizon = horizon;
    path.seed = seed;
    path.replication_index = replication_index;

    const std::size_t n = std::size_t{1} << fine_exponent;
    const double h = horizon / static_cast<double>(n);
    const double sqrt_h = std::sqrt(h);

    StandardNormal normal;
    Xoshiro256pp inc_rng(seed, replication_index, kIncrementStream);
    path.increments.resize(n);
    for (auto& dw : path.increments) dw = sqrt_h * normal(inc_rng);

    if (options.bridge_integrals) {
        // Conditional on the increment, the bridge integral is Gaussian with
        // mean h/2 * dW and variance h^3/12.
        const double half_h = 0.5 * h;
        const double cond_sd = h * sqrt_h / std::sqrt(12.0);
        Xoshiro256pp bridge_rng(seed, replication_index, kBridgeStream);
        path.bridge_integrals.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            path.bridge_integrals[k] = half_h * path.increments[k] + cond_sd * normal(bridge_rng);
        }
    }
    return path;
}

void coarsen_into(const NoisePath& path, int coarse_exponent, CoarseNoise& out) {
    check_exponent(coarse_exponent, "coarse_exponent");
    if (coarse_exponent > path.fine_exponent) {
        throw ParameterError("coarse_exponent " + std::to_string(coarse_exponent) +
                             " exceeds fine_exponent " + std::to_string(path.fine_exponent));
    }
    const std::size_t ratio = std::size_t{1} << (path.fine_exponent - coarse_exponent);
    const std::size_t n = std::size_t{1} << coarse_exponent;
    const double h = path.step();

    out.exponent = coarse_exponent;
    out.step = path.horizon / static_cast<double>(n);
    out.increments.resize(n);
    if (path.has_bridge_integrals()) {
        out.bridge_integrals.resize(n);
    } else {
        out.bridge_integrals.clear();
    }

    if (ratio == 1) {
        out.increments.assign(path.increments.begin(), path.increments.end());
        out.bridge_integrals.assign(path.bridge_integrals.begin(), path.bridge_integrals.end());
        return;
    }

    const double* inc = path.increments.data();
    for (std::size_t k = 0; k < n; ++k) {
        const double* block = inc + k * ratio;
        double sum = 0.0;
        for (std::size_t j = 0; j < ratio; ++j) sum += block[j];
        out.increments[k] = sum;
    }

    if (path.has_bridge_integrals()) {
        // Integral over the coarse step of W(u) - W(start): on fine step j the
        // integrand is (partial sum before j) + (W(u) - W(fine start)).
        const double* bridge = path.bridge_integrals.data();
        for (std::size_t k = 0; k < n; ++k) {
            const double* block = inc + k * ratio;
            const double* fine_bridge = bridge + k * ratio;
            double partial = 0.0;
            double integral = 0.0;
            for (std::size_t j = 0; j < ratio; ++j) {
                integral += h * partial + fine_bridge[j];
                partial += block[j];
            }
            out.bridge_integrals[k] = integral;
        }
    }
}

CoarseNoise coarsen(const NoisePath& path, int coarse_exponent) {
    CoarseNoise out;
    coarsen_into(path, coarse_exponent, out);
    return out;
}

std::vector<double> trapezoid_bridge_integrals(std::span<const double> fine_increments,
                                               double fine_step, int ratio_exponent) {
    check_exponent(ratio_exponent, "ratio_exponent");
    const std::size_t ratio = std::size_t{1} << ratio_exponent;
    if (fine_increments.size() % ratio != 0) {
        throw ParameterError("fine grid length is not a multiple of the coarsening ratio");
    }
    std::vector<double> out(fine_increments.size() / ratio);
    for (std::size_t k = 0; k < out.size(); ++k) {
        double w = 0.0;
        double integral = 0.0;
        for (std::size_t j = 0; j < ratio; ++j) {
            const double next = w + fine_increments[k * ratio + j];
            integral += 0.5 * fine_step * (w + next);
            w = next;
        }
        out[k] = integral;
    }
    return out;
}

} // namespace discdrift
