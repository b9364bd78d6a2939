#include "discdrift/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "discdrift/errors.hpp"

namespace discdrift {

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

InvariantDensity::InvariantDensity(double alpha1, double alpha2)
    : alpha1_(alpha1), alpha2_(alpha2) {
    if (!(alpha1 > 0.0 && alpha2 < 0.0) || !std::isfinite(alpha1) || !std::isfinite(alpha2)) {
        throw ParameterError("invariant density needs alpha1 > 0 > alpha2");
    }
    const double right = -alpha2;
    c_ = 2.0 * alpha1 * right / (alpha1 + right);
}

double InvariantDensity::pdf(double x) const noexcept {
    return x >= 0.0 ? c_ * std::exp(2.0 * alpha2_ * x) : c_ * std::exp(2.0 * alpha1_ * x);
}

double InvariantDensity::cdf(double y) const noexcept {
    const double left_mass = c_ / (2.0 * alpha1_);
    if (y < 0.0) return left_mass * std::exp(2.0 * alpha1_ * y);
    if (std::isinf(y)) return 1.0;
    // -expm1 keeps precision for small y.
    return left_mass + c_ / (-2.0 * alpha2_) * -std::expm1(2.0 * alpha2_ * y);
}

double InvariantDensity::mean() const noexcept {
    const double a = 2.0 * alpha1_;
    const double b = -2.0 * alpha2_;
    return c_ * (1.0 / (b * b) - 1.0 / (a * a));
}

double InvariantDensity::second_moment() const noexcept {
    const double a = 2.0 * alpha1_;
    const double b = -2.0 * alpha2_;
    return c_ * 2.0 * (1.0 / (a * a * a) + 1.0 / (b * b * b));
}

double invariant_pdf(const InvariantDensity& density, double x) noexcept {
    return density.pdf(x);
}

double invariant_cdf(const InvariantDensity& density, double y) noexcept {
    return density.cdf(y);
}

double folded_mgf(double mu, double nu, double tau) {
    if (!(nu > 0.0)) throw ParameterError("folded_mgf needs nu > 0");
    const double quad = 0.5 * nu * nu * tau * tau;
    // 1 - Phi(t) = Phi(-t)
    return std::exp(quad + mu * tau) * normal_cdf(mu / nu + nu * tau) +
           std::exp(quad - mu * tau) * normal_cdf(-mu / nu + nu * tau);
}

LyapunovBound lyapunov_bound(double alpha1, double alpha2, double dt, double tau) {
    if (!(alpha1 > 0.0 && alpha2 < 0.0)) {
        throw ParameterError("Lyapunov bound needs alpha1 > 0 > alpha2");
    }
    if (!(dt > 0.0)) throw ParameterError("step size must be positive");
    const double lo = std::min(alpha1, -alpha2);
    const double hi = std::max(alpha1, -alpha2);
    if (!(tau > 0.0 && tau < 2.0 * lo)) {
        throw ParameterError("Lyapunov bound needs 0 < tau < 2 min(|alpha1|, |alpha2|)");
    }
    return {std::exp(dt * tau * (0.5 * tau + hi)), std::exp(dt * tau * (0.5 * tau - lo))};
}

double crossing_probability(double xi, double theta, double dt) {
    if (!(xi > 0.0)) throw ParameterError("crossing probability needs xi > 0");
    if (!(theta >= 0.0)) throw ParameterError("crossing probability needs theta >= 0");
    if (!(dt > 0.0)) throw ParameterError("crossing probability needs dt > 0");
    return std::exp(-2.0 * xi * theta / dt);
}

double no_crossing_probability(double alpha1, double alpha2, double xi) {
    if (!(alpha1 < 0.0 && alpha2 > 0.0)) {
        throw ParameterError("no-crossing probability needs alpha1 < 0 < alpha2");
    }
    if (xi == 0.0 || !std::isfinite(xi)) {
        throw ParameterError("no-crossing probability needs a finite xi != 0");
    }
    const double xi_plus = std::max(xi, 0.0);
    const double xi_minus = std::max(-xi, 0.0);
    return -std::expm1(2.0 * alpha1 * xi_minus - 2.0 * alpha2 * xi_plus);
}

} // namespace discdrift
