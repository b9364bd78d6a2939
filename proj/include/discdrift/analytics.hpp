#pragma once

namespace discdrift {

/// Standard normal CDF via erfc.
double normal_cdf(double x) noexcept;

/// Stationary law of dX = (alpha1 1{X<0} + alpha2 1{X>=0}) dt + dW with
/// alpha1 > 0 > alpha2: density c e^{2 alpha1 x} on x < 0 and c e^{2 alpha2 x}
/// on x >= 0, c = 2 alpha1 |alpha2| / (alpha1 + |alpha2|).
class InvariantDensity {
public:
    InvariantDensity(double alpha1, double alpha2);

    double alpha1() const noexcept { return alpha1_; }
    double alpha2() const noexcept { return alpha2_; }
    double normalizer() const noexcept { return c_; }

    double pdf(double x) const noexcept;
    double cdf(double y) const noexcept;
    double mean() const noexcept;
    double second_moment() const noexcept;

private:
    double alpha1_;
    double alpha2_;
    double c_;
};

double invariant_pdf(const InvariantDensity& density, double x) noexcept;
double invariant_cdf(const InvariantDensity& density, double y) noexcept;

/// E exp(tau |mu + nu Z|) for standard normal Z.
double folded_mgf(double mu, double nu, double tau);

/// Constants of the drift condition E[V(x_{k+1}) | x_k = x] <= C + gamma V(x)
/// for V(x) = e^{tau |x|} and the Euler chain of the inward drift above.
struct LyapunovBound {
    double constant; // C
    double gamma;    // contraction factor in (0, 1)
};

LyapunovBound lyapunov_bound(double alpha1, double alpha2, double dt, double tau);

/// P(min over [0, dt] of a Brownian bridge from xi to theta < 0), unit variance.
double crossing_probability(double xi, double theta, double dt);

/// P(X never reaches 0) for dX = (alpha1 1{X<0} + alpha2 1{X>=0}) dt + dW,
/// alpha1 < 0 < alpha2, started at xi != 0. Unit diffusion only; for other
/// sigma rescale space first.
double no_crossing_probability(double alpha1, double alpha2, double xi);

} // namespace discdrift
