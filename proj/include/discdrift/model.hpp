#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace discdrift {

/// Piecewise-constant drift a(x) = values[j] on region j.
///
/// Region j (0-based) is [breakpoints[j-1], breakpoints[j]) with the outer
/// regions unbounded. A breakpoint belongs to the region on its right, so
/// a(x) is right-continuous.
class PiecewiseDrift {
public:
    PiecewiseDrift() : values_{0.0} {}
    PiecewiseDrift(std::vector<double> breakpoints, std::vector<double> values);

    static PiecewiseDrift constant(double value) { return PiecewiseDrift({}, {value}); }

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t region_count() const noexcept { return values_.size(); }

    std::size_t region_index(double x) const noexcept {
        std::size_t j = 0;
        while (j < breakpoints_.size() && x >= breakpoints_[j]) ++j;
        return j;
    }

    double evaluate(double x) const noexcept { return values_[region_index(x)]; }
    double operator()(double x) const noexcept { return evaluate(x); }

    PiecewiseDrift negated() const;
    PiecewiseDrift scaled(double factor) const;

    friend bool operator==(const PiecewiseDrift&, const PiecewiseDrift&) = default;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

struct DriftDirection {
    enum class Kind { Inward, Outward, Neither };

    Kind kind = Kind::Neither;
    double point = 0.0; // discontinuity x*; meaningless for Neither

    friend bool operator==(const DriftDirection&, const DriftDirection&) = default;
};

std::string_view to_string(DriftDirection::Kind kind) noexcept;

/// Inward(x*) when every value left of x* is positive and every value right
/// of it negative; Outward(x*) for the mirror pattern; Neither for zero
/// values, no sign change, or more than one sign change.
DriftDirection classify(const PiecewiseDrift& drift);

/// dX = a(X) dt + sigma dW, X(0) = initial_value, on [0, horizon].
struct SdeSpec {
    PiecewiseDrift drift;
    double sigma = 1.0;
    double initial_value = 0.0;
    double horizon = 1.0;

    void validate() const;
};

/// Names of the built-in test equations.
std::span<const std::string_view> catalog_names() noexcept;

/// Built-in test equation with sigma = 1 and horizon = 1.
SdeSpec catalog(std::string_view name, double initial_value);

} // namespace discdrift
