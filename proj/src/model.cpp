#include "discdrift/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "discdrift/errors.hpp"

namespace discdrift {

PiecewiseDrift::PiecewiseDrift(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.size() != breakpoints_.size() + 1) {
        throw ParameterError("drift needs exactly one more value than breakpoints (got " +
                             std::to_string(values_.size()) + " values, " +
                             std::to_string(breakpoints_.size()) + " breakpoints)");
    }
    for (double b : breakpoints_) {
        if (!std::isfinite(b)) throw ParameterError("drift breakpoints must be finite");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ParameterError("drift values must be finite");
    }
    if (std::adjacent_find(breakpoints_.begin(), breakpoints_.end(),
                           [](double lhs, double rhs) { return !(lhs < rhs); }) !=
        breakpoints_.end()) {
        throw ParameterError("drift breakpoints must be strictly increasing");
    }
}

PiecewiseDrift PiecewiseDrift::negated() const { return scaled(-1.0); }

PiecewiseDrift PiecewiseDrift::scaled(double factor) const {
    std::vector<double> values(values_);
    for (auto& v : values) v *= factor;
    return PiecewiseDrift(breakpoints_, std::move(values));
}

std::string_view to_string(DriftDirection::Kind kind) noexcept {
    switch (kind) {
    case DriftDirection::Kind::Inward:
        return "inward";
    case DriftDirection::Kind::Outward:
        return "outward";
    case DriftDirection::Kind::Neither:
        break;
    }
    return "neither";
}

DriftDirection classify(const PiecewiseDrift& drift) {
    const auto values = drift.values();
    if (std::any_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) {
        return {};
    }
    std::size_t change = 0;
    std::size_t changes = 0;
    for (std::size_t j = 1; j < values.size(); ++j) {
        if ((values[j - 1] > 0.0) != (values[j] > 0.0)) {
            change = j;
            ++changes;
        }
    }
    if (changes != 1) return {};

    const double point = drift.breakpoints()[change - 1];
    if (values.front() > 0.0) return {DriftDirection::Kind::Inward, point};
    return {DriftDirection::Kind::Outward, point};
}

void SdeSpec::validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ParameterError("sigma must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ParameterError("horizon must be positive");
    }
    if (!std::isfinite(initial_value)) throw ParameterError("initial value must be finite");
}

namespace {

struct CatalogEntry {
    std::string_view name;
    double breakpoint;
    double left;
    double right;
};

// sign(x) uses the indicator convention: sign(0) = +1.
constexpr std::array<CatalogEntry, 8> kCatalog{{
    {"sign", 0.0, -1.0, 1.0},
    {"minusSign", 0.0, 1.0, -1.0},
    {"10sign", 0.0, -10.0, 10.0},
    {"minus10sign", 0.0, 10.0, -10.0},
    {"elementary_minus34", 1.4, -3.0, 4.0},
    {"elementary4minus3", 1.4, 4.0, -3.0},
    {"elementary_minus0.6_1", 1.4, -0.6, 1.0},
    {"elementary1minus0.6", 1.4, 1.0, -0.6},
}};

constexpr std::array<std::string_view, kCatalog.size()> kCatalogNames = [] {
    std::array<std::string_view, kCatalog.size()> names{};
    for (std::size_t i = 0; i < kCatalog.size(); ++i) names[i] = kCatalog[i].name;
    return names;
}();

} // namespace

std::span<const std::string_view> catalog_names() noexcept { return kCatalogNames; }

SdeSpec catalog(std::string_view name, double initial_value) {
    for (const auto& entry : kCatalog) {
        if (entry.name == name) {
            SdeSpec spec;
            spec.drift = PiecewiseDrift({entry.breakpoint}, {entry.left, entry.right});
            spec.initial_value = initial_value;
            return spec;
        }
    }
    throw LookupError("unknown catalog entry '" + std::string(name) + "'");
}

} // namespace discdrift
