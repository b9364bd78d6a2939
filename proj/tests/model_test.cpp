#include <gtest/gtest.h>

#include <random>

#include "discdrift/errors.hpp"
#include "discdrift/model.hpp"

using namespace discdrift;
using Kind = DriftDirection::Kind;

namespace {

const PiecewiseDrift kSign({0.0}, {-1.0, 1.0});
const PiecewiseDrift kElementaryMinus34({1.4}, {-3.0, 4.0});

PiecewiseDrift random_drift(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> regions(1, 5);
    std::uniform_real_distribution<double> value(-5.0, 5.0);
    std::uniform_real_distribution<double> gap(0.1, 2.0);
    const int s = regions(rng);
    std::vector<double> breakpoints;
    double b = value(rng);
    for (int j = 1; j < s; ++j) {
        breakpoints.push_back(b);
        b += gap(rng);
    }
    std::vector<double> values(static_cast<std::size_t>(s));
    for (auto& v : values) v = value(rng);
    return PiecewiseDrift(breakpoints, values);
}

} // namespace

TEST(Model, EvaluateFollowsIndicatorConvention) {
    EXPECT_EQ(kSign.evaluate(-0.5), -1.0);
    EXPECT_EQ(kSign.evaluate(0.0), 1.0);
    EXPECT_EQ(kElementaryMinus34.evaluate(1.4), 4.0);
    EXPECT_EQ(kElementaryMinus34.evaluate(1.3999999), -3.0);
    EXPECT_EQ(kElementaryMinus34.evaluate(-100.0), -3.0);
    EXPECT_EQ(kElementaryMinus34.evaluate(100.0), 4.0);
}

TEST(Model, RegionIndexIsZeroBased) {
    EXPECT_EQ(kSign.region_index(0.0), 1u);
    EXPECT_EQ(kSign.region_index(-1e-12), 0u);
    const auto flat = PiecewiseDrift::constant(2.5);
    EXPECT_EQ(flat.region_index(-1e300), 0u);
    EXPECT_EQ(flat.region_index(1e300), 0u);
    EXPECT_EQ(flat.evaluate(3.0), 2.5);
}

TEST(Model, RejectsMalformedDrifts) {
    EXPECT_THROW(PiecewiseDrift({0.0}, {1.0}), ParameterError);
    EXPECT_THROW(PiecewiseDrift({1.0, 1.0}, {1.0, 2.0, 3.0}), ParameterError);
    EXPECT_THROW(PiecewiseDrift({2.0, 1.0}, {1.0, 2.0, 3.0}), ParameterError);
    EXPECT_THROW(PiecewiseDrift({}, {}), ParameterError);
}

TEST(Model, ClassifyCatalogEntries) {
    EXPECT_EQ(classify(catalog("minusSign", 0).drift), (DriftDirection{Kind::Inward, 0.0}));
    EXPECT_EQ(classify(catalog("sign", 0).drift), (DriftDirection{Kind::Outward, 0.0}));
    EXPECT_EQ(classify(kElementaryMinus34), (DriftDirection{Kind::Outward, 1.4}));
    EXPECT_EQ(classify(catalog("elementary4minus3", 0).drift), (DriftDirection{Kind::Inward, 1.4}));
    EXPECT_EQ(classify(PiecewiseDrift::constant(1.0)).kind, Kind::Neither);
}

TEST(Model, ClassifyEdgeCases) {
    EXPECT_EQ(classify(PiecewiseDrift({0.0}, {0.0, -1.0})).kind, Kind::Neither);
    EXPECT_EQ(classify(PiecewiseDrift({0.0, 1.0}, {1.0, -1.0, 1.0})).kind, Kind::Neither);
    EXPECT_EQ(classify(PiecewiseDrift({0.0, 1.0}, {2.0, 1.0, -1.0})),
              (DriftDirection{Kind::Inward, 1.0}));
    EXPECT_EQ(classify(PiecewiseDrift({0.0}, {1.0, 1.0})).kind, Kind::Neither);
}

TEST(Model, CatalogEntries) {
    const auto ten = catalog("10sign", 0.3);
    EXPECT_EQ(ten.drift, PiecewiseDrift({0.0}, {-10.0, 10.0}));
    EXPECT_EQ(ten.initial_value, 0.3);
    EXPECT_EQ(ten.sigma, 1.0);
    EXPECT_EQ(ten.horizon, 1.0);
    EXPECT_EQ(catalog("elementary1minus0.6", 0).drift, PiecewiseDrift({1.4}, {1.0, -0.6}));
    EXPECT_EQ(catalog("elementary_minus0.6_1", 0).drift, PiecewiseDrift({1.4}, {-0.6, 1.0}));
    EXPECT_EQ(catalog("minus10sign", 0).drift, PiecewiseDrift({0.0}, {10.0, -10.0}));
    EXPECT_EQ(catalog_names().size(), 8u);
    EXPECT_THROW(catalog("tanh", 0), LookupError);
}

TEST(Model, RightContinuityAtEveryBreakpoint) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 500; ++trial) {
        const PiecewiseDrift drift = random_drift(rng);
        for (double b : drift.breakpoints()) {
            EXPECT_EQ(drift.evaluate(b), drift.evaluate(std::nextafter(b, 1e300)));
            EXPECT_EQ(drift.region_index(b), drift.region_index(std::nextafter(b, 1e300)));
            EXPECT_NE(drift.region_index(b), drift.region_index(std::nextafter(b, -1e300)));
        }
    }
}

TEST(Model, NegationFlipsDirection) {
    std::mt19937_64 rng(2);
    int directional = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const PiecewiseDrift drift = random_drift(rng);
        const DriftDirection d = classify(drift);
        const DriftDirection n = classify(drift.negated());
        if (d.kind == Kind::Neither) {
            EXPECT_EQ(n.kind, Kind::Neither);
            continue;
        }
        ++directional;
        EXPECT_EQ(n.point, d.point);
        EXPECT_EQ(n.kind, d.kind == Kind::Inward ? Kind::Outward : Kind::Inward);
    }
    EXPECT_GT(directional, 100);
}

TEST(Model, SignDriftScaling) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (double alpha : {0.5, 2.0, 10.0}) {
        const PiecewiseDrift scaled = kSign.scaled(alpha);
        for (int i = 0; i < 1000; ++i) {
            const double y = u(rng);
            if (y == 0.0) continue;
            EXPECT_EQ(scaled.evaluate(alpha * y), alpha * kSign.evaluate(y));
        }
    }
}

TEST(Model, SpecValidation) {
    SdeSpec spec = catalog("sign", 0.0);
    EXPECT_NO_THROW(spec.validate());
    spec.sigma = 0.0;
    EXPECT_THROW(spec.validate(), ParameterError);
    spec.sigma = 1.0;
    spec.horizon = -1.0;
    EXPECT_THROW(spec.validate(), ParameterError);
}
