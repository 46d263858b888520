#include <gtest/gtest.h>

#include <random>

#include "crosseai/map_core.hpp"
#include "oracles.hpp"

using namespace crosseai;

namespace {

SaliencyMap map2x2(double a, double b, double c, double d) { return SaliencyMap(2, 2, {a, b, c, d}); }

}  // namespace

TEST(ScaleTo255, AlreadySpanningMapIsUnchanged) {
    const auto m = map2x2(0, 255, 0, 255);
    EXPECT_EQ(scale_to_255(m), m);
}

TEST(ScaleTo255, ConstantMapBecomesZero) {
    EXPECT_EQ(scale_to_255(map2x2(7, 7, 7, 7)), map2x2(0, 0, 0, 0));
}

TEST(ScaleTo255, LinearRescale) {
    const auto s = scale_to_255(map2x2(0, 5, 10, 20));
    EXPECT_DOUBLE_EQ(s.at(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(s.at(1, 0), 63.75);
    EXPECT_DOUBLE_EQ(s.at(0, 1), 127.5);
    EXPECT_DOUBLE_EQ(s.at(1, 1), 255.0);
}

TEST(ScaleTo255, SinglePixel) {
    EXPECT_EQ(scale_to_255(SaliencyMap(1, 1, 42.0)).at(0, 0), 0.0);
}

TEST(ScaleTo255, RangeAndIdempotence) {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 100; ++rep) {
        const auto m = oracle::random_map(rng, 1 + rep % 13, 1 + rep % 7, -50.0, 900.0);
        const auto s = scale_to_255(m);
        for (double v : s.values()) {
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 255.0);
        }
        const auto twice = scale_to_255(s);
        for (std::size_t i = 0; i < s.size(); ++i) ASSERT_NEAR(twice.values()[i], s.values()[i], 1e-9);
    }
}

TEST(ScaleTo255, AffineInvariance) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> a_dist(0.01, 50.0);
    std::uniform_real_distribution<double> b_dist(-1000.0, 1000.0);
    for (int rep = 0; rep < 100; ++rep) {
        const auto m = oracle::random_map(rng, 9, 5);
        const double a = a_dist(rng);
        const double b = b_dist(rng);
        SaliencyMap moved = m;
        for (auto& v : moved.values()) v = a * v + b;
        const auto s1 = scale_to_255(m);
        const auto s2 = scale_to_255(moved);
        for (std::size_t i = 0; i < s1.size(); ++i) ASSERT_NEAR(s1.values()[i], s2.values()[i], 1e-9);
    }
}

TEST(Fuse, EndpointsReturnInputsExactly) {
    std::mt19937_64 rng(3);
    const auto h = oracle::random_map(rng, 7, 6);
    const auto g = oracle::random_map(rng, 7, 6);
    EXPECT_EQ(fuse(h, g, 1.0), h);
    EXPECT_EQ(fuse(h, g, 0.0), g);
}

TEST(Fuse, DefaultWeightScalarExample) {
    const auto out = fuse(SaliencyMap(1, 1, 100.0), SaliencyMap(1, 1, 200.0), 0.30);
    EXPECT_NEAR(out.at(0, 0), 170.0, 1e-9);
}

TEST(Fuse, ConvexityBound) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> td(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const auto h = oracle::random_map(rng, 11, 3);
        const auto g = oracle::random_map(rng, 11, 3);
        const auto f = fuse(h, g, td(rng));
        for (std::size_t i = 0; i < f.size(); ++i) {
            ASSERT_GE(f.values()[i], std::min(h.values()[i], g.values()[i]));
            ASSERT_LE(f.values()[i], std::max(h.values()[i], g.values()[i]));
        }
    }
}

TEST(Fuse, RejectsMismatchedDims) {
    EXPECT_THROW(fuse(SaliencyMap(3, 2), SaliencyMap(2, 3), 0.3), DimensionMismatch);
}

TEST(Fuse, RejectsWeightOutsideUnitInterval) {
    EXPECT_THROW(fuse(SaliencyMap(2, 2), SaliencyMap(2, 2), -0.01), ParameterError);
    EXPECT_THROW(fuse(SaliencyMap(2, 2), SaliencyMap(2, 2), 1.5), ParameterError);
}

TEST(ThresholdMask, AllZeroMapGivesEmptyMask) {
    const auto m = threshold_mask(SaliencyMap(4, 3, 0.0), 0.35);
    for (auto b : m.values()) EXPECT_EQ(b, 0);
}

TEST(ThresholdMask, StrictInequalityAtCutoff) {
    // max 200, frac 0.35 -> cutoff 70
    const auto m = threshold_mask(SaliencyMap(3, 1, {70.0, 71.0, 200.0}), 0.35);
    EXPECT_EQ(m.at(0, 0), 0);
    EXPECT_EQ(m.at(1, 0), 1);
    EXPECT_EQ(m.at(2, 0), 1);
}

TEST(ThresholdMask, ZeroFractionSelectsPositivePixels) {
    const auto m = threshold_mask(SaliencyMap(4, 1, {0.0, 0.5, 0.0, 3.0}), 0.0);
    EXPECT_EQ(m, BinaryMask(4, 1, {0, 1, 0, 1}));
}

TEST(ThresholdMask, FullFractionSelectsNothing) {
    const auto m = threshold_mask(SaliencyMap(3, 1, {1.0, 2.0, 3.0}), 1.0);
    EXPECT_EQ(m, BinaryMask(3, 1, {0, 0, 0}));
}

TEST(ThresholdMask, MonotoneInFraction) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> fd(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const auto m = oracle::random_map(rng, 8, 8);
        double f1 = fd(rng), f2 = fd(rng);
        if (f1 > f2) std::swap(f1, f2);
        const auto loose = threshold_mask(m, f1);
        const auto tight = threshold_mask(m, f2);
        for (std::size_t i = 0; i < m.size(); ++i) ASSERT_LE(tight.values()[i], loose.values()[i]);
    }
}

TEST(ThresholdMask, PipelineScaleInvariance) {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 100; ++rep) {
        const auto h = scale_to_255(oracle::random_map(rng, 10, 10));
        const auto g = scale_to_255(oracle::random_map(rng, 10, 10));
        for (double a : {0.25, 2.0, 8.0}) {
            SaliencyMap ha = h, ga = g;
            for (auto& v : ha.values()) v *= a;
            for (auto& v : ga.values()) v *= a;
            ASSERT_EQ(threshold_mask(fuse(h, g, 0.3), 0.35), threshold_mask(fuse(ha, ga, 0.3), 0.35));
        }
    }
}

TEST(ApplyMask, ZeroesOutsideMask) {
    const auto out = apply_mask(SaliencyMap(3, 1, {5.0, 6.0, 7.0}), BinaryMask(3, 1, {1, 0, 1}));
    EXPECT_EQ(out, SaliencyMap(3, 1, {5.0, 0.0, 7.0}));
}

TEST(FusionParams, DefaultsAndValidation) {
    FusionParams p;
    EXPECT_DOUBLE_EQ(p.t, 0.30);
    EXPECT_DOUBLE_EQ(p.threshold_frac, 0.35);
    EXPECT_EQ(p.top_k, 5);
    EXPECT_TRUE(p.expand);
    EXPECT_NO_THROW(p.validate());
    p.top_k = 0;
    EXPECT_THROW(p.validate(), ParameterError);
}

TEST(Grid, RejectsBadShapes) {
    EXPECT_THROW(SaliencyMap(0, 3), ParameterError);
    EXPECT_THROW(SaliencyMap(2, 2, std::vector<double>(3)), DimensionMismatch);
}
