#include <cmath>

#include <gtest/gtest.h>

#include "fracqm/curve_geometry.hpp"
#include "fracqm/errors.hpp"
#include "fracqm/fractal_measure.hpp"
#include "oracles.hpp"

using namespace fracqm;

TEST(KochCurve, LevelZeroIsUnitSegment) {
    const auto g = build_koch(0);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g.point(0), Vec3(0, 0, 0));
    EXPECT_EQ(g.point(1), Vec3(1, 0, 0));
}

TEST(KochCurve, LevelOneMiddleVertex) {
    const auto g = build_koch(1);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_NEAR(g.point(2).x(), 0.5, 1e-15);
    EXPECT_NEAR(g.point(2).y(), std::sqrt(3.0) / 6.0, 1e-15);
    EXPECT_EQ(g.point(2).z(), 0.0);
}

TEST(KochCurve, LevelThreeChordSum) {
    const auto g = build_koch(3);
    EXPECT_EQ(g.size(), 65u);
    EXPECT_NEAR(g.chord_length(), std::pow(4.0 / 3.0, 3), 1e-12);
}

TEST(KochCurve, MatchesTurtleConstruction) {
    for (int level = 0; level <= 5; ++level) {
        const auto g = build_koch(level);
        const auto ref = oracle::koch_turtle(level);
        ASSERT_EQ(g.size(), ref.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
            EXPECT_LT((g.point(i) - ref[i]).norm(), 1e-12) << "level " << level << " node " << i;
        }
    }
}

TEST(KochCurve, ParametersUniformInAddress) {
    const auto g = build_koch(4);
    ASSERT_EQ(g.size(), 257u);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_DOUBLE_EQ(g.param(i), static_cast<double>(i) / 256.0);
    }
}

TEST(KochCurve, SelfSimilarChordGrowth) {
    for (int level = 0; level < 8; ++level) {
        const double a = build_koch(level).chord_length();
        const double b = build_koch(level + 1).chord_length();
        EXPECT_NEAR(b / (a * 4.0 / 3.0), 1.0, 1e-12);
    }
}

TEST(KochCurve, LevelCap) {
    EXPECT_THROW(build_koch(11), ResourceLimitError);
    EXPECT_NO_THROW(build_koch(3, 3));
    EXPECT_THROW(build_koch(4, 3), ResourceLimitError);
    EXPECT_THROW(build_koch(-1), DomainError);
}

TEST(KochCurve, Deterministic) {
    const auto a = build_koch(6);
    const auto b = build_koch(6);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.param(i), b.param(i));
        EXPECT_EQ(a.point(i), b.point(i));
    }
}

TEST(Line, NodesAndChordSum) {
    const auto g = build_line({0, 0, 0}, {1, 0, 0}, 10);
    EXPECT_EQ(g.size(), 11u);
    EXPECT_NEAR(g.chord_length(), 1.0, 1e-15);
    EXPECT_NEAR(build_line({0, 0, 0}, {0, 2, 0}, 4).chord_length(), 2.0, 1e-15);
}

TEST(Line, DegenerateEndpointsRejected) {
    const Vec3 p(0.3, -1.0, 2.0);
    EXPECT_THROW(build_line(p, p, 4), DegenerateCurveError);
    EXPECT_THROW(build_line({0, 0, 0}, {1, 0, 0}, 0), DomainError);
}

TEST(Generator, RejectsBadScaleAndDisconnectedMaps) {
    GeneratorSpec g = GeneratorSpec::line_bisection();
    g.maps[0].scale = 1.0;
    EXPECT_THROW(g.validate(), DomainError);

    GeneratorSpec gap = GeneratorSpec::line_bisection();
    gap.maps[1].translation = Vec3(0.6, 0, 0);
    EXPECT_THROW(gap.validate(), DegenerateCurveError);
}

TEST(Generator, NodeCountIsPowerPlusOne) {
    for (int level = 0; level <= 6; ++level) {
        EXPECT_EQ(build_from_generator(GeneratorSpec::line_bisection(), level).size(),
                  (1u << level) + 1u);
    }
}

TEST(CantorDust, GapsCarryNoLength) {
    const auto g = build_cantor_dust(3);
    EXPECT_EQ(g.size(), 16u);
    EXPECT_TRUE(g.has_gaps());
    EXPECT_NEAR(g.chord_length(), std::pow(2.0 / 3.0, 3), 1e-14);
}

TEST(CantorTime, IntervalsPerLevel) {
    const auto t0 = build_cantor_time(1.0, 0);
    ASSERT_EQ(t0.kept_intervals().size(), 1u);
    EXPECT_EQ(t0.kept_intervals()[0].lo, 0.0);
    EXPECT_EQ(t0.kept_intervals()[0].hi, 1.0);

    const auto t2 = build_cantor_time(2.5, 2);
    ASSERT_EQ(t2.kept_intervals().size(), 4u);
    for (const auto& iv : t2.kept_intervals()) EXPECT_NEAR(iv.length(), 2.5 / 9.0, 1e-15);
}

TEST(CantorTime, KeptLengthAndOrdering) {
    for (int level = 0; level <= 10; ++level) {
        const auto t = build_cantor_time(3.0, level);
        EXPECT_NEAR(t.kept_length(), 3.0 * std::pow(2.0 / 3.0, level), 1e-12);
        const auto& iv = t.kept_intervals();
        for (std::size_t k = 0; k + 1 < iv.size(); ++k) EXPECT_LT(iv[k].hi, iv[k + 1].lo);
        EXPECT_GE(iv.front().lo, 0.0);
        EXPECT_LE(iv.back().hi, 3.0);
    }
}

TEST(CantorTime, StaircaseTotalIsLevelIndependent) {
    const double a = oracle::cantor_dimension();
    const double expected = 1.0 / std::tgamma(1.0 + a);
    for (int level : {0, 3, 8}) {
        const auto t = build_cantor_time(1.0, level);
        EXPECT_NEAR(t.staircase_time(1.0), expected, 1e-12) << "level " << level;
    }
}

TEST(CantorTime, IndicatorAndPlateaus) {
    const auto t = build_cantor_time(1.0, 2);
    EXPECT_TRUE(t.contains(0.0));
    EXPECT_TRUE(t.contains(0.1));
    EXPECT_FALSE(t.contains(0.5));
    EXPECT_FALSE(t.contains(0.15));
    EXPECT_TRUE(t.contains(1.0));
    // staircase time does not advance across the middle gap
    EXPECT_DOUBLE_EQ(t.staircase_time(0.4), t.staircase_time(0.6));
    EXPECT_LT(t.staircase_time(0.1), t.staircase_time(0.2));
}

TEST(FullTime, StaircaseIsIdentity) {
    const auto t = build_full_time(2.0);
    EXPECT_NEAR(t.staircase_time(0.75), 0.75, 1e-15);
    EXPECT_TRUE(t.contains(1.3));
}
