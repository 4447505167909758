#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pillowfold/curve.hpp"
#include "pillowfold/errors.hpp"

using namespace pillowfold;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<CreaseCurve> sample_curves() {
    return {CreaseCurve::sine_arc(),
            CreaseCurve::rectangle(0.192489),
            CreaseCurve::rhombus(0.30547),
            CreaseCurve::arc(1.047),
            CreaseCurve::quad_bezier(0.2731, 0.2731, 0.2544),
            CreaseCurve::cubic_bezier(0.1125, 0.1125, 0.2526, 0.2526, 0.2543),
            CreaseCurve::polyline({0.1, 0.2, 0.25}),
            CreaseCurve::polyline({0.1, 0.25, 0.2}, false)};
}

}  // namespace

TEST(MakeCurve, SineArcIsSinOverPi) {
    const CreaseCurve c = make_curve("sine-arc", {});
    EXPECT_EQ(c.family(), Family::SineArc);
    for (double u : {0.1, 0.3, 0.77}) {
        EXPECT_NEAR(eval(c, u).f, std::sin(kPi * u) / kPi, 1e-15);
    }
}

TEST(MakeCurve, RhombusOutsideDomainThrows) {
    EXPECT_THROW(make_curve("rhombus", {{"h", 0.6}}), DomainError);
    EXPECT_THROW(make_curve("rectangle", {{"h", -0.1}}), DomainError);
    EXPECT_THROW(make_curve("arc", {{"theta", 2.0}}), DomainError);
    EXPECT_THROW(make_curve("quad-bezier", {{"a", 0.6}, {"b", 0.1}, {"h", 0.1}}), DomainError);
    EXPECT_THROW(make_curve("polyline", {{"heights", std::vector<double>{0.1, -0.2}}}), DomainError);
    EXPECT_THROW(make_curve("no-such-family", {}), DomainError);
}

TEST(MakeCurve, PolylineTwoSegments) {
    const CreaseCurve c =
        make_curve("polyline", {{"heights", std::vector<double>{0.1, 0.2}}, {"symmetric", true}});
    EXPECT_EQ(c.family(), Family::Polyline);
    EXPECT_TRUE(c.is_symmetric());
    const auto nodes = c.linear_nodes();
    ASSERT_EQ(nodes.size(), 5u);
    EXPECT_DOUBLE_EQ(nodes[2].u, 0.5);
    EXPECT_DOUBLE_EQ(nodes[2].f, 0.2);
}

TEST(MakeCurve, ParameterRoundTrip) {
    for (const auto& c : sample_curves()) {
        const CreaseCurve back = make_curve(c.family(), curve_parameters(c));
        EXPECT_TRUE(back == c) << family_name(c.family());
    }
}

TEST(Eval, SineArcMidpoint) {
    const CurveSample s = eval(CreaseCurve::sine_arc(), 0.5);
    EXPECT_NEAR(s.f, 0.3183099, 1e-7);
    EXPECT_NEAR(s.fprime, 0.0, 1e-15);
}

TEST(Eval, PolylineInterpolationAndMirror) {
    const CreaseCurve c = CreaseCurve::polyline({0.2, 0.3});
    const CurveSample a = eval(c, 0.125);
    EXPECT_NEAR(a.f, 0.1, 1e-15);
    EXPECT_NEAR(a.fprime, 0.8, 1e-12);
    const CurveSample b = eval(c, 0.75);
    EXPECT_NEAR(b.f, 0.2, 1e-15);
    EXPECT_NEAR(b.fprime, -0.4, 1e-12);
}

TEST(Eval, QuadBezierApex) {
    EXPECT_NEAR(eval(CreaseCurve::quad_bezier(0.2731, 0.2731, 0.2544), 0.5).f, 0.2544, 1e-12);
}

TEST(Eval, OutOfRangeThrows) {
    EXPECT_THROW(eval(CreaseCurve::sine_arc(), 1.5), DomainError);
    EXPECT_THROW(eval(CreaseCurve::sine_arc(), std::nan("")), DomainError);
}

TEST(SampleUniform, SineArcThreePoints) {
    const auto s = sample_uniform(CreaseCurve::sine_arc(), 2);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_DOUBLE_EQ(s[0].u, 0.0);
    EXPECT_DOUBLE_EQ(s[1].u, 0.5);
    EXPECT_DOUBLE_EQ(s[2].u, 1.0);
    EXPECT_NEAR(s[0].f, 0.0, 1e-15);
    EXPECT_NEAR(s[1].f, 1.0 / kPi, 1e-15);
    EXPECT_NEAR(s[2].f, 0.0, 1e-15);
}

TEST(SampleUniform, RectanglePlateau) {
    const auto s = sample_uniform(CreaseCurve::rectangle(0.25), 4);
    ASSERT_EQ(s.size(), 5u);
    const double expected[] = {0.0, 0.25, 0.25, 0.25, 0.0};
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(s[i].f, expected[i], 1e-15) << i;
}

TEST(SampleUniform, CubicMonotoneGrid) {
    const CreaseCurve c = CreaseCurve::cubic_bezier(0.1125, 0.1125, 0.2526, 0.2526, 0.2543);
    const auto s = sample_uniform(c, 1000);
    ASSERT_EQ(s.size(), 1001u);
    for (size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1].u, s[i].u);
    EXPECT_NEAR(s[500].u, 0.5, 1e-15);
    EXPECT_NEAR(s[500].f, 0.2543, 1e-12);
}

TEST(SampleUniform, NonMonotoneCubicThrows) {
    // u'(1/2) = 0: u(t) stalls.
    const CreaseCurve c = CreaseCurve::cubic_bezier(0.5, 0.05, 0.0, 0.1, 0.2);
    EXPECT_FALSE(c.is_monotone());
    EXPECT_THROW(sample_uniform(c, 100), NonMonotoneError);
}

TEST(CurveProperties, EndpointsAreZero) {
    for (const auto& c : sample_curves()) {
        EXPECT_EQ(std::abs(eval(c, 0.0).f), 0.0) << family_name(c.family());
        EXPECT_EQ(std::abs(eval(c, 1.0).f), 0.0) << family_name(c.family());
    }
}

TEST(CurveProperties, MirrorSymmetry) {
    for (const auto& c : sample_curves()) {
        if (!c.is_symmetric()) continue;
        double worst = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double u = i / 1000.0;
            worst = std::max(worst, std::abs(eval(c, u).f - eval(c, 1.0 - u).f));
        }
        EXPECT_LE(worst, 1e-12) << family_name(c.family());
    }
}

TEST(CurveProperties, BezierPointsLieOnCurve) {
    for (const auto& c : {CreaseCurve::quad_bezier(0.2731, 0.2731, 0.2544),
                          CreaseCurve::quad_bezier(0.2, 0.15, 0.2),
                          CreaseCurve::cubic_bezier(0.1125, 0.1125, 0.2526, 0.2526, 0.2543),
                          CreaseCurve::cubic_bezier(0.1, 0.08, 0.25, 0.2, 0.2)}) {
        for (int i = 0; i <= 1000; ++i) {
            const BezierState b = bezier_state(c, i / 1000.0);
            EXPECT_NEAR(eval(c, b.u).f, b.v, 1e-9);
        }
    }
}

TEST(CurveProperties, PolylineNodesInterpolated) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 0.3);
    std::vector<double> h(40);
    for (auto& v : h) v = dist(rng);
    const CreaseCurve c = CreaseCurve::polyline(h);
    const int n = static_cast<int>(h.size());
    for (int i = 1; i <= n; ++i) EXPECT_EQ(eval(c, i / (2.0 * n)).f, h[i - 1]) << i;
}

TEST(CurveProperties, SlopeMatchesFiniteDifference) {
    for (const auto& c : sample_curves()) {
        const auto kinks = c.breakpoints();
        for (int i = 1; i <= 101; ++i) {
            const double u = i / 102.0;
            bool near_kink = false;
            for (double k : kinks) near_kink |= std::abs(u - k) < 1e-4;
            if (near_kink || std::abs(u - 0.5) < 1e-4) continue;
            const double step = 1e-6;
            const double fd = (eval(c, u + step).f - eval(c, u - step).f) / (2.0 * step);
            EXPECT_NEAR(fd, eval(c, u).fprime, 1e-5) << family_name(c.family()) << " u=" << u;
        }
    }
}

TEST(CurveProperties, ParameterVectorRoundTrip) {
    const CreaseCurve q = CreaseCurve::quad_bezier(0.2, 0.15, 0.2);
    const auto v = parameter_vector(q);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_TRUE(curve_from_vector(Family::QuadBezier, v) == q);
    const CreaseCurve cb = CreaseCurve::cubic_bezier(0.1, 0.08, 0.25, 0.2, 0.2);
    EXPECT_EQ(parameter_vector(cb).size(), 5u);
    EXPECT_TRUE(curve_from_vector(Family::CubicBezier, parameter_vector(cb)) == cb);
}

TEST(CurveProperties, ArcShape) {
    const double theta = 1.0;
    const CreaseCurve c = CreaseCurve::arc(theta);
    EXPECT_NEAR(eval(c, 0.5).f, (1.0 - std::cos(theta)) / (2.0 * theta), 1e-15);
    EXPECT_NEAR(std::abs(eval(c, 0.0).fprime), std::sin(theta), 1e-12);
}

TEST(CurveProperties, FamilyNames) {
    EXPECT_EQ(all_families().size(), 7u);
    for (Family f : all_families()) EXPECT_EQ(family_from_name(family_name(f)), f);
}
