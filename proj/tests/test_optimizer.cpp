#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pillowfold/errors.hpp"
#include "pillowfold/fold.hpp"
#include "pillowfold/optimizer.hpp"
#include "pillowfold/volume.hpp"

using namespace pillowfold;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

OptResult run(Family family, int segments = 100, double length = kSqrt2) {
    return maximize_volume(OptimizationProblem::standard(family, length, segments));
}

double diagonal_volume(const std::vector<double>& p, Family family) {
    std::vector<double> q = p;
    if (family == Family::QuadBezier) {
        q[0] = q[1] = 0.5 * (p[0] + p[1]);
    } else {
        q[0] = q[1] = 0.5 * (p[0] + p[1]);
        q[2] = q[3] = 0.5 * (p[2] + p[3]);
    }
    return volume_functional(curve_from_vector(family, q), kSqrt2);
}

}  // namespace

TEST(ConstraintVector, PolylineSlopes) {
    const std::vector<double> h{0.2, 0.3};
    const auto g = constraint_vector(Family::Polyline, h);
    ASSERT_EQ(g.size(), 2u);
    EXPECT_NEAR(g[0], 0.36, 1e-12);
    EXPECT_NEAR(g[1], 0.84, 1e-12);
}

TEST(ConstraintVector, QuadDiagonalIsOnBoundary) {
    const std::vector<double> p{0.2, 0.2, 0.25};
    const auto g = constraint_vector(Family::QuadBezier, p, 200);
    ASSERT_EQ(g.size(), 2u * 201u);
    EXPECT_NEAR(g[0], 0.0, 1e-15);
    for (int k = 0; k <= 200; ++k) EXPECT_GT(g[201 + k], 0.0);
}

TEST(ConstraintVector, SampledSineTouchesBoundAtEnds) {
    const int n = 1000;
    std::vector<double> h(n);
    for (int i = 1; i <= n; ++i) h[i - 1] = std::sin(kPi * i / (2.0 * n)) / kPi;
    const auto g = constraint_vector(Family::Polyline, h);
    const auto it = std::min_element(g.begin(), g.end());
    EXPECT_EQ(it - g.begin(), 0);
    EXPECT_LT(*it, 1e-5);
    EXPECT_GT(*it, 0.0);
}

TEST(GradientFd, Quadratic) {
    const std::vector<double> p{1.0, 2.0};
    const FdGradient g = gradient_fd([](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; }, p);
    EXPECT_NEAR(g.values[0], 2.0, 1e-8);
    EXPECT_NEAR(g.values[1], 4.0, 1e-8);
}

TEST(GradientFd, RectangleDerivative) {
    const SheetSpec sheet{1.0, kSqrt2};
    const std::vector<double> p{0.1};
    const FdGradient g =
        gradient_fd([&](std::span<const double> x) { return rectangle_volume(x[0], sheet).value; }, p);
    const double h = 0.1;
    const double analytic = 2 * (1 - 2 * h) * (kSqrt2 - 2 * h) - 4 * h * (kSqrt2 - 2 * h) - 4 * h * (1 - 2 * h);
    EXPECT_NEAR(analytic, 1.13705, 1e-5);
    EXPECT_NEAR(g.values[0], analytic, 1e-5);
}

TEST(GradientFd, StaysInsideBounds) {
    const std::vector<double> p{0.0};
    const std::vector<double> lo{0.0};
    const std::vector<double> hi{1.0};
    const FdGradient g = gradient_fd(
        [](std::span<const double> x) {
            if (x[0] < 0.0) return std::nan("");
            return 3.0 * x[0];
        },
        p, 0.0, lo, hi);
    EXPECT_TRUE(g.shifted[0]);
    EXPECT_NEAR(g.values[0], 3.0, 1e-8);
}

TEST(GradientFd, NoFiniteProbeThrows) {
    const std::vector<double> p{0.5};
    EXPECT_THROW(gradient_fd([](std::span<const double>) { return std::nan(""); }, p), EvaluationError);
}

TEST(PolylineVolume, AnalyticGradient) {
    std::vector<double> h(12);
    for (int i = 0; i < 12; ++i) h[i] = 0.7 * std::sin(kPi * (i + 1) / 24.0) / kPi;
    EXPECT_NEAR(polyline_volume(h, kSqrt2), volume_quadrature(CreaseCurve::polyline(h), SheetSpec{}).value, 1e-14);
    const auto grad = polyline_volume_gradient(h, kSqrt2);
    const FdGradient fd = gradient_fd([](std::span<const double> x) { return polyline_volume(x, kSqrt2); }, h);
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(grad[i], fd.values[i], 1e-7) << i;
}

TEST(MaximizeVolume, QuadBezier) {
    const OptResult r = run(Family::QuadBezier);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.volume, 0.294436, 5e-4);
    EXPECT_NEAR(r.params[0], 0.2731, 0.01);
    EXPECT_NEAR(r.params[1], 0.2731, 0.01);
    EXPECT_NEAR(r.params[2], 0.2544, 0.01);
    EXPECT_NEAR(r.volume, diagonal_volume(r.params, Family::QuadBezier), 5e-4);
}

TEST(MaximizeVolume, CubicBezier) {
    const OptResult quad = run(Family::QuadBezier);
    const OptResult r = run(Family::CubicBezier);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.volume, 0.295448, 5e-4);
    EXPECT_GE(r.volume, quad.volume - 1e-6);
    EXPECT_NEAR(r.params[0], r.params[1], 0.01);
    EXPECT_NEAR(r.params[2], r.params[3], 0.01);
    EXPECT_NEAR(r.params[4], 0.2543, 0.01);
    EXPECT_NEAR(r.volume, diagonal_volume(r.params, Family::CubicBezier), 5e-4);
}

TEST(MaximizeVolume, PolylineSmoke) {
    const OptResult r = run(Family::Polyline, 100);
    EXPECT_TRUE(r.converged);
    EXPECT_GE(r.volume, 0.2950);
    EXPECT_LE(r.max_violation, 1e-6);
}

TEST(MaximizeVolume, ResultInvariants) {
    for (Family f : {Family::QuadBezier, Family::CubicBezier, Family::Polyline}) {
        const OptimizationProblem problem = OptimizationProblem::standard(f, kSqrt2, 50);
        const OptResult r = maximize_volume(problem);
        const CreaseCurve c = result_curve(problem, r);
        const ValidationReport report = validate(c, 10000);
        EXPECT_TRUE(report.valid) << family_name(f);
        EXPECT_LE(report.max_abs_slope, 1.0 + 1e-6);
        EXPECT_NEAR(r.volume, volume_quadrature(c, problem.sheet, problem.n_quadrature).value, 1e-12);
        const double start = volume_quadrature(curve_from_vector(f, problem.initial), problem.sheet).value;
        EXPECT_GE(r.volume, start) << family_name(f);
        ASSERT_FALSE(r.trace.empty());
        EXPECT_EQ(static_cast<int>(r.trace.size()), r.iterations);
        if (r.converged) EXPECT_LE(r.max_violation, 1e-6);
    }
}

TEST(MaximizeVolume, RefinementIsMonotone) {
    OptimizationProblem problem = OptimizationProblem::standard(Family::Polyline, kSqrt2, 25);
    OptResult r = maximize_volume(problem);
    double previous = r.volume;
    for (int n : {50, 100, 200}) {
        const CreaseCurve coarse = result_curve(problem, r);
        OptimizationProblem finer = OptimizationProblem::standard(Family::Polyline, kSqrt2, n);
        for (int i = 1; i <= n; ++i) finer.initial[i - 1] = eval(coarse, i / (2.0 * n)).f;
        r = maximize_volume(finer);
        EXPECT_GE(r.volume, previous - 1e-9) << "N=" << n;
        previous = r.volume;
        problem = finer;
    }
}

TEST(MaximizeVolume, InfeasibleStartRejected) {
    OptimizationProblem problem = OptimizationProblem::standard(Family::QuadBezier);
    problem.initial = {0.1, 0.3, 0.2};
    EXPECT_THROW(maximize_volume(problem), InfeasibleStartError);
}

TEST(MaximizeVolume, UnsupportedFamily) {
    OptimizationProblem problem = OptimizationProblem::standard(Family::QuadBezier);
    problem.family = Family::SineArc;
    EXPECT_THROW(maximize_volume(problem), DomainError);
}

TEST(MaximizeVolume, TimeBudgetKeepsBestSoFar) {
    SolverConfig config;
    config.max_seconds = 1e-4;
    config.max_iter = 5000;
    const OptimizationProblem problem = OptimizationProblem::standard(Family::Polyline, kSqrt2, 1000);
    const OptResult r = maximize_volume(problem, config);
    EXPECT_TRUE(r.timed_out);
    EXPECT_FALSE(r.converged);
    EXPECT_GE(r.volume, polyline_volume(problem.initial, kSqrt2) - 1e-12);
}

TEST(MaximizeVolume, MultistartNotWorse) {
    SolverConfig config;
    config.multistart = true;
    const OptResult single = run(Family::QuadBezier);
    const OptResult multi = maximize_volume(OptimizationProblem::standard(Family::QuadBezier), config);
    EXPECT_GE(multi.volume, single.volume - 1e-9);
}

TEST(MaximizeVolume, Deterministic) {
    const OptResult a = run(Family::CubicBezier);
    const OptResult b = run(Family::CubicBezier);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.volume, b.volume);
    EXPECT_EQ(a.iterations, b.iterations);
}
