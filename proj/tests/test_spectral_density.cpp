#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "dephase/spectral_density.hpp"
#include "oracles.hpp"

using namespace dephase;

namespace {

SpectralDensity ohmic_third() { return SpectralDensity{1.0 / 3.0, 1.0, 1.0}; }

} // namespace

TEST(SpectralDensity, EvaluateMatchesDefinition) {
    const auto J = ohmic_third();
    EXPECT_EQ(evaluate(J, 0.0), 0.0);
    EXPECT_NEAR(evaluate(J, 1.0), 0.12262648039048077, 1e-15);
    EXPECT_EQ(evaluate(SpectralDensity{0.0, 2.0, 0.5}, 3.7), 0.0);

    const SpectralDensity super{0.2, 2.0, 1.5};
    EXPECT_NEAR(evaluate(super, 3.0), 0.2 * std::pow(2.0, -0.5) * std::pow(3.0, 1.5) * std::exp(-1.5), 1e-15);
}

TEST(SpectralDensity, RejectsNegativeFrequencyAndBadParameters) {
    EXPECT_THROW(evaluate(ohmic_third(), -1e-3), std::domain_error);
    EXPECT_THROW((SpectralDensity{-0.1, 1.0, 1.0}.validate()), std::invalid_argument);
    EXPECT_THROW((SpectralDensity{0.1, 0.0, 1.0}.validate()), std::invalid_argument);
    EXPECT_THROW((SpectralDensity{0.1, 1.0, 0.0}.validate()), std::invalid_argument);
}

TEST(SpectralDensity, NonNegativeAndDecaying) {
    for (double s : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const SpectralDensity J{0.4, 1.3, s};
        for (double w = 0.0; w < 80.0; w += 0.37) EXPECT_GE(evaluate(J, w), 0.0);
        EXPECT_LT(evaluate(J, 200.0), 1e-60);
    }
}

TEST(OscillatoryQuadrature, GammaNormalization) {
    auto f = [](double w) { return w * std::exp(-w); };
    EXPECT_NEAR(integrate_oscillatory(f, TrigKind::cosine, 0.0, {}), 1.0, 1e-12);
}

TEST(OscillatoryQuadrature, LaplaceSineTransform) {
    auto f = [](double w) { return w * std::exp(-w); };
    // analytic 2t / (1 + t^2)^2; brute-force panel oracle as a second route
    EXPECT_NEAR(integrate_oscillatory(f, TrigKind::sine, 1.0, {}), 0.5, 1e-12);
    const double brute = oracle::riemann([&](double w) { return f(w) * std::sin(w); }, 0.0, 60.0, 2000000);
    EXPECT_NEAR(brute, 0.5, 1e-9);
    for (double t : {0.3, 2.0, 7.5, 40.0})
        EXPECT_NEAR(integrate_oscillatory(f, TrigKind::sine, t, {}), 2.0 * t / std::pow(1.0 + t * t, 2), 1e-10)
            << "t=" << t;
}

TEST(OscillatoryQuadrature, SineAtZeroTimeIsExactlyZero) {
    auto f = [](double w) { return 1.0 / (1.0 + w * w); };
    EXPECT_EQ(integrate_oscillatory(f, TrigKind::sine, 0.0, {}), 0.0);
    EXPECT_EQ(integrate_oscillatory(f, TrigKind::one_minus_cosine, 0.0, {}), 0.0);
}

TEST(OscillatoryQuadrature, CosineTransformOfExponential) {
    // int exp(-w) cos(wt) dw = 1 / (1 + t^2)
    auto f = [](double w) { return std::exp(-w); };
    for (double t : {0.0, 0.5, 1.0, 3.0, 25.0, 120.0})
        EXPECT_NEAR(integrate_oscillatory(f, TrigKind::cosine, t, {}), 1.0 / (1.0 + t * t), 1e-10) << "t=" << t;
}

TEST(OscillatoryQuadrature, TailAccelerationPathAtLargeTime) {
    // Force the Euler-accelerated tail: few direct segments, slowly decaying alternation.
    QuadratureConfig cfg;
    cfg.tail_segments = 8;
    auto f = [](double w) { return std::exp(-w); };
    const double t = 300.0;
    EXPECT_NEAR(integrate_oscillatory(f, TrigKind::cosine, t, cfg), 1.0 / (1.0 + t * t), 1e-10);
    EXPECT_NEAR(integrate_oscillatory(f, TrigKind::sine, t, cfg), t / (1.0 + t * t), 1e-10);
}

TEST(OscillatoryQuadrature, OneMinusCosineRemainderSplit) {
    // int exp(-w)(1 - cos wt)/w dw = ln(1 + t^2) / 2; few periods forces the tail split
    QuadratureConfig cfg;
    cfg.tail_segments = 3;
    auto f = [](double w) { return std::exp(-w) / w; };
    for (double t : {2.0, 20.0})
        EXPECT_NEAR(integrate_oscillatory(f, TrigKind::one_minus_cosine, t, cfg), 0.5 * std::log1p(t * t), 1e-10);
}

TEST(OscillatoryQuadrature, EndpointSingularity) {
    // int w^{-1/2} exp(-w) dw = sqrt(pi)
    auto f = [](double w) { return std::exp(-w) / std::sqrt(w); };
    EXPECT_NEAR(integrate_oscillatory(f, TrigKind::cosine, 0.0, {}), std::sqrt(std::numbers::pi), 1e-9);
}

TEST(OscillatoryQuadrature, ReportsNonConvergence) {
    QuadratureConfig cfg;
    cfg.max_refinements = 1;
    cfg.abs_tol = cfg.rel_tol = 1e-15;
    auto f = [](double w) { return std::exp(-w) / std::sqrt(w); };
    try {
        integrate_oscillatory(f, TrigKind::cosine, 0.0, cfg);
        FAIL() << "expected NonConvergence";
    } catch (const NonConvergence& e) {
        EXPECT_GT(e.estimate(), 0.0);
    }
}

TEST(OscillatoryQuadrature, NegativeTimeIsDomainError) {
    auto f = [](double w) { return std::exp(-w); };
    EXPECT_THROW(integrate_oscillatory(f, TrigKind::cosine, -1.0, {}), std::domain_error);
}

TEST(OscillatoryQuadrature, Linearity) {
    QuadratureConfig cfg;
    auto f = [](double w) { return w * std::exp(-w); };
    auto g = [](double w) { return w * w * std::exp(-0.7 * w); };
    const double a = 1.7, b = -0.3;
    for (TrigKind kind : {TrigKind::cosine, TrigKind::sine, TrigKind::one_minus_cosine}) {
        for (double t : {0.4, 3.0, 11.0}) {
            const double lhs = integrate_oscillatory([&](double w) { return a * f(w) + b * g(w); }, kind, t, cfg);
            const double rhs = a * integrate_oscillatory(f, kind, t, cfg) + b * integrate_oscillatory(g, kind, t, cfg);
            EXPECT_NEAR(lhs, rhs, 10.0 * cfg.abs_tol);
        }
    }
}

TEST(OscillatoryQuadrature, OneMinusCosineOfJOverOmegaSquaredIsNonNegative) {
    for (double s : {0.5, 1.0, 1.5, 2.0}) {
        const SpectralDensity J{0.3, 1.0, s};
        for (int k = 0; k <= 20; ++k) {
            const double t = k * 1.0;
            const double v = integrate_oscillatory(
                J, [&](double w) { return J.weighted(w, -2.0); }, TrigKind::one_minus_cosine, t, {});
            EXPECT_GE(v, 0.0) << "s=" << s << " t=" << t;
        }
    }
}

TEST(OscillatoryQuadrature, CutoffScalingLeavesPhiOverLambdaInvariant) {
    // Omega -> c Omega, t -> t / c leaves int J sin(wt)/w^2 dw / lambda unchanged.
    for (double s : {0.5, 1.5, 2.0}) {
        const SpectralDensity base{0.25, 1.0, s};
        for (double c : {0.5, 3.0}) {
            SpectralDensity scaled = base;
            scaled.omega_c = c * base.omega_c;
            for (double t : {0.3, 2.0, 9.0}) {
                const double a = integrate_oscillatory(
                    base, [&](double w) { return base.weighted(w, -2.0); }, TrigKind::sine, t, {});
                const double b = integrate_oscillatory(
                    scaled, [&](double w) { return scaled.weighted(w, -2.0); }, TrigKind::sine, t / c, {});
                EXPECT_NEAR(a / base.lambda, b / scaled.lambda, 1e-8 * std::max(1.0, std::abs(a)));
            }
        }
    }
}

TEST(CumulativeSimpson, ExactOnQuadraticsEverywhereAndCubicsAtEvenNodes) {
    const double h = 0.1;
    std::vector<double> quad, cubic;
    for (int i = 0; i <= 31; ++i) {
        const double x = i * h;
        quad.push_back(3.0 * x * x - 2.0 * x + 1.0);
        cubic.push_back(x * x * x);
    }
    const auto q = cumulative_simpson(quad, h);
    const auto c = cumulative_simpson(cubic, h);
    for (int i = 0; i <= 31; ++i) {
        const double x = i * h;
        EXPECT_NEAR(q[i], x * x * x - x * x + x, 1e-12) << i;
        if (i % 2 == 0) {
            EXPECT_NEAR(c[i], 0.25 * x * x * x * x, 1e-12) << i;
        }
    }
}
