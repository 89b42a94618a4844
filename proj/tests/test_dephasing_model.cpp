#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dephase/dephasing_model.hpp"
#include "oracles.hpp"

using namespace dephase;

namespace {

QubitBathParams fig1(double lambda = 1.0 / 3.0) {
    QubitBathParams p;
    p.omega0 = 1.0;
    p.beta = 0.1;
    p.sigma3_mean = 0.2;
    p.spectral = {lambda, 1.0, 1.0};
    return p;
}

QubitBathParams fig2(double lambda = 1.0 / 3.0) {
    auto p = fig1(lambda);
    p.beta = 5.0;
    p.sigma3_mean = 0.99;
    return p;
}

// mpmath, 25 digits
constexpr double a_init_fig1 = -0.15155592256342220;
constexpr double a_init_fig2 = -0.14561003108833657;
constexpr double prefactor_fig1 = 0.48851540116797499;
constexpr double gamma_cor_fig1_t1 = 0.03348231770;
constexpr double gamma_cor_exact_fig1_t1 = 0.03384435410;
constexpr double chi_correction_fig1_t2 = 0.25267563061063352;
constexpr double chi_renorm_fig1_t2 = 0.19674398216390240;
constexpr double gamma_cor_correction_fig1_t2 = 0.00071699133927763;
constexpr double gamma_cor_renorm_fig1_t2 = 0.06725161020768764;

} // namespace

TEST(InitialCorrelation, Examples) {
    EXPECT_NEAR(a_init(fig1()), -0.151556, 1e-5);
    EXPECT_NEAR(a_init(fig2()), -0.145607, 1e-5);
    EXPECT_NEAR(a_init(fig1()), a_init_fig1, 1e-12);
    EXPECT_NEAR(a_init(fig2()), a_init_fig2, 1e-13);

    auto p = fig1();
    p.sigma3_mean = 0.0;
    for (double bw : {0.01, 0.7, 5.0}) {
        p.beta = bw;
        EXPECT_NEAR(a_init(p), std::tanh(0.5 * bw), 1e-15);
    }
    p.beta = 1e-12;
    for (double s3 : {-0.9, -0.2, 0.4, 1.0}) {
        p.sigma3_mean = s3;
        EXPECT_NEAR(a_init(p), -s3, 1e-11);
    }
}

TEST(InitialCorrelation, PrefactorIdentityOnRandomStates) {
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> bw_dist(1e-3, 30.0), s_dist(-0.999, 0.999);
    QubitBathParams p = fig1();
    for (int i = 0; i < 10000; ++i) {
        const double bw = bw_dist(rng), s3 = s_dist(rng);
        p.beta = bw;
        p.sigma3_mean = s3;
        const double a = a_init(p);
        const double hyper = oracle::a_init_hyperbolic(bw, s3);
        const double expo = oracle::a_init_exponential(bw, s3);
        // relative to the size of the terms that cancel in the numerator
        const double scale = std::max(std::abs(a), std::abs(std::tanh(0.5 * bw)) + std::abs(s3));
        ASSERT_LE(std::abs(a - hyper), 1e-12 * scale) << bw << ' ' << s3;
        ASSERT_LE(std::abs(a - expo), 1e-12 * scale) << bw << ' ' << s3;
        ASSERT_GT(a, -1.0);
        ASSERT_LT(a, 1.0);
    }
}

TEST(InitialCorrelation, DecreasingInInversion) {
    auto p = fig1();
    double previous = INFINITY;
    for (double s3 = -0.95; s3 <= 0.95; s3 += 0.05) {
        p.sigma3_mean = s3;
        const double a = a_init(p);
        EXPECT_LT(a, previous);
        previous = a;
    }
}

TEST(InitialCorrelation, ParameterValidation) {
    auto p = fig1();
    p.sigma3_mean = 1.5;
    EXPECT_THROW(a_init(p), std::invalid_argument);
    p = fig1();
    p.beta = 0.0;
    EXPECT_THROW(a_init(p), std::invalid_argument);
    p = fig1();
    p.initial_coherence = complex{0.5, 0.0};
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p.initial_coherence = complex{0.3, 0.3};
    EXPECT_NO_THROW(p.validate());
    EXPECT_NEAR(fig1().coherence0().real(), 0.5 * std::sqrt(0.96), 1e-15);
}

TEST(PhaseShift, Examples) {
    EXPECT_EQ(phase_shift(fig1(), 0.0), 0.0);
    EXPECT_NEAR(phase_shift(fig1(), 1.0), -0.0396772, 1e-7);
    EXPECT_NEAR(phase_shift(fig1(), 1.0), a_init_fig1 * std::numbers::pi / 12.0, 1e-13);

    auto p = fig1();
    p.sigma3_mean = std::tanh(0.5 * p.beta * p.omega0);
    for (double t : {0.5, 3.0, 10.0}) EXPECT_NEAR(phase_shift(p, t), 0.0, 1e-16);
}

TEST(CorrelationalDecoherence, Examples) {
    EXPECT_NEAR(correlation_prefactor(fig1()), prefactor_fig1, 1e-10);
    EXPECT_NEAR(gamma_cor(fig1(), 1.0), gamma_cor_fig1_t1, 1e-10);
    EXPECT_NEAR(gamma_cor_exact(fig1(), 1.0), gamma_cor_exact_fig1_t1, 1e-10);
    EXPECT_NEAR(gamma_cor_exact(fig1(), 1.0), 0.033844, 1e-6);
    EXPECT_LT(gamma_cor_exact(fig1(), 1.0) - gamma_cor(fig1(), 1.0), 4e-4);

    for (double s3 : {-1.0, 1.0}) {
        auto p = fig1();
        p.sigma3_mean = s3;
        EXPECT_EQ(gamma_cor(p, 3.0), 0.0);
        EXPECT_EQ(gamma_cor_exact(p, 3.0), 0.0);
    }
    EXPECT_EQ(gamma_cor(fig1(0.0), 2.0), 0.0);
    EXPECT_EQ(gamma_cor_exact(fig1(0.0), 2.0), 0.0);
}

TEST(CorrelationalDecoherence, ExactLogDomainError) {
    // The argument is bounded below by cos^2 Phi; it reaches zero only for
    // Phi = pi/2 with an uncorrelated state (A_init = 0).
    auto p = fig1(2.0);
    p.sigma3_mean = 0.0;
    p.beta = 1e-9;
    EXPECT_THROW(gamma_cor_exact(p, 1.0), std::domain_error);
    p.sigma3_mean = 0.3;
    EXPECT_NO_THROW(gamma_cor_exact(p, 1.0));
}

TEST(CorrelationalDecoherence, FourthOrderAgreementWithExact) {
    std::vector<double> scaled;
    for (double lambda : {0.1, 0.05, 0.025}) {
        const auto p = fig1(lambda);
        const double diff = std::abs(gamma_cor_exact(p, 1.0) - gamma_cor(p, 1.0));
        scaled.push_back(diff / std::pow(lambda, 4));
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    EXPECT_LT((*hi - *lo) / *lo, 0.25);
}

TEST(Renormalization, VanishesWithoutInversionOrCoupling) {
    auto p = fig1();
    p.sigma3_mean = 0.0;
    EXPECT_EQ(renorm_chi(p, 3.0), phase_shift(p, 3.0));
    EXPECT_EQ(renorm_gamma_cor(p, 3.0), gamma_cor(p, 3.0));
    EXPECT_EQ(renorm_chi(fig1(0.0), 3.0), 0.0);
    EXPECT_EQ(renorm_gamma(fig1(0.0), 3.0), 0.0);
    EXPECT_EQ(renorm_chi(fig1(), 0.0), 0.0);
}

TEST(Renormalization, FigureOneAtTwoAgainstNestedOracle) {
    const auto p = fig1();
    const double lambda = 1.0 / 3.0, s3 = 0.2;
    auto F = [&](double t) { return lambda * s3 * (std::atan(t) - t / (1.0 + t * t)); };

    // composite Simpson over t' with a Riemann-sum frequency integral for the rate
    const double chi_oracle = oracle::simpson(
        [&](double u) { return F(u) * oracle::rate_riemann(lambda, 0.1, u, 100000); }, 0.0, 2.0, 200);
    const double gcor_oracle =
        oracle::simpson([&](double u) { return F(u) * a_init_fig1 * lambda / (1.0 + u * u); }, 0.0, 2.0, 2000);
    EXPECT_NEAR(chi_oracle, chi_correction_fig1_t2, 1e-6);
    EXPECT_NEAR(gcor_oracle, -gamma_cor_correction_fig1_t2, 1e-10);

    EXPECT_NEAR(renorm_phase_correction(p, 2.0), chi_correction_fig1_t2, 1e-8);
    EXPECT_NEAR(renorm_chi(p, 2.0), chi_renorm_fig1_t2, 1e-8);
    EXPECT_NEAR(renorm_decoherence_correction(p, 2.0), gamma_cor_correction_fig1_t2, 1e-9);
    EXPECT_NEAR(renorm_gamma_cor(p, 2.0), gamma_cor_renorm_fig1_t2, 1e-9);

    const double split = renorm_gamma(p, 2.0) - renorm_gamma_cor(p, 2.0);
    EXPECT_NEAR(split, gamma_vac(p.spectral, 2.0) + gamma_th(p.spectral, p.beta, 2.0), 1e-12);
}

TEST(Renormalization, OhmicCorrectionClosedForm) {
    // -A lambda^2 sigma (U^2 - sin^2 U) / 2 with U = atan(t)
    const auto p = fig1();
    for (double t : {0.5, 2.0, 7.0}) {
        const double u = std::atan(t);
        const double closed = -a_init_fig1 * (1.0 / 9.0) * 0.2 * (u * u - std::sin(u) * std::sin(u)) / 2.0;
        EXPECT_NEAR(renorm_decoherence_correction(p, t), closed, 1e-9) << t;
    }
}

TEST(Renormalization, CorrectionIsFourthOrderInBathCoupling) {
    // F and the drive are each linear in lambda ~ |g|^2, so the product is lambda^2 ~ |g|^4.
    for (double t : {1.0, 4.0}) {
        const double big = renorm_decoherence_correction(fig1(0.1), t);
        const double small = renorm_decoherence_correction(fig1(0.05), t);
        EXPECT_NEAR(big / small, 4.0, 1e-3) << t;
        const double cbig = renorm_phase_correction(fig1(0.1), t);
        const double csmall = renorm_phase_correction(fig1(0.05), t);
        EXPECT_NEAR(cbig / csmall, 4.0, 1e-3) << t;
    }
}

TEST(Renormalization, SignFollowsInversionAndCorrelation) {
    for (double bw : {0.1, 2.0}) {
        for (double s3 : {-0.6, -0.1, 0.3, 0.9}) {
            auto p = fig1(0.2);
            p.beta = bw;
            p.sigma3_mean = s3;
            const double a = a_init(p);
            if (std::abs(a) < 1e-9) continue;
            for (double t : {0.5, 2.0, 6.0}) {
                const double delta = renorm_gamma_cor(p, t) - gamma_cor(p, t);
                EXPECT_GT(-s3 * a * delta, 0.0) << "bw=" << bw << " s3=" << s3 << " t=" << t;
            }
        }
    }
}

TEST(MarkovianCoherence, Composition) {
    auto p = fig1();
    p.initial_coherence = complex{0.4, 0.0};
    EXPECT_EQ(ma_coherence(p, 0.0), complex(0.4, 0.0));

    const double gamma = std::log(2.0) / 6.0 + gamma_th(p.spectral, p.beta, 1.0) + gamma_cor_fig1_t1;
    const double chi = a_init_fig1 * std::numbers::pi / 12.0;
    const complex z = ma_coherence(p, 1.0);
    EXPECT_NEAR(std::abs(z), 0.4 * std::exp(-gamma), 1e-10);
    EXPECT_NEAR(std::arg(z), chi, 1e-10);

    const complex r = ma_coherence(p, 1.0, {}, Branch::renormalized);
    EXPECT_NEAR(std::abs(r), 0.4 * std::exp(-renorm_gamma(p, 1.0)), 1e-12);
    EXPECT_NEAR(std::arg(r), renorm_chi(p, 1.0), 1e-12);

    auto zero = fig1(0.0);
    zero.initial_coherence = complex{0.1, -0.2};
    EXPECT_EQ(ma_coherence(zero, 5.0), complex(0.1, -0.2));
    EXPECT_EQ(ma_coherence(zero, 5.0, {}, Branch::renormalized), complex(0.1, -0.2));
}

TEST(MarkovianCoherence, ModulusNonIncreasingForOhmicBath) {
    for (const auto& p : {fig1(), fig2(), fig1(0.05)}) {
        double previous = std::abs(ma_coherence(p, 0.0));
        for (double t = 0.1; t <= 20.0 + 1e-12; t += 0.1) {
            const double m = std::abs(ma_coherence(p, t));
            EXPECT_LE(m, previous * (1.0 + 1e-14)) << t;
            previous = m;
        }
    }
}

TEST(Breakdown, MatchesPointwiseFunctions) {
    const auto p = fig1();
    const auto rows = breakdown_series(p, 4.0, 8);
    ASSERT_EQ(rows.size(), 9u);
    EXPECT_EQ(rows[0].t, 0.0);
    EXPECT_EQ(rows[0].chi, 0.0);
    EXPECT_EQ(rows[0].f_of_t, 0.0);
    EXPECT_EQ(rows[0].gamma_cor_renorm, 0.0);
    for (const auto& b : rows) {
        EXPECT_NEAR(b.chi, phase_shift(p, b.t), 1e-13);
        EXPECT_NEAR(b.gamma_vac, gamma_vac(p.spectral, b.t), 1e-13);
        EXPECT_NEAR(b.gamma_th, gamma_th(p.spectral, p.beta, b.t), 1e-12);
        EXPECT_NEAR(b.gamma_cor, gamma_cor(p, b.t), 1e-13);
        EXPECT_NEAR(b.gamma_cor_exact, gamma_cor_exact(p, b.t), 1e-13);
        EXPECT_NEAR(b.f_of_t, big_f(p.spectral, p.sigma3_mean, b.t), 1e-13);
        EXPECT_NEAR(b.chi_renorm, renorm_chi(p, b.t), 1e-7);
        EXPECT_NEAR(b.gamma_cor_renorm, renorm_gamma_cor(p, b.t), 1e-9);
        EXPECT_NEAR(b.gamma_renorm, renorm_gamma(p, b.t), 1e-7);
        EXPECT_GE(b.gamma_vac, 0.0);
        EXPECT_GE(b.gamma_th, 0.0);
        EXPECT_GE(b.gamma_cor, 0.0);
        EXPECT_GE(b.gamma_cor_exact, 0.0);
    }
}

TEST(Breakdown, QuadraturePathForSuperOhmicBath) {
    auto p = fig1(0.2);
    p.spectral.s = 2.0;
    const auto rows = breakdown_series(p, 2.0, 4);
    for (const auto& b : rows) {
        EXPECT_NEAR(b.f_of_t, big_f(p.spectral, p.sigma3_mean, b.t), 1e-8);
        EXPECT_NEAR(b.gamma_cor_renorm, renorm_gamma_cor(p, b.t), 1e-8);
    }
}
