// dephasing_model.hpp: Closed-form phase shift and decoherence of the dephasing qubit
//
// Conventions: the coherence is the interaction-picture mean <s+>(t); hbar = k_B = 1.
// The Markovian (time-convolutionless) solution is
//     <s+>(t) = <s+>(0) exp[i chi(t) - gamma_vac(t) - gamma_th(t) - gamma_cor(t)],
// and the renormalized solution replaces chi, gamma by chi_bar, gamma_bar, which
// carry the leading bath-dynamics correction through F(t).

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dephase/kernels.hpp"
#include "dephase/quadrature.hpp"
#include "dephase/spectral_density.hpp"

namespace dephase {

using complex = std::complex<double>;

struct QubitBathParams {
    double omega0{1.0};      // qubit level splitting
    double beta{1.0};        // inverse temperature
    double sigma3_mean{0.0}; // initial level inversion <sigma_3>
    std::optional<complex> initial_coherence; // defaults to the Bloch-sphere maximum
    SpectralDensity spectral;

    void validate() const {
        spectral.validate();
        if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("QubitBathParams: omega0 must be > 0");
        if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("QubitBathParams: beta must be > 0");
        if (!(sigma3_mean >= -1.0 && sigma3_mean <= 1.0))
            throw std::invalid_argument("QubitBathParams: sigma3_mean must lie in [-1, 1]");
        if (initial_coherence) {
            const double bound = 0.25 * (1.0 - sigma3_mean * sigma3_mean);
            if (!(std::norm(*initial_coherence) <= bound * (1.0 + 1e-12) + 1e-300))
                throw std::invalid_argument("QubitBathParams: |initial_coherence|^2 exceeds (1 - sigma3_mean^2)/4");
        }
    }

    complex coherence0() const {
        if (initial_coherence) return *initial_coherence;
        return {0.5 * std::sqrt(1.0 - sigma3_mean * sigma3_mean), 0.0};
    }

    double half_beta_omega0() const noexcept { return 0.5 * beta * omega0; }
};

namespace detail {

// 1 - s tanh(x) without cancellation when s -> 1 and x is large.
inline double one_minus_s_tanh(double s, double x) {
    if (s <= 0.0) return 1.0 - s * std::tanh(x);
    const double one_minus_tanh = 2.0 / (std::expm1(2.0 * x) + 2.0);
    return (1.0 - s) + s * one_minus_tanh;
}

} // namespace detail

/// Initial-correlation parameter A_init = [sinh x - s cosh x] / [cosh x - s sinh x], x = beta omega0 / 2.
inline double a_init(const QubitBathParams& p) {
    p.validate();
    const double s = p.sigma3_mean;
    if (s == 1.0) return -1.0;
    if (s == -1.0) return 1.0;
    const double x = p.half_beta_omega0();
    return (std::tanh(x) - s) / detail::one_minus_s_tanh(s, x);
}

/// (1 - s^2) / (2 [cosh x - s sinh x]^2): the coefficient of Phi^2 in gamma_cor.
inline double correlation_prefactor(const QubitBathParams& p) {
    p.validate();
    const double s = p.sigma3_mean;
    if (std::abs(s) == 1.0) return 0.0;
    const double x = p.half_beta_omega0();
    const double d = std::cosh(x) * detail::one_minus_s_tanh(s, x);
    return (1.0 - s * s) / (2.0 * d * d);
}

inline double phase_shift(const QubitBathParams& p, double t, const QuadratureConfig& cfg = {}) {
    return a_init(p) * phi(p.spectral, t, cfg);
}

inline double gamma_cor(const QubitBathParams& p, double t, const QuadratureConfig& cfg = {}) {
    const double c = correlation_prefactor(p);
    if (c == 0.0) return 0.0;
    const double f = phi(p.spectral, t, cfg);
    return c * f * f;
}

/// Exact correlational decoherence  -1/2 ln{1 - (1 - s^2) sin^2 Phi / [cosh x - s sinh x]^2}.
inline double gamma_cor_exact(const QubitBathParams& p, double t, const QuadratureConfig& cfg = {}) {
    const double c = correlation_prefactor(p);
    if (c == 0.0) return 0.0;
    const double sin_phi = std::sin(phi(p.spectral, t, cfg));
    const double reduction = 2.0 * c * sin_phi * sin_phi;
    if (!(reduction < 1.0))
        throw std::domain_error("gamma_cor_exact: logarithm argument " + std::to_string(1.0 - reduction) +
                                " <= 0 at t=" + std::to_string(t));
    return -0.5 * std::log1p(-reduction);
}

namespace detail {

inline double nested_tolerance(const QuadratureConfig& cfg) { return 10.0 * cfg.abs_tol; }

} // namespace detail

/// Phase correction  int_0^t F(t') d[gamma_vac + gamma_th]/dt' dt'.
inline double renorm_phase_correction(const QubitBathParams& p, double t, const QuadratureConfig& cfg = {}) {
    p.validate();
    detail::require_time(t, "renorm_chi");
    if (t == 0.0 || p.sigma3_mean == 0.0 || p.spectral.lambda == 0.0) return 0.0;
    const auto& J = p.spectral;
    return adaptive_simpson(
        [&](double u) { return big_f(J, p.sigma3_mean, u, cfg) * decoherence_rate(J, p.beta, u, cfg); }, 0.0, t,
        detail::nested_tolerance(cfg), 16);
}

/// Decoherence correction  -int_0^t F(t') d chi/dt' dt',  d chi/dt = A_init * drive.
inline double renorm_decoherence_correction(const QubitBathParams& p, double t, const QuadratureConfig& cfg = {}) {
    p.validate();
    detail::require_time(t, "renorm_gamma");
    if (t == 0.0 || p.sigma3_mean == 0.0 || p.spectral.lambda == 0.0) return 0.0;
    const auto& J = p.spectral;
    const double a = a_init(p);
    if (a == 0.0) return 0.0;
    return -a * adaptive_simpson([&](double u) { return big_f(J, p.sigma3_mean, u, cfg) * drive(J, u, cfg); }, 0.0,
                                 t, detail::nested_tolerance(cfg), 16);
}

inline double renorm_chi(const QubitBathParams& p, double t, const QuadratureConfig& cfg = {}) {
    return phase_shift(p, t, cfg) + renorm_phase_correction(p, t, cfg);
}

inline double renorm_gamma_cor(const QubitBathParams& p, double t, const QuadratureConfig& cfg = {}) {
    return gamma_cor(p, t, cfg) + renorm_decoherence_correction(p, t, cfg);
}

inline double renorm_gamma(const QubitBathParams& p, double t, const QuadratureConfig& cfg = {}) {
    return gamma_vac(p.spectral, t, cfg) + gamma_th(p.spectral, p.beta, t, cfg) + renorm_gamma_cor(p, t, cfg);
}

enum class Branch { zn, renormalized };

/// Markovian-limit coherence  <s+>(0) exp[i chi - gamma]  for the chosen branch.
inline complex ma_coherence(const QubitBathParams& p, double t, const QuadratureConfig& cfg = {},
                            Branch branch = Branch::zn) {
    p.validate();
    const complex c0 = p.coherence0();
    if (t == 0.0) return c0;
    double chi = 0.0, gamma = 0.0;
    if (branch == Branch::zn) {
        chi = phase_shift(p, t, cfg);
        gamma = gamma_vac(p.spectral, t, cfg) + gamma_th(p.spectral, p.beta, t, cfg) + gamma_cor(p, t, cfg);
    } else {
        chi = renorm_chi(p, t, cfg);
        gamma = renorm_gamma(p, t, cfg);
    }
    return c0 * std::exp(complex{-gamma, chi});
}

struct DecoherenceBreakdown {
    double t{0.0};
    double chi{0.0};
    double gamma_vac{0.0};
    double gamma_th{0.0};
    double gamma_cor{0.0};
    double gamma_cor_exact{0.0}; // NaN where the exact logarithm is undefined
    double chi_renorm{0.0};
    double gamma_renorm{0.0};
    double gamma_cor_renorm{0.0};
    double f_of_t{0.0};
};

/// All closed-form quantities on the uniform grid t_j = j * t_max / intervals.
/// Time integrals use cumulative Simpson on a refined grid (spacing <= 0.02 / Omega).
inline std::vector<DecoherenceBreakdown> breakdown_series(const QubitBathParams& p, double t_max,
                                                          std::size_t intervals, const QuadratureConfig& cfg = {}) {
    p.validate();
    cfg.validate();
    if (!(t_max > 0.0)) throw std::invalid_argument("breakdown_series: t_max must be > 0");
    if (intervals < 1) throw std::invalid_argument("breakdown_series: need at least one interval");

    const auto& J = p.spectral;
    const double coarse = t_max / static_cast<double>(intervals);
    std::size_t sub = static_cast<std::size_t>(std::ceil(coarse * J.omega_c / 0.02));
    sub = std::max<std::size_t>(2, sub + (sub % 2));
    const std::size_t n = intervals * sub;
    const double h = t_max / static_cast<double>(n);

    const double a = a_init(p);
    const double c = correlation_prefactor(p);
    const double s3 = p.sigma3_mean;

    std::vector<double> ph(n + 1), gv(n + 1), gt(n + 1), fv(n + 1), rate(n + 1), dr(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) * h;
        ph[i] = phi(J, t, cfg);
        gv[i] = gamma_vac(J, t, cfg);
        gt[i] = gamma_th(J, p.beta, t, cfg);
        rate[i] = decoherence_rate(J, p.beta, t, cfg);
        dr[i] = drive(J, t, cfg);
    }
    if (detail::closed_form(J, cfg)) {
        for (std::size_t i = 0; i <= n; ++i) fv[i] = big_f(J, s3, static_cast<double>(i) * h, cfg);
    } else {
        std::vector<double> moment(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = static_cast<double>(i) * h;
            moment[i] = t * kernel_sin(J, t, cfg);
        }
        fv = cumulative_simpson(moment, h);
        for (auto& v : fv) v *= s3;
    }

    std::vector<double> chi_integrand(n + 1), gamma_integrand(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        chi_integrand[i] = fv[i] * rate[i];
        gamma_integrand[i] = fv[i] * a * dr[i];
    }
    const auto chi_corr = cumulative_simpson(chi_integrand, h);
    const auto gamma_corr = cumulative_simpson(gamma_integrand, h);

    std::vector<DecoherenceBreakdown> out(intervals + 1);
    for (std::size_t j = 0; j <= intervals; ++j) {
        const std::size_t i = j * sub;
        DecoherenceBreakdown& b = out[j];
        b.t = static_cast<double>(j) * coarse;
        b.chi = a * ph[i];
        b.gamma_vac = gv[i];
        b.gamma_th = gt[i];
        b.gamma_cor = c * ph[i] * ph[i];
        const double sin_phi = std::sin(ph[i]);
        const double reduction = 2.0 * c * sin_phi * sin_phi;
        b.gamma_cor_exact = reduction < 1.0 ? -0.5 * std::log1p(-reduction) : std::numeric_limits<double>::quiet_NaN();
        b.chi_renorm = b.chi + chi_corr[i];
        b.gamma_cor_renorm = b.gamma_cor - gamma_corr[i];
        b.gamma_renorm = b.gamma_vac + b.gamma_th + b.gamma_cor_renorm;
        b.f_of_t = fv[i];
    }
    return out;
}

} // namespace dephase
