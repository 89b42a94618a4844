// kernels.hpp: Integral transforms of J(w) entering the dephasing kinetic equation

#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dephase/format.hpp"
#include "dephase/quadrature.hpp"
#include "dephase/spectral_density.hpp"

namespace dephase {

// coth(x) - 1 = 2 / (e^{2x} - 1), with the Laurent expansion near the origin.
inline double coth_minus_one(double x) {
    if (x < 1e-4) return 1.0 / x + x / 3.0 - 1.0;
    return 2.0 / std::expm1(2.0 * x);
}

inline double coth_stable(double x) {
    if (x < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 + 2.0 / std::expm1(2.0 * x);
}

namespace detail {

inline void require_time(double t, const char* what) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::domain_error(std::string(what) + ": time argument must be finite and >= 0");
}

inline void require_beta(double beta, const char* what) {
    if (!(beta > 0.0)) throw std::domain_error(std::string(what) + ": beta must be > 0");
}

inline bool closed_form(const SpectralDensity& J, const QuadratureConfig& cfg) {
    return cfg.use_closed_forms && J.ohmic();
}

} // namespace detail

/// Phase function  Phi(t) = int J(w) sin(wt) / w^2 dw.
inline double phi(const SpectralDensity& J, double t, const QuadratureConfig& cfg = {}) {
    J.validate();
    detail::require_time(t, "phi");
    if (t == 0.0 || J.lambda == 0.0) return 0.0;
    if (detail::closed_form(J, cfg)) return J.lambda * std::atan(J.omega_c * t);
    return integrate_oscillatory(
        J, [&](double w) { return J.weighted(w, -2.0); }, TrigKind::sine, t, cfg);
}

/// Vacuum decoherence  int J(w) (1 - cos wt) / w^2 dw.
inline double gamma_vac(const SpectralDensity& J, double t, const QuadratureConfig& cfg = {}) {
    J.validate();
    detail::require_time(t, "gamma_vac");
    if (t == 0.0 || J.lambda == 0.0) return 0.0;
    if (detail::closed_form(J, cfg)) {
        const double x = J.omega_c * t;
        return 0.5 * J.lambda * std::log1p(x * x);
    }
    return integrate_oscillatory(
        J, [&](double w) { return J.weighted(w, -2.0); }, TrigKind::one_minus_cosine, t, cfg);
}

/// Thermal decoherence  int J(w) [coth(beta w / 2) - 1] (1 - cos wt) / w^2 dw.
inline double gamma_th(const SpectralDensity& J, double beta, double t, const QuadratureConfig& cfg = {}) {
    J.validate();
    detail::require_beta(beta, "gamma_th");
    detail::require_time(t, "gamma_th");
    if (t == 0.0 || J.lambda == 0.0) return 0.0;
    // (coth - 1) adds a factor ~ exp(-beta w), shrinking the decay scale
    const double scale = 1.0 / (1.0 / J.omega_c + beta);
    return integrate_oscillatory(
        [&](double w) { return J.weighted(w, -2.0) * coth_minus_one(0.5 * beta * w); },
        TrigKind::one_minus_cosine, t, cfg, scale);
}

/// Bath-dynamics memory kernel  int J(w) sin(w tau) dw.
inline double kernel_sin(const SpectralDensity& J, double tau, const QuadratureConfig& cfg = {}) {
    J.validate();
    detail::require_time(tau, "kernel_sin");
    if (tau == 0.0 || J.lambda == 0.0) return 0.0;
    if (detail::closed_form(J, cfg)) {
        const double x = J.omega_c * tau;
        const double d = 1.0 + x * x;
        return 2.0 * J.lambda * J.omega_c * J.omega_c * x / (d * d);
    }
    return integrate_oscillatory(J, J, TrigKind::sine, tau, cfg);
}

/// Thermal memory kernel  (1/2) int J(w) coth(beta w / 2) cos(w tau) dw.
inline double kernel_cos_th(const SpectralDensity& J, double beta, double tau, const QuadratureConfig& cfg = {}) {
    J.validate();
    detail::require_beta(beta, "kernel_cos_th");
    detail::require_time(tau, "kernel_cos_th");
    if (J.lambda == 0.0) return 0.0;
    return 0.5 * integrate_oscillatory(
                     J, [&](double w) { return J(w) * coth_stable(0.5 * beta * w); }, TrigKind::cosine, tau, cfg);
}

/// Drive kernel  int J(w) cos(wt) / w dw  (the time derivative of Phi).
inline double drive(const SpectralDensity& J, double t, const QuadratureConfig& cfg = {}) {
    if (!(J.s > 0.0)) throw std::domain_error("drive: divergent at the origin for s <= 0");
    J.validate();
    detail::require_time(t, "drive");
    if (J.lambda == 0.0) return 0.0;
    if (detail::closed_form(J, cfg)) {
        const double x = J.omega_c * t;
        return J.lambda * J.omega_c / (1.0 + x * x);
    }
    return integrate_oscillatory(
        J, [&](double w) { return J.weighted(w, -1.0); }, TrigKind::cosine, t, cfg);
}

/// Vacuum decoherence rate  d gamma_vac / dt = int J(w) sin(wt) / w dw.
inline double decoherence_rate_vac(const SpectralDensity& J, double t, const QuadratureConfig& cfg = {}) {
    J.validate();
    detail::require_time(t, "decoherence_rate_vac");
    if (t == 0.0 || J.lambda == 0.0) return 0.0;
    if (detail::closed_form(J, cfg)) {
        const double x = J.omega_c * t;
        return J.lambda * J.omega_c * x / (1.0 + x * x);
    }
    return integrate_oscillatory(
        J, [&](double w) { return J.weighted(w, -1.0); }, TrigKind::sine, t, cfg);
}

/// Combined rate  d(gamma_vac + gamma_th)/dt = int J(w) coth(beta w / 2) sin(wt) / w dw.
inline double decoherence_rate(const SpectralDensity& J, double beta, double t, const QuadratureConfig& cfg = {}) {
    J.validate();
    detail::require_beta(beta, "decoherence_rate");
    detail::require_time(t, "decoherence_rate");
    if (t == 0.0 || J.lambda == 0.0) return 0.0;
    return integrate_oscillatory(
        J, [&](double w) { return J.weighted(w, -1.0) * coth_stable(0.5 * beta * w); }, TrigKind::sine, t, cfg);
}

/// F(t) = <sigma_3> int_0^t tau K_sin(tau) d tau.
inline double big_f(const SpectralDensity& J, double sigma3_mean, double t, const QuadratureConfig& cfg = {}) {
    J.validate();
    detail::require_time(t, "big_f");
    if (t == 0.0 || sigma3_mean == 0.0 || J.lambda == 0.0) return 0.0;
    if (detail::closed_form(J, cfg)) {
        const double x = J.omega_c * t;
        return J.lambda * sigma3_mean * (std::atan(x) - x / (1.0 + x * x));
    }
    const double inner = adaptive_simpson([&](double tau) { return tau * kernel_sin(J, tau, cfg); }, 0.0, t,
                                          10.0 * cfg.abs_tol, 24);
    return sigma3_mean * inner;
}

// Kernel samples on the uniform grid tau_j = j * step, j = 0..count.
struct KernelTable {
    double step{0.0};
    std::size_t count{0};
    std::vector<double> k_sin;
    std::vector<double> k_cos_th;
    std::vector<double> drive;

    double tau(std::size_t j) const noexcept { return static_cast<double>(j) * step; }
};

inline KernelTable build_kernel_table(const SpectralDensity& J, double beta, double step, std::size_t count,
                                      const QuadratureConfig& cfg = {}) {
    J.validate();
    cfg.validate();
    if (!(step > 0.0)) throw std::invalid_argument("build_kernel_table: step must be > 0");
    if (count < 1) throw std::invalid_argument("build_kernel_table: count must be >= 1");
    detail::require_beta(beta, "build_kernel_table");

    KernelTable table;
    table.step = step;
    table.count = count;
    table.k_sin.resize(count + 1);
    table.k_cos_th.resize(count + 1);
    table.drive.resize(count + 1);
    for (std::size_t j = 0; j <= count; ++j) {
        const double tau = table.tau(j);
        try {
            table.k_sin[j] = kernel_sin(J, tau, cfg);
            table.k_cos_th[j] = kernel_cos_th(J, beta, tau, cfg);
            table.drive[j] = drive(J, tau, cfg);
        } catch (const NonConvergence& e) {
            throw NonConvergence("kernel table entry j=" + std::to_string(j) + ": " + e.what(), e.estimate());
        }
    }
    return table;
}

// Debug export; columns j, tau, k_sin, k_cos_th, drive.
inline void write_kernel_table_csv(const KernelTable& table, std::ostream& out) {
    out << "j,tau,k_sin,k_cos_th,drive\n";
    for (std::size_t j = 0; j <= table.count; ++j)
        out << j << ',' << format_double(table.tau(j)) << ',' << format_double(table.k_sin[j]) << ','
            << format_double(table.k_cos_th[j]) << ',' << format_double(table.drive[j]) << '\n';
}

} // namespace dephase
