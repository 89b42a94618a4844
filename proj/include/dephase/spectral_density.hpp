// spectral_density.hpp: Power-law bath spectral density with exponential cutoff

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "dephase/quadrature.hpp"

namespace dephase {

// J(w) = lambda * Omega^(1-s) * w^s * exp(-w / Omega)
struct SpectralDensity {
    double lambda{0.0};  // dimensionless coupling strength
    double omega_c{1.0}; // cutoff frequency Omega
    double s{1.0};       // ohmicity exponent (sub-Ohmic < 1 < super-Ohmic)

    void validate() const {
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("SpectralDensity: lambda must be finite and >= 0");
        if (!(omega_c > 0.0) || !std::isfinite(omega_c))
            throw std::invalid_argument("SpectralDensity: omega_c must be finite and > 0");
        if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("SpectralDensity: s must be finite and > 0");
    }

    bool ohmic() const noexcept { return s == 1.0; }

    // lambda * Omega^(1-s) * w^(s+shift) * exp(-w/Omega), for w > 0. Folding the
    // 1/w^k factors into the power keeps the small-w behaviour exact.
    double weighted(double w, double shift) const noexcept {
        if (lambda == 0.0) return 0.0;
        return lambda * std::pow(omega_c, 1.0 - s) * std::pow(w, s + shift) * std::exp(-w / omega_c);
    }

    double operator()(double w) const noexcept {
        if (!(w > 0.0)) return 0.0;
        return weighted(w, 0.0);
    }
};

inline double evaluate(const SpectralDensity& J, double omega) {
    if (omega < 0.0 || std::isnan(omega))
        throw std::domain_error("spectral density: omega must be >= 0 (got " + std::to_string(omega) + ")");
    return J(omega);
}

// int_0^inf f(w) trig(w t) dw with the cutoff of J as the frequency scale.
template <class F>
double integrate_oscillatory(const SpectralDensity& J, F&& f, TrigKind kind, double t, const QuadratureConfig& cfg) {
    return integrate_oscillatory(std::forward<F>(f), kind, t, cfg, J.omega_c);
}

} // namespace dephase
