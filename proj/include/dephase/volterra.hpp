// volterra.hpp: Product-trapezoidal predictor-corrector for Volterra integro-differential equations
//
// Generic problem on a uniform grid t_n = n h:
//     y'(t) = a(t) y(t) + int_0^t K_d(t - t') [y(t) - y(t')] dt'
//                       + int_0^t [K_c(t - t') + g(t) g~(t')] y(t') dt'
// Both memory integrals use trapezoidal weights; the history-difference
// integrand vanishes at t' = t, so its endpoint weight is dropped.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dephase/dephasing_model.hpp"
#include "dephase/kernels.hpp"

namespace dephase {

enum class Scheme { trapezoidal_pece };

struct SolverConfig {
    double t_max{10.0};
    std::size_t n_steps{1000};
    Scheme scheme{Scheme::trapezoidal_pece};
    int corrector_iterations{2};

    double step() const noexcept { return t_max / static_cast<double>(n_steps); }

    void validate() const {
        if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("SolverConfig: t_max must be > 0");
        if (n_steps < 2) throw std::invalid_argument("SolverConfig: n_steps must be >= 2");
        if (corrector_iterations < 1) throw std::invalid_argument("SolverConfig: corrector_iterations must be >= 1");
    }
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::size_t step) : std::runtime_error(what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

struct CoherenceTrajectory {
    std::vector<double> times;
    std::vector<complex> values;
    std::vector<bool> watchdog; // |y_j| > |y_0| (1 + watchdog_margin)
    bool flagged{false};
    std::vector<DecoherenceBreakdown> breakdowns; // optional, same grid when present
};

inline constexpr double watchdog_margin = 1e-2;

// Kernels sampled at tau_j = j h (memory kernels) and t_n = n h (local and separable factors).
struct GridProblem {
    complex initial{1.0, 0.0};
    double step{0.0};
    std::vector<complex> local_rate;   // a(t_n)
    std::vector<complex> history_diff; // K_d(tau_j)
    std::vector<complex> convolution;  // K_c(tau_j)
    std::vector<complex> sep_left;     // g(t_n)
    std::vector<complex> sep_right;    // g~(t_n)
};

/// Trapezoidal history-difference sum  sum_{j<n} w_j K_d(t_n - t_j) [y_n - y_j].
/// Exactly zero when y_j == y_n for every j.
inline complex history_difference_term(const std::vector<complex>& kd, const std::vector<complex>& y, std::size_t n,
                                       double h) {
    complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        const double w = (j == 0) ? 0.5 * h : h;
        acc += w * kd[n - j] * (y[n] - y[j]);
    }
    return acc;
}

inline CoherenceTrajectory solve_volterra(const GridProblem& prob, const SolverConfig& cfg) {
    cfg.validate();
    const std::size_t N = cfg.n_steps;
    const double h = prob.step;
    auto check = [&](const std::vector<complex>& v, const char* name) {
        if (v.size() < N + 1)
            throw std::invalid_argument(std::string("solve_volterra: ") + name + " has fewer than n_steps + 1 samples");
    };
    check(prob.local_rate, "local_rate");
    check(prob.history_diff, "history_diff");
    check(prob.convolution, "convolution");
    check(prob.sep_left, "sep_left");
    check(prob.sep_right, "sep_right");

    CoherenceTrajectory traj;
    traj.times.resize(N + 1);
    traj.values.assign(N + 1, complex{});
    traj.watchdog.assign(N + 1, false);
    for (std::size_t n = 0; n <= N; ++n) traj.times[n] = static_cast<double>(n) * h;

    auto& y = traj.values;
    y[0] = prob.initial;

    // f_n = a_n y_n + D_n(y) + C_n + (h/2) [K_c(0) + g_n g~_n] y_n,
    // with C_n the convolution/separable history over j < n (fixed within a step).
    std::vector<complex> f(N + 1);
    f[0] = prob.local_rate[0] * y[0];
    complex sep_sum{0.0, 0.0}; // sum_{j<n} w_j g~_j y_j, extended by one node per step

    for (std::size_t n = 1; n <= N; ++n) {
        sep_sum += ((n == 1) ? 0.5 * h : h) * prob.sep_right[n - 1] * y[n - 1];
        complex history{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double w = (j == 0) ? 0.5 * h : h;
            history += w * prob.convolution[n - j] * y[j];
        }
        const complex fixed = history + prob.sep_left[n] * sep_sum;
        const complex endpoint =
            prob.local_rate[n] + 0.5 * h * (prob.convolution[0] + prob.sep_left[n] * prob.sep_right[n]);

        if (!(std::abs(0.5 * h * endpoint) < 1.0))
            throw SolverError("corrector iteration cannot contract at step " + std::to_string(n) +
                                  " (|h/2 * local coefficient| >= 1)",
                              n);

        auto rhs = [&]() { return endpoint * y[n] + fixed + history_difference_term(prob.history_diff, y, n, h); };

        y[n] = y[n - 1] + h * f[n - 1]; // predictor
        for (int it = 0; it < cfg.corrector_iterations; ++it) {
            f[n] = rhs();
            y[n] = y[n - 1] + 0.5 * h * (f[n - 1] + f[n]);
        }
        f[n] = rhs();
        if (!std::isfinite(y[n].real()) || !std::isfinite(y[n].imag()))
            throw SolverError("non-finite solution at step " + std::to_string(n), n);
    }

    const double bound = std::abs(y[0]) * (1.0 + watchdog_margin);
    for (std::size_t n = 0; n <= N; ++n) {
        traj.watchdog[n] = std::abs(y[n]) > bound;
        traj.flagged = traj.flagged || traj.watchdog[n];
    }
    return traj;
}

using TimeFunction = std::function<complex(double)>;

/// Tabulates the kernel functions on the grid and integrates the generic equation.
inline CoherenceTrajectory solve_generic_volterra(complex initial, const TimeFunction& local_rate,
                                                  const TimeFunction& conv_kernel,
                                                  const TimeFunction& history_diff_kernel,
                                                  const std::pair<TimeFunction, TimeFunction>& separable,
                                                  const SolverConfig& cfg) {
    cfg.validate();
    GridProblem prob;
    prob.initial = initial;
    prob.step = cfg.step();
    const std::size_t N = cfg.n_steps;
    auto sample = [&](const TimeFunction& fn) {
        std::vector<complex> v(N + 1, complex{});
        if (fn)
            for (std::size_t j = 0; j <= N; ++j) v[j] = fn(static_cast<double>(j) * prob.step);
        return v;
    };
    prob.local_rate = sample(local_rate);
    prob.convolution = sample(conv_kernel);
    prob.history_diff = sample(history_diff_kernel);
    prob.sep_left = sample(separable.first);
    prob.sep_right = sample(separable.second);
    return solve_volterra(prob, cfg);
}

// How the thermal/correlation term of the kinetic equation is normalized.
//   markov_consistent: kernel int J coth cos, separable coefficient (A^2 - 1);
//     its Markovian limit reproduces gamma_vac + gamma_th + gamma_cor.
//   as_printed: kernel (1/2) int J coth cos, separable coefficient 2 (A^2 - 1).
enum class KineticNormalization { markov_consistent, as_printed };

struct KineticOptions {
    bool bath_dynamics{true};
    KineticNormalization normalization{KineticNormalization::markov_consistent};
};

/// Grid form of the coherence kinetic equation:
///   y' = i A drive(t) y - i <s3> int K_sin(t-t') [y(t) - y(t')] dt'
///        - int { c_k K_cos_th(t-t') - c_s (A^2 - 1) drive(t) drive(t') } y(t') dt'.
inline GridProblem kinetic_problem(const QubitBathParams& p, const KernelTable& table, const KineticOptions& opts) {
    const double a = a_init(p);
    const bool printed = opts.normalization == KineticNormalization::as_printed;
    const double kernel_factor = printed ? 1.0 : 2.0;
    const double separable_factor = printed ? 2.0 : 1.0;
    const complex i{0.0, 1.0};

    GridProblem prob;
    prob.initial = p.coherence0();
    prob.step = table.step;
    const std::size_t n = table.count + 1;
    prob.local_rate.resize(n);
    prob.history_diff.resize(n);
    prob.convolution.resize(n);
    prob.sep_left.resize(n);
    prob.sep_right.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        prob.local_rate[j] = i * a * table.drive[j];
        prob.history_diff[j] = opts.bath_dynamics ? -i * p.sigma3_mean * table.k_sin[j] : complex{};
        prob.convolution[j] = -kernel_factor * table.k_cos_th[j];
        prob.sep_left[j] = separable_factor * (a * a - 1.0) * table.drive[j];
        prob.sep_right[j] = table.drive[j];
    }
    return prob;
}

inline CoherenceTrajectory solve_full_equation(const QubitBathParams& p, const SolverConfig& cfg,
                                               const QuadratureConfig& qcfg = {}, const KineticOptions& opts = {}) {
    p.validate();
    cfg.validate();
    const KernelTable table = build_kernel_table(p.spectral, p.beta, cfg.step(), cfg.n_steps, qcfg);
    return solve_volterra(kinetic_problem(p, table, opts), cfg);
}

struct TrajectoryErrors {
    double linf_modulus{0.0};
    double l2_modulus{0.0};
    double linf_phase{0.0};
    double l2_phase{0.0};
};

/// L-infinity and trapezoid-weighted discrete L2 norms of the modulus and phase differences.
inline TrajectoryErrors compare_trajectories(const CoherenceTrajectory& a, const CoherenceTrajectory& b) {
    if (a.times.size() != b.times.size() || a.values.size() != a.times.size() || b.values.size() != b.times.size())
        throw std::invalid_argument("compare_trajectories: grid mismatch (different lengths)");
    for (std::size_t j = 0; j < a.times.size(); ++j)
        if (std::abs(a.times[j] - b.times[j]) > 1e-12 * std::max(1.0, std::abs(a.times[j])))
            throw std::invalid_argument("compare_trajectories: grid mismatch at index " + std::to_string(j));

    TrajectoryErrors e;
    const std::size_t n = a.times.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double dm = std::abs(std::abs(a.values[j]) - std::abs(b.values[j]));
        const double dp = (a.values[j] == b.values[j]) ? 0.0 : std::abs(std::arg(a.values[j] * std::conj(b.values[j])));
        double w = 0.0;
        if (n > 1) {
            const double left = j > 0 ? a.times[j] - a.times[j - 1] : 0.0;
            const double right = j + 1 < n ? a.times[j + 1] - a.times[j] : 0.0;
            w = 0.5 * (left + right);
        }
        e.linf_modulus = std::max(e.linf_modulus, dm);
        e.linf_phase = std::max(e.linf_phase, dp);
        e.l2_modulus += w * dm * dm;
        e.l2_phase += w * dp * dp;
    }
    e.l2_modulus = std::sqrt(e.l2_modulus);
    e.l2_phase = std::sqrt(e.l2_phase);
    return e;
}

} // namespace dephase
