// quadrature.hpp: Adaptive panel quadrature and semi-infinite oscillatory integrals

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dephase {

struct QuadratureConfig {
    double abs_tol{1e-10};
    double rel_tol{1e-10};
    int max_refinements{200};   // bisections allowed per adaptive panel integration
    int tail_segments{4096};    // half-periods summed directly before tail acceleration
    bool use_closed_forms{true}; // Ohmic (s = 1) fast paths in the kernel layer
    bool verbose{false};        // log value/error estimates to std::clog

    void validate() const {
        if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: abs_tol must be > 0");
        if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: rel_tol must be > 0");
        if (max_refinements < 1) throw std::invalid_argument("QuadratureConfig: max_refinements must be >= 1");
        if (tail_segments < 2) throw std::invalid_argument("QuadratureConfig: tail_segments must be >= 2");
    }
};

struct QuadResult {
    double value{0.0};
    double error{0.0};
    double l1{0.0}; // integral of |f|, used for stopping decisions
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double estimate)
        : std::runtime_error(what + " (achieved error estimate " + std::to_string(estimate) + ")"),
          estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

enum class TrigKind { cosine, sine, one_minus_cosine };

namespace detail {

// Below this fraction of the frequency scale the trig factor of (1 - cos wt)
// is replaced by its leading term (wt)^2 / 2.
inline constexpr double small_omega_fraction = 1e-8;

struct Panel {
    double a, b;
    QuadResult r;
};

template <class F>
QuadResult kronrod_panel(F& f, double a, double b) {
    QuadResult r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &r.error, &r.l1);
    // with max_depth 0 the reported error is on the reference interval [-1, 1]
    r.error *= 0.5 * (b - a);
    return r;
}

inline double trig_factor(TrigKind kind, double omega, double t, double omega_min) {
    switch (kind) {
        case TrigKind::cosine: return std::cos(omega * t);
        case TrigKind::sine: return std::sin(omega * t);
        case TrigKind::one_minus_cosine:
            if (omega < omega_min) return 0.5 * (omega * t) * (omega * t);
            {
                const double h = std::sin(0.5 * omega * t);
                return 2.0 * h * h;
            }
    }
    return 0.0;
}

} // namespace detail

// Globally adaptive Gauss-Kronrod (G10/K21) on [a, b]: the panel with the largest
// error estimate is bisected until the summed estimate meets the tolerance.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol, int max_refinements) {
    if (a == b) return {};
    auto worse = [](const detail::Panel& x, const detail::Panel& y) { return x.r.error < y.r.error; };

    std::vector<detail::Panel> heap;
    heap.push_back({a, b, detail::kronrod_panel(f, a, b)});
    QuadResult total = heap.front().r;

    for (int refinements = 0;; ++refinements) {
        if (total.error <= std::max(abs_tol, rel_tol * std::abs(total.value))) break;
        if (refinements >= max_refinements)
            throw NonConvergence("adaptive quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                                     "] exceeded max_refinements",
                                 total.error);
        std::pop_heap(heap.begin(), heap.end(), worse);
        const detail::Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw NonConvergence("adaptive quadrature: panel width reached machine resolution", total.error);
        detail::Panel left{worst.a, mid, detail::kronrod_panel(f, worst.a, mid)};
        detail::Panel right{mid, worst.b, detail::kronrod_panel(f, mid, worst.b)};

        // Recompute sums from the heap to avoid drift from repeated subtraction.
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), worse);
        total = {};
        for (const auto& p : heap) {
            total.value += p.r.value;
            total.error += p.r.error;
            total.l1 += p.r.l1;
        }
    }
    return total;
}

template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadratureConfig& cfg) {
    return integrate_adaptive(std::forward<F>(f), a, b, cfg.abs_tol, cfg.rel_tol, cfg.max_refinements);
}

// Integral of g over [a, inf) for a g that decays at least exponentially on the
// frequency scale `scale`. Panels of width 2*scale are accumulated until two
// consecutive panels past a + 10*scale carry negligible absolute weight.
template <class G>
QuadResult integrate_decaying_tail(G&& g, double a, double scale, const QuadratureConfig& cfg) {
    const double width = 2.0 * scale;
    const double min_extent = a + 10.0 * scale;
    const int max_panels = std::max(cfg.tail_segments, 64);

    QuadResult total;
    int quiet = 0;
    for (int k = 0; k < max_panels; ++k) {
        const double lo = a + k * width;
        const double hi = lo + width;
        const QuadResult p = integrate_adaptive(g, lo, hi, 0.1 * cfg.abs_tol, cfg.rel_tol, cfg.max_refinements);
        total.value += p.value;
        total.error += p.error;
        total.l1 += p.l1;
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total.value));
        quiet = (hi >= min_extent && p.l1 < 0.25 * tol) ? quiet + 1 : 0;
        if (quiet >= 2) return total;
    }
    throw NonConvergence("semi-infinite quadrature did not decay within " + std::to_string(max_panels) + " panels",
                         total.error);
}

namespace detail {

// Repeated averaging of partial sums (Euler transform of the alternating tail).
// Returns the accelerated limit and the spread of the final two levels.
inline std::pair<double, double> euler_accelerate(std::vector<double> partial) {
    double previous = partial.back();
    while (partial.size() > 1) {
        previous = partial.back();
        for (std::size_t i = 0; i + 1 < partial.size(); ++i) partial[i] = 0.5 * (partial[i] + partial[i + 1]);
        partial.pop_back();
    }
    return {partial.front(), std::abs(partial.front() - previous)};
}

// Sum of f(w) trig(wt) over [start, inf) split at consecutive zeros of the trig
// factor (cosine or sine only). Segments past `tail_segments` are folded with
// Euler acceleration.
template <class F>
QuadResult oscillatory_from(F& f, TrigKind kind, double t, double start, double scale, const QuadratureConfig& cfg) {
    const double half_period = std::numbers::pi / t;
    const double phase = (kind == TrigKind::cosine) ? 0.5 : 0.0;
    // first zero strictly above `start`
    double k0 = std::floor(start / half_period - phase) + 1.0;
    auto zero = [&](double k) { return (k + phase) * half_period; };

    auto g = [&](double w) { return f(w) * trig_factor(kind, w, t, 0.0); };
    const double min_extent = start + 10.0 * scale;

    QuadResult total;
    double lo = start;
    int quiet = 0;
    for (int k = 0; k < cfg.tail_segments; ++k) {
        const double hi = zero(k0 + k);
        const QuadResult p = integrate_adaptive(g, lo, hi, 0.1 * cfg.abs_tol, cfg.rel_tol, cfg.max_refinements);
        total.value += p.value;
        total.error += p.error;
        total.l1 += p.l1;
        lo = hi;
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total.value));
        quiet = (hi >= min_extent && p.l1 < 0.25 * tol) ? quiet + 1 : 0;
        if (quiet >= 2) return total;
    }

    // Alternating tail: accelerate the partial sums of the next block of half-periods.
    constexpr int block = 24;
    std::vector<double> partial;
    partial.reserve(block);
    double running = total.value;
    for (int k = 0; k < block; ++k) {
        const double hi = zero(k0 + cfg.tail_segments + k);
        const QuadResult p = integrate_adaptive(g, lo, hi, 0.1 * cfg.abs_tol, cfg.rel_tol, cfg.max_refinements);
        running += p.value;
        total.error += p.error;
        total.l1 += p.l1;
        partial.push_back(running);
        lo = hi;
    }
    const auto [limit, spread] = euler_accelerate(std::move(partial));
    total.value = limit;
    total.error += spread;
    if (total.error > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total.value)))
        throw NonConvergence("oscillatory tail acceleration did not meet tolerance after " +
                                 std::to_string(cfg.tail_segments) + " segments",
                             total.error);
    return total;
}

} // namespace detail

// Value and error estimate of  int_0^inf f(w) trig(w t) dw,  trig in {cos, sin, 1 - cos}.
// `scale` is the frequency scale on which f decays exponentially.
template <class F>
QuadResult integrate_oscillatory_estimate(F&& f, TrigKind kind, double t, const QuadratureConfig& cfg,
                                          double scale = 1.0) {
    if (t < 0.0) throw std::domain_error("integrate_oscillatory: t must be >= 0");
    if (!(scale > 0.0)) throw std::invalid_argument("integrate_oscillatory: scale must be > 0");
    if (t == 0.0 && kind != TrigKind::cosine) return {};

    const double omega_min = detail::small_omega_fraction * scale;
    auto g = [&](double w) { return f(w) * detail::trig_factor(kind, w, t, omega_min); };

    QuadResult r;
    if (t * scale < 1.0) {
        r = integrate_decaying_tail(g, 0.0, scale, cfg);
    } else if (kind != TrigKind::one_minus_cosine) {
        r = detail::oscillatory_from(f, kind, t, 0.0, scale, cfg);
    } else {
        // 1 - cos is non-negative with zeros at 2 k pi / t; sum whole periods directly,
        // then split the remainder as  int f  -  int f cos  past the last period.
        const double period = 2.0 * std::numbers::pi / t;
        const double min_extent = 10.0 * scale;
        double lo = 0.0;
        int quiet = 0;
        bool converged = false;
        for (int k = 1; k <= cfg.tail_segments; ++k) {
            const double hi = k * period;
            const QuadResult p = integrate_adaptive(g, lo, hi, 0.1 * cfg.abs_tol, cfg.rel_tol, cfg.max_refinements);
            r.value += p.value;
            r.error += p.error;
            r.l1 += p.l1;
            lo = hi;
            const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(r.value));
            quiet = (hi >= min_extent && p.l1 < 0.25 * tol) ? quiet + 1 : 0;
            if (quiet >= 2) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            const QuadResult plain = integrate_decaying_tail(f, lo, scale, cfg);
            const QuadResult wave = detail::oscillatory_from(f, TrigKind::cosine, t, lo, scale, cfg);
            r.value += plain.value - wave.value;
            r.error += plain.error + wave.error;
            r.l1 += plain.l1 + wave.l1;
        }
    }
    if (cfg.verbose)
        std::clog << "[quadrature] t=" << t << " value=" << r.value << " error_estimate=" << r.error << '\n';
    return r;
}

template <class F>
double integrate_oscillatory(F&& f, TrigKind kind, double t, const QuadratureConfig& cfg, double scale = 1.0) {
    return integrate_oscillatory_estimate(std::forward<F>(f), kind, t, cfg, scale).value;
}

// Adaptive Simpson on [a, b] with the usual |S2 - S1| / 15 acceptance test.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 40) {
    if (a == b) return 0.0;
    struct Rec {
        F& f;
        int max_depth;
        double run(double a, double fa, double m, double fm, double b, double fb, double whole, double tol,
                   int depth) {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (depth >= max_depth || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
            return run(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
                   run(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
        }
    };
    Rec rec{f, max_depth};
    // start from two Simpson panels; a single top-level panel can miss structure
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double q1 = 0.5 * (a + m), q3 = 0.5 * (m + b);
    const double fq1 = f(q1), fq3 = f(q3);
    const double left = (m - a) / 6.0 * (fa + 4.0 * fq1 + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * fq3 + fb);
    return rec.run(a, fa, q1, fq1, m, fm, left, 0.5 * tol, 1) + rec.run(m, fm, q3, fq3, b, fb, right, 0.5 * tol, 1);
}

// Running integral of uniformly sampled values: Simpson pairs at even nodes,
// the three-point half-panel rule h/12 (5 f0 + 8 f1 - f2) at odd nodes.
inline std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    for (std::size_t i = 2; i < n; i += 2) out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    for (std::size_t i = 1; i < n; i += 2) {
        if (i + 1 < n)
            out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
        else
            out[i] = out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    }
    return out;
}

} // namespace dephase
