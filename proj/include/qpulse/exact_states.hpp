#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qpulse/fock.hpp"
#include "qpulse/jcm.hpp"
#include "qpulse/math_util.hpp"

namespace qpulse {

// A field state produced by one of the recursion builders, together with the
// interaction time that makes the pulse exact and the residual boundary leak
// (amplitude) left by truncating the ladder at an integer rung.
struct RecursionBuild {
    FieldState state;
    double tau = 0.0; // in Omega_0^(m) t units
    PulseSpec spec;
    int photon_order_m = 1;
    int n_boundary = 0;        // n_max for ground start, n_min for excited start
    double boundary_leak = 0.0; // |psi_top sin(Om_top tau/2)| after normalization
    bool exact_truncation = true;
};

namespace detail {

inline void check_theta_open_interval(double theta, const char* who) {
    if (!(theta > 0.0 && theta < pi))
        throw std::domain_error(std::string(who) +
                                ": theta must lie strictly inside (0, pi); "
                                "theta = l*pi pulses are Fock states");
}

} // namespace detail

// Field state enacting an exact theta pulse on an atom starting in |g>,
// psi_{n+m} = i tan(theta/2) cos(Om_{n-m} tau/2)/sin(Om_n tau/2) psi_n,
// seeded at psi_{n_max} and recursed downward so the vanishing sin at the
// truncation rung never appears in a denominator. Interaction time
// Om_{n_max-m} tau = pi. For m > 1 the support is the single residue class
// n = n_max (mod m).
inline RecursionBuild build_ground(double theta, int n_max, int m = 1) {
    detail::check_theta_open_interval(theta, "build_ground");
    if (m < 1) throw std::domain_error("build_ground: m >= 1");
    if (n_max < m) throw std::domain_error("build_ground: n_max >= m required");

    const double tau = pi / detail::om_m(n_max - m, m);
    const double t2 = std::tan(theta / 2);

    std::vector<cplx> amps(static_cast<std::size_t>(n_max) + 1, cplx{});
    amps[static_cast<std::size_t>(n_max)] = 1.0;
    for (int n = n_max - m; n >= 0; n -= m) {
        const double num = std::sin(detail::om_m(n, m) * tau / 2);
        const cplx den = cplx(0, 1) * t2 * std::cos(detail::om_m(n - m, m) * tau / 2);
        amps[n] = amps[n + m] * num / den;
        const double a = std::abs(amps[n]);
        if (a > 1e100) {
            for (auto& v : amps) v /= a;
        }
    }
    detail::normalize_and_fix_phase(amps);

    RecursionBuild out;
    out.state.amps = std::move(amps);
    out.tau = tau;
    out.spec = PulseSpec{theta, 0, AtomStart::Ground};
    out.photon_order_m = m;
    out.n_boundary = n_max;
    out.boundary_leak = 0.0;
    out.exact_truncation = true;
    return out;
}

// Field state enacting an exact theta pulse on an atom starting in |e>,
// psi_{n+m} = -i tan(theta/2) sin(Om_n tau/2)/cos(Om_{n+m} tau/2) psi_n,
// seeded at psi_{n_min} with Om_{n_min} tau = (2k+1) pi.
//
// For m = 1 the ladder terminates exactly at n_top = 4 n_min + 3, where the
// highest manifold completes a (4k+2) pi pulse. For m > 1 no integer rung
// satisfies the upper boundary condition exactly (the Rabi ratios are
// irrational), so the ladder is extended until the residual boundary leak
// |psi_n sin(Om_n tau/2)| / ||psi|| underflows or a step cap is hit, and is
// then cut at the rung where that leak was smallest. The achieved leak is
// reported in the result.
inline RecursionBuild build_excited(double theta, int n_min, int k = 0, int m = 1,
                                    long max_steps = 600000) {
    detail::check_theta_open_interval(theta, "build_excited");
    if (m < 1) throw std::domain_error("build_excited: m >= 1");
    if (n_min < 0) throw std::domain_error("build_excited: n_min >= 0");
    if (k < 0) throw std::domain_error("build_excited: k >= 0");

    const double tau = (2 * k + 1) * pi / detail::om_m(n_min, m);
    const double t2 = std::tan(theta / 2);

    std::vector<cplx> ladder; // ladder[i] = psi_{n_min + i m}
    ladder.reserve(m == 1 ? static_cast<std::size_t>(3 * n_min + 4) : 4096);
    ladder.push_back(cplx{1.0, 0.0});

    bool exact = false;
    long best_i = 0;

    if (m == 1) {
        const int n_top = 4 * n_min + 3;
        for (int n = n_min; n < n_top; ++n) {
            const double s = std::sin(detail::om_m(n, 1) * tau / 2);
            const double c = std::cos(detail::om_m(n + 1, 1) * tau / 2);
            if (std::abs(c) < 1e-12)
                throw std::domain_error(
                    "build_excited: interior resonance (cos factor vanishes); "
                    "no finite build for this (n_min, k)");
            ladder.push_back(ladder.back() * cplx(0, -1) * t2 * (s / c));
        }
        exact = true;
        best_i = static_cast<long>(ladder.size()) - 1;
    } else {
        // Pass 1: walk the magnitude recursion to find the rung where the
        // boundary leak |psi_n sin(Om_n tau/2)| / ||psi|| is smallest. One
        // sin/cos pair per rung; the pair for rung i+1 is reused as the
        // numerator of step i+1.
        double amp = 1.0, norm2 = 1.0;
        double s_cur = std::sin(detail::om_m(n_min, m) * tau / 2);
        double best_leak = std::abs(s_cur);
        {
            long i = 0;
            int n = n_min;
            while (i < max_steps) {
                const double x_next = detail::om_m(n + m, m) * tau / 2;
                const double c_next = std::cos(x_next);
                if (c_next == 0.0) break;
                const double s_next = std::sin(x_next);
                amp *= t2 * std::abs(s_cur / c_next);
                ++i;
                n += m;
                norm2 += amp * amp;
                const double leak = amp * std::abs(s_next) / std::sqrt(norm2);
                if (leak < best_leak) {
                    best_leak = leak;
                    best_i = i;
                }
                if (leak < 1e-16) break;
                if (amp > 1e140) {
                    amp /= 1e140;
                    norm2 /= 1e280;
                }
                s_cur = s_next;
            }
        }
        // Pass 2: rebuild the kept prefix with phases; entries far below the
        // prefix peak may underflow, which is harmless at this scale.
        ladder.reserve(static_cast<std::size_t>(best_i) + 1);
        s_cur = std::sin(detail::om_m(n_min, m) * tau / 2);
        int n = n_min;
        for (long i = 0; i < best_i; ++i) {
            const double x_next = detail::om_m(n + m, m) * tau / 2;
            ladder.push_back(ladder.back() * cplx(0, -1) * t2 *
                             (s_cur / std::cos(x_next)));
            s_cur = std::sin(x_next);
            n += m;
            if (std::abs(ladder.back()) > 1e140) {
                for (auto& v : ladder) v /= 1e140;
            }
        }
    }

    std::vector<cplx> amps(static_cast<std::size_t>(n_min) + best_i * m + 1, cplx{});
    for (long i = 0; i <= best_i; ++i)
        amps[static_cast<std::size_t>(n_min) + i * m] = ladder[static_cast<std::size_t>(i)];
    detail::normalize_and_fix_phase(amps);

    RecursionBuild out;
    out.state.amps = std::move(amps);
    out.tau = tau;
    out.spec = PulseSpec{theta, k, AtomStart::Excited};
    out.photon_order_m = m;
    out.n_boundary = n_min;
    const int n_top = n_min + static_cast<int>(best_i) * m;
    out.boundary_leak = std::abs(out.state.amps.back()) *
                        std::abs(std::sin(detail::om_m(n_top, m) * tau / 2));
    out.exact_truncation = exact;
    return out;
}

// Residual of the two truncation conditions for the highest-excitation
// manifold of the detuned ladder, minimized over the supplied tau grid.
// Both conditions vanish simultaneously only at delta = 0.
inline double detuned_leak(int n_max, double delta_ratio,
                           const std::vector<double>& tau_grid) {
    if (n_max < 1) throw std::domain_error("detuned_leak: n_max >= 1");
    if (tau_grid.empty()) throw std::domain_error("detuned_leak: empty tau grid");
    const double dr = delta_ratio;
    const double om = std::sqrt(n_max + dr * dr); // Om(n_max - 1)
    const double alpha = std::atan2(std::sqrt(static_cast<double>(n_max)), dr);
    const double asym = std::sin(alpha / 2) * std::sin(alpha / 2) -
                        std::cos(alpha / 2) * std::cos(alpha / 2);
    double best = std::numeric_limits<double>::infinity();
    for (const double tau : tau_grid) {
        const double r1 = std::cos(om * tau / 2);
        const double r2 = std::sin(om * tau / 2) * asym;
        best = std::min(best, std::sqrt(r1 * r1 + r2 * r2));
    }
    return best;
}

} // namespace qpulse
