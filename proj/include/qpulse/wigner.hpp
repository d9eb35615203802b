#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qpulse/fock.hpp"
#include "qpulse/math_util.hpp"

namespace qpulse {

struct PhaseGrid {
    double extent = 0.0; // max |alpha|
    int n_radial = 96;
    int n_angular = 128;
};

inline PhaseGrid default_phase_grid(const FieldState& st) {
    const Moments m = moments(st);
    return PhaseGrid{std::sqrt(std::max(m.mean, 0.0)) + 5.0, 96, 128};
}

namespace detail {

// Accumulates sum_{m,n} psi_m^* psi_n (-1)^n <m|D(beta)|n> using the
// number-basis kernel <m|D(beta)|n> = sqrt(n!/m!) beta^{m-n} e^{-|b|^2/2}
// L_n^{(m-n)}(|b|^2) for m >= n. The associated Laguerre recurrence runs
// upward per diagonal in a mantissa/exponent representation so large
// |beta|^2 never overflows.
inline cplx displaced_parity_expectation(const FieldState& st, cplx beta) {
    const int N = st.n_max();
    const double x = std::norm(beta);
    const double lb = 0.5 * std::log(x > 0.0 ? x : 1.0); // log |beta|
    const cplx phase = (x > 0.0) ? beta / std::abs(beta) : cplx{1.0, 0.0};
    static const double ln_block = 300.0 * std::log(10.0);

    cplx acc{};
    cplx phase_a{1.0, 0.0};  // phase^a
    cplx phase_ac{1.0, 0.0}; // (-conj(phase))^a
    double half_lg_a = 0.0;  // lgamma(a+1)/2
    for (int a = 0; a <= N; ++a) {
        if (a > 0 && x == 0.0) break; // D(0) is diagonal
        // prefactor w_k = sqrt(k!/(k+a)!) |beta|^a e^{-x/2}, advanced
        // multiplicatively; both w and the Laguerre value carry a shared
        // power-of-10^300 exponent so large x never overflows.
        const double logw0 = -half_lg_a + a * (x > 0.0 ? lb : 0.0) - x / 2;
        long wexp = static_cast<long>(std::ceil(logw0 / ln_block));
        double wm = std::exp(logw0 - wexp * ln_block); // in (1e-300, 1]
        double Lkm1 = 0.0, Lk = 1.0;
        long lexp = 0;
        for (int k = 0; k + a <= N; ++k) {
            const int mrow = k + a;
            const long e = wexp + lexp;
            // |<m|D|n>| <= 1, so only |e| <= 1 can contribute above 1e-50
            double kern = 0.0;
            if (e == 0)
                kern = wm * Lk;
            else if (e == -1)
                kern = wm * (Lk * 1e-300);
            else if (e == 1)
                kern = (wm * Lk) * 1e300;
            if (kern != 0.0) {
                const double sgn_n = (k % 2 == 0) ? 1.0 : -1.0;
                const double sgn_m = (mrow % 2 == 0) ? 1.0 : -1.0;
                acc += std::conj(st.amps[mrow]) * st.amps[k] * sgn_n * kern * phase_a;
                if (a > 0)
                    acc += std::conj(st.amps[k]) * st.amps[mrow] * sgn_m * kern * phase_ac;
            }
            // (k+1) L_{k+1}^{(a)} = (2k+1+a-x) L_k - (k+a) L_{k-1}
            const double Lnext = ((2.0 * k + 1.0 + a - x) * Lk - (k + a) * Lkm1) / (k + 1.0);
            Lkm1 = Lk;
            Lk = Lnext;
            if (std::abs(Lk) > 1e250) {
                Lk *= 1e-300;
                Lkm1 *= 1e-300;
                ++lexp;
            } else if (std::abs(Lk) < 1e-50 && std::abs(Lk) > 0.0) {
                Lk *= 1e300;
                Lkm1 *= 1e300;
                --lexp;
            }
            wm *= std::sqrt((k + 1.0) / (k + 1.0 + a));
            if (wm < 1e-280) {
                wm *= 1e300;
                --wexp;
            }
        }
        phase_a *= phase;
        phase_ac *= -std::conj(phase);
        half_lg_a += 0.5 * std::log(a + 1.0);
    }
    return acc;
}

} // namespace detail

// W(alpha) = (2/pi) <psi| D(2 alpha) P |psi>; real for any state.
inline double wigner_at(const FieldState& st, cplx alpha) {
    const cplx v = detail::displaced_parity_expectation(st, 2.0 * alpha);
    return (2.0 / pi) * v.real();
}

struct NegativityResult {
    double delta = 0.0;     // integral |W| - 1, clamped at 0 near zero
    double raw = 0.0;       // unclamped value
    double total = 0.0;     // integral W (normalization check)
    bool below_resolution = false; // |raw| under 1e-9: reported as 0
};

// Integrated Wigner negativity, delta = int |W| d^2alpha - 1. The radial
// integrand |W(r e^{i phi})| r has kinks at the zeros of W, so each ray is
// first scanned for sign changes (n_radial samples, bisection-refined) and
// then integrated by Gauss-Legendre per smooth segment. Angular direction
// uses the uniform trapezoid rule. Rays are reduced in deterministic order.
inline NegativityResult negativity_full(const FieldState& st, const PhaseGrid& grid) {
    const Moments mom = moments(st);
    if (grid.extent + 1e-12 < std::sqrt(std::max(mom.mean, 0.0)) + 5.0)
        throw std::domain_error("negativity: extent must cover sqrt(nbar) + 5");
    if (grid.n_radial < 64 || grid.n_angular < 64)
        throw std::domain_error("negativity: n_radial and n_angular must be >= 64");

    static constexpr int seg_order = 24;
    std::vector<double> gx, gw;
    gauss_legendre(seg_order, gx, gw);
    const int n_scan = std::max(grid.n_radial, 8 * (st.n_max() + 1));

    double absint = 0.0, tot = 0.0;
    for (int j = 0; j < grid.n_angular; ++j) {
        const double ph = 2.0 * pi * j / grid.n_angular;
        auto W = [&](double r) { return wigner_at(st, std::polar(r, ph)); };

        std::vector<double> cuts{0.0};
        double r_prev = 0.0, w_prev = W(0.0);
        for (int i = 1; i <= n_scan; ++i) {
            const double r = grid.extent * i / n_scan;
            const double w_here = W(r);
            if ((w_prev < 0.0) != (w_here < 0.0)) {
                double a = r_prev, b = r, wa = w_prev;
                for (int it = 0; it < 60 && b - a > 1e-14 * grid.extent; ++it) {
                    const double mid = 0.5 * (a + b);
                    const double wm = W(mid);
                    if ((wa < 0.0) == (wm < 0.0)) {
                        a = mid;
                        wa = wm;
                    } else {
                        b = mid;
                    }
                }
                cuts.push_back(0.5 * (a + b));
            }
            r_prev = r;
            w_prev = w_here;
        }
        cuts.push_back(grid.extent);

        double ray_abs = 0.0, ray = 0.0;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            // composite panels keep narrow displaced features resolved
            const double len = cuts[s + 1] - cuts[s];
            if (len <= 0.0) continue;
            const int panels = std::max(1, static_cast<int>(std::ceil(len / 0.75)));
            for (int pnl = 0; pnl < panels; ++pnl) {
                const double a = cuts[s] + len * pnl / panels;
                const double b = cuts[s] + len * (pnl + 1) / panels;
                const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
                for (int q = 0; q < seg_order; ++q) {
                    const double r = mid + half * gx[q];
                    const double v = W(r) * r * half * gw[q];
                    ray_abs += std::abs(v);
                    ray += v;
                }
            }
        }
        absint += ray_abs * (2.0 * pi / grid.n_angular);
        tot += ray * (2.0 * pi / grid.n_angular);
    }

    NegativityResult out;
    out.raw = absint - 1.0;
    out.total = tot;
    out.below_resolution = std::abs(out.raw) < 1e-9;
    out.delta = (out.raw < 0.0 || out.below_resolution) ? 0.0 : out.raw;
    return out;
}

inline double negativity(const FieldState& st, const PhaseGrid& grid) {
    return negativity_full(st, grid).delta;
}

} // namespace qpulse
