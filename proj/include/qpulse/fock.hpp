#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qpulse/math_util.hpp"

namespace qpulse {

using cplx = std::complex<double>;

// A pure field state on a truncated Fock ladder, psi_n for n = 0..n_max.
// Immutable by convention once built; every factory returns it normalized
// with the first nonzero amplitude real and positive.
struct FieldState {
    std::vector<cplx> amps;

    int n_max() const { return static_cast<int>(amps.size()) - 1; }

    cplx amp(int n) const {
        if (n < 0 || n > n_max()) return {0.0, 0.0};
        return amps[static_cast<std::size_t>(n)];
    }

    double norm2() const {
        double s = 0.0;
        for (const auto& a : amps) s += std::norm(a);
        return s;
    }
};

struct GaussianSpec {
    double nbar = 0.0;
    double var = 1.0;
    int n_max = 0;
    double phase_step = pi / 2; // arg psi_{n+1} - arg psi_n
};

struct QubitAngles {
    double theta = 0.0; // polar, [0, 2pi]
    double phi = 0.0;   // azimuthal, [0, 2pi)
};

enum class AtomStart { Ground, Excited };

struct PulseSpec {
    double theta = 0.0;
    int branch_k = 0;
    AtomStart start = AtomStart::Ground;
};

// Whether a pulse area is deliverable exactly from the given start on branch
// k: the squeezing factor sinc(theta) (ground) or -sinc(theta + pi) (excited)
// must be nonnegative there, which confines theta to alternating pi-bands.
inline bool pulse_spec_valid(const PulseSpec& s) {
    if (s.branch_k < 0) return false;
    const double k = s.branch_k;
    if (s.start == AtomStart::Ground)
        return 2 * k * pi <= s.theta && s.theta <= (2 * k + 1) * pi;
    return (2 * k + 1) * pi <= s.theta + pi && s.theta + pi <= (2 * k + 2) * pi;
}

namespace detail {

inline void normalize_and_fix_phase(std::vector<cplx>& amps) {
    double mx = 0.0;
    for (const auto& a : amps) mx = std::max(mx, std::abs(a));
    if (mx == 0.0) throw std::domain_error("FieldState: all amplitudes vanish");
    double s = 0.0;
    for (auto& a : amps) {
        a /= mx;
        // amplitudes this far under the peak are numerically zero; dropping
        // them keeps the phase anchor below away from subnormals, whose
        // quantized significands would corrupt the unit rotation
        if (std::abs(a) < 1e-250) a = cplx{};
        s += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(s);
    cplx rot{1.0, 0.0};
    for (const auto& a : amps) {
        if (std::abs(a) > 0.0) {
            rot = std::conj(a) / std::abs(a);
            break;
        }
    }
    for (auto& a : amps) a *= inv * rot;
}

} // namespace detail

inline FieldState make_fock(int n, int n_max) {
    if (n_max < 0) throw std::domain_error("make_fock: n_max must be >= 0");
    if (n < 0 || n > n_max) throw std::domain_error("make_fock: need 0 <= n <= n_max");
    FieldState st;
    st.amps.assign(static_cast<std::size_t>(n_max) + 1, cplx{0.0, 0.0});
    st.amps[static_cast<std::size_t>(n)] = 1.0;
    return st;
}

// |psi_n|^2 ~ exp[-(n - nbar)^2 / (2 var)], arg psi_n = n * phase_step.
inline FieldState make_gaussian(const GaussianSpec& spec) {
    if (spec.var <= 0.0) throw std::domain_error("make_gaussian: var must be > 0");
    if (spec.nbar < 0.0) throw std::domain_error("make_gaussian: nbar must be >= 0");
    if (spec.n_max < 0 || spec.n_max + 1e-12 < spec.nbar + 6.0 * std::sqrt(spec.var))
        throw std::domain_error("make_gaussian: n_max below nbar + 6 sigma");
    FieldState st;
    st.amps.resize(static_cast<std::size_t>(spec.n_max) + 1);
    for (int n = 0; n <= spec.n_max; ++n) {
        const double d = n - spec.nbar;
        const double mag = std::exp(-d * d / (4.0 * spec.var));
        st.amps[static_cast<std::size_t>(n)] =
            mag * std::polar(1.0, spec.phase_step * n);
    }
    detail::normalize_and_fix_phase(st.amps);
    return st;
}

inline FieldState make_gaussian(double nbar, double var, int n_max,
                                double phase_step = pi / 2) {
    return make_gaussian(GaussianSpec{nbar, var, n_max, phase_step});
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

inline Moments moments(const FieldState& st) {
    double m1 = 0.0, m2 = 0.0;
    for (int n = 0; n <= st.n_max(); ++n) {
        const double p = std::norm(st.amps[static_cast<std::size_t>(n)]);
        m1 += n * p;
        m2 += static_cast<double>(n) * n * p;
    }
    return {m1, std::max(m2 - m1 * m1, 0.0)};
}

// Moment-based Gaussian fit; identical to moments by design so that fitted
// variances line up with the moment variances quoted for the distributions.
inline Moments fit_gaussian(const FieldState& st) { return moments(st); }

// Photon-number squeezing, in dB, needed for an exact theta pulse.
inline double squeezing_db(double theta) {
    const double s = sinc(theta);
    if (s <= 0.0) throw std::domain_error("squeezing_db: sinc(theta) <= 0");
    return -10.0 * std::log10(s);
}

inline int suggest_nmax(double nbar, double var) {
    return static_cast<int>(std::ceil(nbar + 6.0 * std::sqrt(var) + 10.0));
}

} // namespace qpulse
