#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qpulse/fock.hpp"
#include "qpulse/math_util.hpp"

namespace qpulse {

// Atom-field amplitudes after Jaynes-Cummings evolution:
// |Psi> = sum_n |n> (x) (cg_n |g> + ce_n |e>).
struct JointState {
    std::vector<cplx> cg;
    std::vector<cplx> ce;

    int n_max() const { return static_cast<int>(cg.size()) - 1; }

    double norm2() const {
        double s = 0.0;
        for (const auto& a : cg) s += std::norm(a);
        for (const auto& a : ce) s += std::norm(a);
        return s;
    }
};

// Dimensionless evolution parameters. Time is always tau = Omega_0 t
// (tau_m = Omega_0^(m) t for m-photon couplings); Omega_0 itself never
// appears as a separate runtime quantity.
struct EvolutionParams {
    double tau = 0.0;
    double detuning_ratio = 0.0; // delta / Omega_0
    int photon_order_m = 1;
};

struct QubitDensity {
    cplx gg, ge, ee; // ge = <g| rho |e>

    double purity() const {
        return std::norm(gg) + std::norm(ee) + 2.0 * std::norm(ge);
    }

    // <theta,phi| rho |theta,phi>
    double fidelity_to(const QubitAngles& target) const {
        const double c = std::cos(target.theta / 2), s = std::sin(target.theta / 2);
        const cplx e = std::polar(1.0, target.phi);
        return (c * c * gg + s * s * ee + 2.0 * std::real(ge * e) * c * s).real();
    }
};

// Quantized Rabi frequency in units of Omega_0 (Omega_0^(m) for m > 1):
// resonant m=1 -> sqrt(n+1); detuned -> sqrt(n+1+(delta/Omega_0)^2);
// m-photon -> sqrt((n+m)(n+m-1)...(n+1)). Zero for n < 0.
inline double rabi_freq(int n, const EvolutionParams& p = {}) {
    if (p.photon_order_m < 1) throw std::domain_error("rabi_freq: photon_order_m >= 1");
    if (n < 0) return 0.0;
    if (p.photon_order_m == 1) {
        return std::sqrt(n + 1.0 + p.detuning_ratio * p.detuning_ratio);
    }
    double prod = 1.0;
    for (int j = 1; j <= p.photon_order_m; ++j) prod *= n + static_cast<double>(j);
    return std::sqrt(prod);
}

namespace detail {

inline double om_m(int n, int m) {
    if (n < 0) return 0.0;
    double prod = 1.0;
    for (int j = 1; j <= m; ++j) prod *= n + static_cast<double>(j);
    return std::sqrt(prod);
}

inline void require_resonant(const EvolutionParams& p, const char* who) {
    if (p.detuning_ratio != 0.0)
        throw std::domain_error(std::string(who) + ": resonant evolution only");
    if (p.photon_order_m < 1)
        throw std::domain_error(std::string(who) + ": photon_order_m >= 1");
}

} // namespace detail

// |psi> (x) |g>  ->  cg_n = psi_n cos(Om_{n-m} tau/2),
//                    ce_n = -i psi_{n+m} sin(Om_n tau/2)
inline JointState evolve_from_ground(const FieldState& field, const EvolutionParams& p) {
    detail::require_resonant(p, "evolve_from_ground");
    const int m = p.photon_order_m;
    const int N = field.n_max();
    JointState out;
    out.cg.assign(static_cast<std::size_t>(N) + 1, cplx{});
    out.ce.assign(static_cast<std::size_t>(N) + 1, cplx{});
    for (int n = 0; n <= N; ++n) {
        out.cg[n] = field.amps[n] * std::cos(detail::om_m(n - m, m) * p.tau / 2);
        if (n + m <= N)
            out.ce[n] = cplx(0, -1) * field.amp(n + m) * std::sin(detail::om_m(n, m) * p.tau / 2);
    }
    return out;
}

// |psi> (x) |e>  ->  ce_n = psi_n cos(Om_n tau/2),
//                    cg_n = -i psi_{n-m} sin(Om_{n-m} tau/2).
// The |g> branch reaches m rungs above the field truncation, so the output
// ladder is extended accordingly.
inline JointState evolve_from_excited(const FieldState& field, const EvolutionParams& p) {
    detail::require_resonant(p, "evolve_from_excited");
    const int m = p.photon_order_m;
    const int N = field.n_max() + m;
    JointState out;
    out.cg.assign(static_cast<std::size_t>(N) + 1, cplx{});
    out.ce.assign(static_cast<std::size_t>(N) + 1, cplx{});
    for (int n = 0; n <= N; ++n) {
        if (n <= field.n_max())
            out.ce[n] = field.amps[n] * std::cos(detail::om_m(n, m) * p.tau / 2);
        if (n - m >= 0)
            out.cg[n] = cplx(0, -1) * field.amp(n - m) * std::sin(detail::om_m(n - m, m) * p.tau / 2);
    }
    return out;
}

// Arbitrary initial atom |theta,phi>: cos(theta/2) (ground branch)
//                                   + sin(theta/2) e^{i phi} (excited branch).
inline JointState evolve_joint(const FieldState& field, const QubitAngles& atom,
                               const EvolutionParams& p) {
    detail::require_resonant(p, "evolve_joint");
    if (p.photon_order_m != 1)
        throw std::domain_error("evolve_joint: m = 1 only");
    const int N = field.n_max() + 1;
    const double a = std::cos(atom.theta / 2);
    const cplx b = std::sin(atom.theta / 2) * std::polar(1.0, atom.phi);
    JointState out;
    out.cg.assign(static_cast<std::size_t>(N) + 1, cplx{});
    out.ce.assign(static_cast<std::size_t>(N) + 1, cplx{});
    for (int n = 0; n <= N; ++n) {
        const double Sn = std::sin(detail::om_m(n, 1) * p.tau / 2);
        const double Cn = std::cos(detail::om_m(n, 1) * p.tau / 2);
        const double Sm = std::sin(detail::om_m(n - 1, 1) * p.tau / 2);
        const double Cm = std::cos(detail::om_m(n - 1, 1) * p.tau / 2);
        out.cg[n] = a * field.amp(n) * Cm + b * cplx(0, -1) * field.amp(n - 1) * Sm;
        out.ce[n] = a * cplx(0, -1) * field.amp(n + 1) * Sn + b * field.amp(n) * Cn;
    }
    return out;
}

// Detuned evolution from the ground state (m = 1). Mixing angles
// alpha_n = atan2(sqrt(n+1), delta/Omega_0) keep alpha in (0, pi) for either
// sign of the detuning; Om(n) = sqrt(n+1+(delta/Omega_0)^2).
inline JointState evolve_detuned_from_ground(const FieldState& field,
                                             const EvolutionParams& p) {
    if (p.photon_order_m != 1)
        throw std::domain_error("evolve_detuned_from_ground: m = 1 only");
    const int N = field.n_max();
    const double dr = p.detuning_ratio;
    JointState out;
    out.cg.assign(static_cast<std::size_t>(N) + 1, cplx{});
    out.ce.assign(static_cast<std::size_t>(N) + 1, cplx{});
    for (int n = -1; n < N; ++n) {
        // the pair (|n>|e>, |n+1> |g>), fed by psi_{n+1}
        const double om = std::sqrt(n + 1.0 + dr * dr);
        const double alpha = std::atan2(std::sqrt(n + 1.0), dr);
        const double s2 = std::sin(alpha / 2) * std::sin(alpha / 2);
        const double c2 = 1.0 - s2;
        const cplx ph_m = std::polar(1.0, -om * p.tau / 2);
        const cplx ph_p = std::polar(1.0, om * p.tau / 2);
        const cplx psi = field.amp(n + 1);
        out.cg[n + 1] = psi * (ph_m * s2 + ph_p * c2);
        if (n >= 0)
            out.ce[n] = cplx(0, -1) * psi * std::sin(alpha) * std::sin(om * p.tau / 2);
    }
    return out;
}

inline QubitDensity reduce_atom(const JointState& joint) {
    QubitDensity rho{};
    const std::size_t N = joint.cg.size();
    for (std::size_t n = 0; n < N; ++n) {
        rho.gg += joint.cg[n] * std::conj(joint.cg[n]);
        rho.ee += joint.ce[n] * std::conj(joint.ce[n]);
        rho.ge += joint.cg[n] * std::conj(joint.ce[n]);
    }
    return rho;
}

// |<sigma_+>| + |<sigma_->| = 2 |sum_n ce_n cg_n^*|
inline double coherence(const JointState& joint) {
    cplx s{};
    for (std::size_t n = 0; n < joint.cg.size(); ++n)
        s += joint.ce[n] * std::conj(joint.cg[n]);
    return 2.0 * std::abs(s);
}

// Purity of the reduced field state, tr rho_f^2 with
// rho_f = cg cg^dag + ce ce^dag. O(N^2).
inline double field_purity(const JointState& joint) {
    const std::size_t N = joint.cg.size();
    double s = 0.0;
    for (std::size_t a = 0; a < N; ++a) {
        for (std::size_t b = 0; b < N; ++b) {
            const cplx r = joint.cg[a] * std::conj(joint.cg[b]) +
                           joint.ce[a] * std::conj(joint.ce[b]);
            s += std::norm(r);
        }
    }
    return s;
}

} // namespace qpulse
