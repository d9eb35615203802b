#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qpulse/fock.hpp"
#include "qpulse/jcm.hpp"
#include "qpulse/math_util.hpp"

namespace qpulse {

enum class Averaging { FullSphere, FixedPhi };

struct GateSpec {
    double Theta = pi / 2;
    Averaging averaging = Averaging::FullSphere;
    double varphi = pi / 2; // field phase step for the phase-locked fast paths
};

// Amplitudes of e^{i Theta sigma_y / 2} |theta, phi>.
struct TargetAmplitudes {
    cplx g, e;
};

inline TargetAmplitudes target_state(const QubitAngles& atom, double Theta) {
    const double c = std::cos(atom.theta / 2), s = std::sin(atom.theta / 2);
    const double cT = std::cos(Theta / 2), sT = std::sin(Theta / 2);
    const cplx ph = std::polar(1.0, atom.phi);
    return {c * cT - ph * s * sT, c * sT + ph * s * cT};
}

namespace detail {

struct TrigTables {
    // C[n] = cos(Om_n tau/2), S[n] = sin(Om_n tau/2); Cm/Sm are shifted to
    // index n-1 with Om_{-1} = 0; cosOn = cos(Om_n tau).
    std::vector<double> C, S, Cm, Sm, cosOn, cosOnm;

    TrigTables(int n_max, double tau) {
        const std::size_t N = static_cast<std::size_t>(n_max) + 1;
        C.resize(N); S.resize(N); Cm.resize(N); Sm.resize(N);
        cosOn.resize(N); cosOnm.resize(N);
        for (int n = 0; n <= n_max; ++n) {
            const double om = std::sqrt(n + 1.0);
            C[n] = std::cos(om * tau / 2);
            S[n] = std::sin(om * tau / 2);
            cosOn[n] = std::cos(om * tau);
        }
        Cm[0] = 1.0; Sm[0] = 0.0; cosOnm[0] = 1.0;
        for (int n = 1; n <= n_max; ++n) {
            Cm[n] = C[n - 1];
            Sm[n] = S[n - 1];
            cosOnm[n] = cosOn[n - 1];
        }
    }
};

} // namespace detail

// Bloch-sphere-averaged fidelity of a Theta rotation, all initial atom states
// weighted uniformly on the sphere. Term-by-term closed form with general
// complex amplitudes (Re/Im decomposition); valid for any field phases.
inline double avg_fidelity_full_sphere(const FieldState& field, double tau, double Theta) {
    const int N = field.n_max();
    detail::TrigTables t(N, tau);
    const double c2 = std::cos(Theta / 2) * std::cos(Theta / 2);
    const double s2 = std::sin(Theta / 2) * std::sin(Theta / 2);
    const double cT = std::cos(Theta), sT = std::sin(Theta);
    double F = 0.5;
    for (int n = 0; n <= N; ++n) {
        const double p = std::norm(field.amps[n]);
        F += p * ((1.0 / 3.0) * t.C[n] * t.Cm[n] * c2 +
                  (t.cosOn[n] + t.cosOnm[n]) / 12.0 * cT);
        const double re2 = std::real(field.amp(n - 1) * std::conj(field.amp(n + 1)));
        F += -(1.0 / 3.0) * re2 * t.S[n] * t.Sm[n] * s2;
        const double imp = std::imag(std::conj(field.amp(n)) * field.amp(n + 1));
        const double imm = std::imag(std::conj(field.amp(n)) * field.amp(n - 1));
        F += (1.0 / 6.0) * (t.C[n] + t.Cm[n]) * (imp * t.S[n] - imm * t.Sm[n]) * sT;
    }
    return F;
}

// Same average restricted to the meridian phi = 0 (known azimuth), theta
// running over the full circle [0, 2pi) with uniform weight.
inline double avg_fidelity_fixed_phi(const FieldState& field, double tau, double Theta) {
    const int N = field.n_max();
    detail::TrigTables t(N, tau);
    const double cT = std::cos(Theta), sT = std::sin(Theta);
    double F = 0.5;
    for (int n = 0; n <= N; ++n) {
        const double p = std::norm(field.amps[n]);
        F += p * (0.25 * t.C[n] * t.Cm[n] + (t.cosOn[n] + t.cosOnm[n]) / 8.0) * cT;
        const double re2 = std::real(field.amp(n - 1) * std::conj(field.amp(n + 1)));
        F += 0.25 * re2 * t.S[n] * t.Sm[n] * cT;
        const double imp = std::imag(std::conj(field.amp(n)) * field.amp(n + 1));
        const double imm = std::imag(std::conj(field.amp(n)) * field.amp(n - 1));
        F += 0.25 * (t.C[n] + t.Cm[n]) * (imp * t.S[n] - imm * t.Sm[n]) * sT;
    }
    return F;
}

// Phase-locked fast paths: the field enters through its photon-number
// magnitudes only, with a constant phase step varphi between neighbours.
// Cross-checked against the general paths in the test suite.
inline double avg_fidelity_full_sphere_locked(const std::vector<double>& mag,
                                              double tau, double Theta,
                                              double varphi = pi / 2) {
    const int N = static_cast<int>(mag.size()) - 1;
    detail::TrigTables t(N, tau);
    auto at = [&](int n) { return (n >= 0 && n <= N) ? mag[n] : 0.0; };
    const double c2 = std::cos(Theta / 2) * std::cos(Theta / 2);
    const double s2 = std::sin(Theta / 2) * std::sin(Theta / 2);
    const double cT = std::cos(Theta), sT = std::sin(Theta);
    double F = 0.5;
    for (int n = 0; n <= N; ++n) {
        const double p = mag[n] * mag[n];
        F += p * ((1.0 / 3.0) * t.C[n] * t.Cm[n] * c2 +
                  (t.cosOn[n] + t.cosOnm[n]) / 12.0 * cT);
        F += -(1.0 / 3.0) * std::cos(2 * varphi) * at(n - 1) * at(n + 1) *
             t.S[n] * t.Sm[n] * s2;
        F += (1.0 / 6.0) * std::sin(varphi) * (t.C[n] + t.Cm[n]) *
             (mag[n] * at(n + 1) * t.S[n] + mag[n] * at(n - 1) * t.Sm[n]) * sT;
    }
    return F;
}

inline double avg_fidelity_fixed_phi_locked(const std::vector<double>& mag,
                                            double tau, double Theta, double varphi) {
    const int N = static_cast<int>(mag.size()) - 1;
    detail::TrigTables t(N, tau);
    auto at = [&](int n) { return (n >= 0 && n <= N) ? mag[n] : 0.0; };
    const double cT = std::cos(Theta), sT = std::sin(Theta);
    double F = 0.5;
    for (int n = 0; n <= N; ++n) {
        const double p = mag[n] * mag[n];
        F += p * (0.25 * t.C[n] * t.Cm[n] + (t.cosOn[n] + t.cosOnm[n]) / 8.0) * cT;
        F += 0.25 * std::cos(2 * varphi) * at(n - 1) * at(n + 1) * t.S[n] * t.Sm[n] * cT;
        F += 0.25 * std::sin(varphi) * (t.C[n] + t.Cm[n]) *
             (mag[n] * at(n + 1) * t.S[n] + mag[n] * at(n - 1) * t.Sm[n]) * sT;
    }
    return F;
}

// Pointwise fidelity: overlap of the evolved joint state with the target
// qubit state, field traced out.
inline double pointwise_fidelity(const FieldState& field, double tau,
                                 const QubitAngles& atom, double Theta) {
    JointState joint = evolve_joint(field, atom, EvolutionParams{tau, 0.0, 1});
    const TargetAmplitudes tg = target_state(atom, Theta);
    double acc = 0.0;
    for (std::size_t n = 0; n < joint.cg.size(); ++n)
        acc += std::norm(std::conj(tg.g) * joint.cg[n] + std::conj(tg.e) * joint.ce[n]);
    return acc;
}

// Dispatch on the averaging mode of a GateSpec.
inline double avg_fidelity(const FieldState& field, double tau, const GateSpec& gate) {
    return gate.averaging == Averaging::FullSphere
               ? avg_fidelity_full_sphere(field, tau, gate.Theta)
               : avg_fidelity_fixed_phi(field, tau, gate.Theta);
}

// Quadrature oracle for the closed forms: averages the pointwise fidelity of
// the raw evolution. FullSphere uses Gauss-Legendre in cos(theta) times a
// uniform trapezoid in phi; FixedPhi uses a uniform trapezoid over
// theta in [0, 2pi) at phi = 0. The integrands are low-degree trigonometric
// polynomials, so modest orders are already exact.
inline double oracle_avg_fidelity(const FieldState& field, double tau, double Theta,
                                  Averaging mode, int n_theta = 64, int n_phi = 64) {
    if (n_theta < 64 || (mode == Averaging::FullSphere && n_phi < 64))
        throw std::domain_error("oracle_avg_fidelity: quadrature orders must be >= 64");
    if (mode == Averaging::FixedPhi) {
        double acc = 0.0;
        for (int i = 0; i < n_theta; ++i) {
            const double th = 2 * pi * i / n_theta;
            acc += pointwise_fidelity(field, tau, QubitAngles{th, 0.0}, Theta);
        }
        return acc / n_theta;
    }
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    double acc = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double th = std::acos(x[i]);
        double ring = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double ph = 2 * pi * j / n_phi;
            ring += pointwise_fidelity(field, tau, QubitAngles{th, ph}, Theta);
        }
        acc += w[i] * ring / n_phi;
    }
    return acc / 2.0; // sum of GL weights is 2
}

} // namespace qpulse
