#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qpulse/fock.hpp"
#include "qpulse/math_util.hpp"

namespace qpulse {

// Joint state of one field mode and 2J atoms restricted to the symmetric
// (spin-J) sector: amplitudes c(n, j) on |n> (x) |J, m>, m = j - J,
// j = 0..2J. Row-major over n.
struct DickeJointState {
    int J2 = 1;   // number of atoms = 2J
    int n_max = 0;
    std::vector<cplx> c;

    cplx& at(int n, int j) { return c[static_cast<std::size_t>(n) * (J2 + 1) + j]; }
    const cplx& at(int n, int j) const {
        return c[static_cast<std::size_t>(n) * (J2 + 1) + j];
    }

    double norm2() const {
        double s = 0.0;
        for (const auto& v : c) s += std::norm(v);
        return s;
    }

    // tr rho_atoms^2 with rho = sum_n |row_n><row_n|
    double atomic_purity() const {
        const int d = J2 + 1;
        std::vector<cplx> rho(static_cast<std::size_t>(d) * d, cplx{});
        for (int n = 0; n <= n_max; ++n)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    rho[static_cast<std::size_t>(a) * d + b] +=
                        at(n, a) * std::conj(at(n, b));
        double s = 0.0;
        for (const auto& v : rho) s += std::norm(v);
        return s;
    }
};

namespace detail {

// Eigenvalues and eigenvectors of a real symmetric tridiagonal matrix by the
// QL algorithm with implicit shifts. diag/off are destroyed; on return diag
// holds the eigenvalues and z (row-major dim x dim, input identity) holds the
// eigenvectors in its columns.
inline void tridiag_ql(std::vector<double>& diag, std::vector<double>& off,
                       std::vector<double>& z, int dim) {
    auto pythag = [](double a, double b) {
        const double aa = std::abs(a), ab = std::abs(b);
        if (aa > ab) {
            const double r = ab / aa;
            return aa * std::sqrt(1.0 + r * r);
        }
        return ab == 0.0 ? 0.0 : ab * std::sqrt(1.0 + (aa / ab) * (aa / ab));
    };
    if (dim == 1) return;
    off.push_back(0.0); // off[dim-1] sentinel
    for (int l = 0; l < dim; ++l) {
        int iter = 0;
        int mcut;
        do {
            for (mcut = l; mcut < dim - 1; ++mcut) {
                const double dd = std::abs(diag[mcut]) + std::abs(diag[mcut + 1]);
                if (std::abs(off[mcut]) <= 1e-300 || std::abs(off[mcut]) + dd == dd) break;
            }
            if (mcut != l) {
                if (iter++ == 50)
                    throw std::runtime_error("tridiag_ql: too many iterations");
                double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
                double r = pythag(g, 1.0);
                g = diag[mcut] - diag[l] + off[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (int i = mcut - 1; i >= l; --i) {
                    double f = s * off[i];
                    const double b = c * off[i];
                    r = pythag(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) { // recover from underflow
                        diag[i + 1] -= p;
                        off[mcut] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                    for (int k2 = 0; k2 < dim; ++k2) {
                        f = z[static_cast<std::size_t>(k2) * dim + i + 1];
                        z[static_cast<std::size_t>(k2) * dim + i + 1] =
                            s * z[static_cast<std::size_t>(k2) * dim + i] + c * f;
                        z[static_cast<std::size_t>(k2) * dim + i] =
                            c * z[static_cast<std::size_t>(k2) * dim + i] - s * f;
                    }
                }
                if (underflow) continue;
                diag[l] -= p;
                off[l] = g;
                off[mcut] = 0.0;
            }
        } while (mcut != l);
    }
}

inline double binom(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
    return v;
}

} // namespace detail

// One fixed-excitation block of the collective Hamiltonian on the basis
// |E-k> (x) |J, -J+k>, k = 0..min(2J, E): zero diagonal, off-diagonal
// (1/2) sqrt((E-k)(2J-k)(k+1)) in Omega_0 units.
struct ExcitationBlock {
    int E = 0;
    int dim = 1;
    std::vector<double> off; // dim - 1 entries

    std::vector<double> eigenvalues() const {
        std::vector<double> d(dim, 0.0), e = off,
            z(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int i = 0; i < dim; ++i) z[static_cast<std::size_t>(i) * dim + i] = 1.0;
        detail::tridiag_ql(d, e, z, dim);
        return d;
    }
};

inline ExcitationBlock excitation_block(int E, int J2) {
    if (J2 < 1 || E < 0) throw std::domain_error("excitation_block: J2 >= 1, E >= 0");
    ExcitationBlock b;
    b.E = E;
    b.dim = std::min(J2, E) + 1;
    b.off.resize(b.dim - 1);
    for (int k = 0; k + 1 < b.dim; ++k)
        b.off[k] = 0.5 * std::sqrt(static_cast<double>(E - k) * (J2 - k) * (k + 1));
    return b;
}

// Exact Tavis-Cummings evolution from |psi> (x) |J,-J| by diagonalizing each
// fixed-excitation block. Block E has basis |E-k> (x) |J,-J+k>,
// k = 0..min(2J,E), zero diagonal and off-diagonal
// (1/2) sqrt((E-k)(2J-k)(k+1)) in Omega_0 units. Blocks are independent.
inline DickeJointState tcm_evolve_exact(const FieldState& field, int J2, double tau) {
    if (J2 < 1) throw std::domain_error("tcm_evolve_exact: J2 >= 1");
    const int N = field.n_max();
    DickeJointState out;
    out.J2 = J2;
    out.n_max = N;
    out.c.assign(static_cast<std::size_t>(N + 1) * (J2 + 1), cplx{});
    for (int E = 0; E <= N; ++E) {
        if (field.amps[E] == cplx{}) continue;
        const ExcitationBlock blk = excitation_block(E, J2);
        const int dim = blk.dim;
        if (dim == 1) {
            out.at(E, 0) += field.amps[E];
            continue;
        }
        std::vector<double> diag(dim, 0.0), off = blk.off,
            z(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int i = 0; i < dim; ++i) z[static_cast<std::size_t>(i) * dim + i] = 1.0;
        detail::tridiag_ql(diag, off, z, dim);
        for (int k = 0; k < dim; ++k) {
            cplx amp{};
            for (int j = 0; j < dim; ++j) {
                // V[k][j] e^{-i w_j tau} V[0][j]
                amp += z[static_cast<std::size_t>(k) * dim + j] *
                       std::polar(1.0, -diag[j] * tau) * z[j];
            }
            out.at(E - k, k) += amp * field.amps[E];
        }
    }
    return out;
}

// Closed-form two-atom (J = 1) evolution, used as an oracle for the block
// method. Implements the psi_0, psi_1 and n >= 2 branches verbatim.
inline DickeJointState tcm_evolve_n2_analytic(const FieldState& field, double tau) {
    const int N = field.n_max();
    DickeJointState out;
    out.J2 = 2;
    out.n_max = N;
    out.c.assign(static_cast<std::size_t>(N + 1) * 3, cplx{});
    out.at(0, 0) += field.amps[0];
    if (N >= 1) {
        out.at(1, 0) += field.amps[1] * std::cos(tau / std::sqrt(2.0));
        out.at(0, 1) += cplx(0, -1) * field.amps[1] * std::sin(tau / std::sqrt(2.0));
    }
    for (int n = 2; n <= N; ++n) {
        const double r = std::sqrt(2.0 * n - 1.0);
        const double cosr = std::cos(tau * r / std::sqrt(2.0));
        const double sinr = std::sin(tau * r / std::sqrt(2.0));
        const double inv = 1.0 / (2.0 * n - 1.0);
        out.at(n, 0) += field.amps[n] * ((n - 1.0) * inv + n * inv * cosr);
        out.at(n - 2, 2) += field.amps[n] * (std::sqrt(static_cast<double>(n) * (n - 1.0)) * inv) * (cosr - 1.0);
        out.at(n - 1, 1) += cplx(0, -1) * field.amps[n] * std::sqrt(n * inv) * sinr;
    }
    return out;
}

// Strong-field approximate propagator: c(n, j) = psi_{n+j} sqrt(C(2J,j))
// cos^{2J-j}(Om tau/2) sin^{j}(Om tau/2) with Om = sqrt(n+j-J+1/2).
// Requires psi_n = 0 for n <= 2J, otherwise the phase-operator construction
// is not unitary.
inline DickeJointState tcm_evolve_approx(const FieldState& field, int J2, double tau) {
    if (J2 < 1) throw std::domain_error("tcm_evolve_approx: J2 >= 1");
    const int N = field.n_max();
    for (int n = 0; n <= std::min(J2, N); ++n)
        if (field.amps[n] != cplx{})
            throw std::domain_error(
                "tcm_evolve_approx: field must have psi_n = 0 for n <= 2J");
    const double J = J2 / 2.0;
    DickeJointState out;
    out.J2 = J2;
    out.n_max = N;
    out.c.assign(static_cast<std::size_t>(N + 1) * (J2 + 1), cplx{});
    for (int n = 0; n <= N; ++n) {
        for (int j = 0; j <= J2; ++j) {
            if (n + j > N) continue;
            const cplx psi = field.amps[n + j];
            if (psi == cplx{}) continue;
            const double om = std::sqrt(std::max(n + j - J + 0.5, 0.0));
            const double ch = std::cos(om * tau / 2), sh = std::sin(om * tau / 2);
            out.at(n, j) = psi * std::sqrt(detail::binom(J2, j)) *
                           std::pow(ch, J2 - j) * std::pow(sh, j);
        }
    }
    return out;
}

// Overlap with the Theta-rotated spin-coherent state, field traced out.
inline double spin_target_fidelity(const DickeJointState& st, double Theta) {
    const int J2 = st.J2;
    std::vector<double> wgt(static_cast<std::size_t>(J2) + 1);
    for (int j = 0; j <= J2; ++j)
        wgt[j] = std::sqrt(detail::binom(J2, j)) *
                 std::pow(std::cos(Theta / 2), J2 - j) *
                 std::pow(std::sin(Theta / 2), j);
    double F = 0.0;
    for (int n = 0; n <= st.n_max; ++n) {
        cplx ov{};
        for (int j = 0; j <= J2; ++j) ov += st.at(n, j) * wgt[j];
        F += std::norm(ov);
    }
    return F;
}

struct SpinExpectations {
    double jx = 0.0, jy = 0.0, jz = 0.0;
};

inline SpinExpectations spin_expectations(const DickeJointState& st) {
    const int J2 = st.J2;
    const double J = J2 / 2.0;
    SpinExpectations out;
    cplx jplus{};
    for (int n = 0; n <= st.n_max; ++n) {
        for (int j = 0; j <= J2; ++j) {
            out.jz += (j - J) * std::norm(st.at(n, j));
            if (j < J2)
                jplus += std::conj(st.at(n, j + 1)) * st.at(n, j) *
                         std::sqrt(static_cast<double>(J2 - j) * (j + 1));
        }
    }
    out.jx = jplus.real();
    out.jy = jplus.imag();
    return out;
}

// Heisenberg-picture shortcut for <J_z> after time tau, taken with respect to
// the initial field state: -J sum_n |psi_n|^2 cos(tau sqrt(n - J + 1/2)).
inline double jz_heisenberg(const FieldState& field, int J2, double tau) {
    const double J = J2 / 2.0;
    double s = 0.0;
    for (int n = 0; n <= field.n_max(); ++n)
        s += std::norm(field.amps[n]) *
             std::cos(tau * std::sqrt(std::max(n - J + 0.5, 0.0)));
    return -J * s;
}

// Diagnostic only: variance that cancels the O(delta) terms of <J_x> when
// the cancellation window runs over delta in [-l, l]. The window size l is
// the caller's choice; l = (sqrt(2J+1)-1)/2 matches a flat normalization
// over 2J+1 rungs. Not used by any contract.
inline double jx_window_variance(double nbar, int J2, double l) {
    const double J = J2 / 2.0;
    return (nbar - J + 0.5) / pi * (1.0 + 2.0 * l * (l + 1.0) / (3.0 * J));
}

} // namespace qpulse
