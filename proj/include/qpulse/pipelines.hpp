#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qpulse/exact_states.hpp"
#include "qpulse/fidelity.hpp"
#include "qpulse/fock.hpp"
#include "qpulse/math_util.hpp"
#include "qpulse/optimize.hpp"
#include "qpulse/tcm.hpp"

namespace qpulse {

// Optimization drivers shared by the figure emitters, the verification
// suites and the CLI. All optimize in log(sigma^2), log(tau) coordinates so
// positivity needs no constraint handling, and seed their restarts from the
// classical pulse point.

struct GateOptimum {
    double var = 0.0;
    double tau = 0.0;
    double varphi = pi / 2;
    double fidelity = 0.0;
    OptimizationResult raw;
};

inline int gate_nmax(double nbar) {
    return suggest_nmax(nbar, 2.0 * nbar);
}

// Best Gaussian (sigma^2, tau) for a Theta rotation averaged over the full
// Bloch sphere, at fixed mean photon number.
inline GateOptimum optimize_full_sphere(double nbar, double Theta,
                                        std::uint64_t seed = 1, int restarts = 4) {
    const int n_max = gate_nmax(nbar);
    Objective obj = [&](const std::vector<double>& x) {
        const double var = std::exp(x[0]);
        const double tau = std::exp(x[1]);
        return avg_fidelity_full_sphere(make_gaussian(nbar, var, n_max), tau, Theta);
    };
    const double tau0 = std::max(Theta, 0.05) / std::sqrt(nbar);
    const std::vector<double> x0{std::log(std::max(nbar * sinc(Theta / 2), 0.05)),
                                 std::log(tau0)};
    const std::vector<double> lo{std::log(0.05), std::log(tau0 * 0.4)};
    const std::vector<double> hi{std::log(2.0 * nbar), std::log(tau0 * 2.5)};
    NelderMeadOptions opt;
    opt.xtol = 1e-8;
    opt.ftol = 1e-13;
    OptimizationResult r = nelder_mead(obj, x0, lo, hi, opt, restarts, seed);
    GateOptimum out;
    out.var = std::exp(r.params_opt[0]);
    out.tau = std::exp(r.params_opt[1]);
    out.fidelity = r.objective_opt;
    out.raw = r;
    return out;
}

// Same for the known-azimuth (phi = 0) average; optionally optimizes the
// field phase step varphi as a third parameter.
inline GateOptimum optimize_fixed_phi(double nbar, double Theta, bool optimize_varphi,
                                      std::uint64_t seed = 1, int restarts = 4) {
    const int n_max = gate_nmax(nbar);
    Objective obj = [&](const std::vector<double>& x) {
        const double var = std::exp(x[0]);
        const double tau = std::exp(x[1]);
        const double vp = optimize_varphi ? x[2] : pi / 2;
        return avg_fidelity_fixed_phi(make_gaussian(nbar, var, n_max, vp), tau, Theta);
    };
    const double tau0 = std::max(Theta, 0.05) / std::sqrt(nbar);
    std::vector<double> x0{std::log(std::max(nbar * sinc(Theta / 2) / std::sqrt(2.0), 0.05)),
                           std::log(tau0)};
    std::vector<double> lo{std::log(0.05), std::log(tau0 * 0.4)};
    std::vector<double> hi{std::log(2.0 * nbar), std::log(tau0 * 2.5)};
    if (optimize_varphi) {
        x0.push_back(pi / 2);
        lo.push_back(0.0);
        hi.push_back(pi);
    }
    NelderMeadOptions opt;
    opt.xtol = 1e-8;
    opt.ftol = 1e-13;
    OptimizationResult r = nelder_mead(obj, x0, lo, hi, opt, restarts, seed);
    GateOptimum out;
    out.var = std::exp(r.params_opt[0]);
    out.tau = std::exp(r.params_opt[1]);
    out.varphi = optimize_varphi ? r.params_opt[2] : pi / 2;
    out.fidelity = r.objective_opt;
    out.raw = r;
    return out;
}

// Best interaction time for an unsqueezed field (sigma^2 = nbar); the
// comparison baseline for the improvement curves.
inline GateOptimum optimize_coherent_tau(double nbar, double Theta,
                                         std::uint64_t seed = 1) {
    const int n_max = gate_nmax(nbar);
    Objective obj = [&](const std::vector<double>& x) {
        return avg_fidelity_full_sphere(make_gaussian(nbar, nbar, n_max),
                                        std::exp(x[0]), Theta);
    };
    const double tau0 = std::max(Theta, 0.05) / std::sqrt(nbar);
    NelderMeadOptions opt;
    opt.xtol = 1e-10;
    opt.ftol = 1e-14;
    OptimizationResult r = nelder_mead(obj, {std::log(tau0)}, {std::log(tau0 * 0.4)},
                                       {std::log(tau0 * 2.5)}, opt, 2, seed);
    GateOptimum out;
    out.var = nbar;
    out.tau = std::exp(r.params_opt[0]);
    out.fidelity = r.objective_opt;
    out.raw = r;
    return out;
}

// Squeezed-vs-coherent improvement at one Theta. The squeezed optimum is
// additionally seeded from the coherent optimum so dF >= 0 holds by
// construction (the coherent point lies inside the squeezed family).
struct ImprovementPoint {
    double Theta = 0.0;
    double F_squeezed = 0.0;
    double F_coherent = 0.0;
    double dF = 0.0;
    double error_ratio = 1.0;
    double var_opt = 0.0;
};

inline ImprovementPoint improvement_at(double nbar, double Theta,
                                       std::uint64_t seed = 1) {
    const int n_max = gate_nmax(nbar);
    GateOptimum coh = optimize_coherent_tau(nbar, Theta, seed);
    GateOptimum sq = optimize_full_sphere(nbar, Theta, seed, 4);
    // refine from the coherent point as an extra restart
    Objective obj = [&](const std::vector<double>& x) {
        return avg_fidelity_full_sphere(make_gaussian(nbar, std::exp(x[0]), n_max),
                                        std::exp(x[1]), Theta);
    };
    NelderMeadOptions opt;
    opt.xtol = 1e-8;
    opt.ftol = 1e-13;
    OptimizationResult alt = nelder_mead(
        obj, {std::log(nbar), std::log(coh.tau)},
        {std::log(0.05), std::log(coh.tau * 0.4)},
        {std::log(2.0 * nbar), std::log(coh.tau * 2.5)}, opt, 0, seed);
    if (alt.objective_opt > sq.fidelity) {
        sq.fidelity = alt.objective_opt;
        sq.var = std::exp(alt.params_opt[0]);
        sq.tau = std::exp(alt.params_opt[1]);
    }
    ImprovementPoint out;
    out.Theta = Theta;
    out.F_squeezed = std::max(sq.fidelity, coh.fidelity);
    out.F_coherent = coh.fidelity;
    out.dF = out.F_squeezed - out.F_coherent;
    out.error_ratio = (coh.fidelity < 1.0)
                          ? (1.0 - out.F_squeezed) / (1.0 - coh.fidelity)
                          : 1.0;
    out.var_opt = sq.var;
    return out;
}

// Tavis-Cummings (sigma^2, tau) optimum for the pi/2 spin-coherent target.
struct TcmOptimum {
    double var = 0.0;
    double tau = 0.0;
    double fidelity = 0.0;
    OptimizationResult raw;
};

inline TcmOptimum optimize_tcm(double nbar, int J2, bool use_approx,
                               std::uint64_t seed = 1, int restarts = 8) {
    const int n_max = suggest_nmax(nbar, 1.5 * nbar);
    const double Theta = pi / 2;
    Objective obj = [&](const std::vector<double>& x) {
        const double var = std::exp(x[0]);
        const double tau = std::exp(x[1]);
        if (use_approx) {
            FieldState f = make_gaussian(nbar, var, n_max, 0.0);
            for (int n = 0; n <= std::min(J2, f.n_max()); ++n) f.amps[n] = 0.0;
            detail::normalize_and_fix_phase(f.amps);
            return spin_target_fidelity(tcm_evolve_approx(f, J2, tau), Theta);
        }
        FieldState f = make_gaussian(nbar, var, n_max, pi / 2);
        return spin_target_fidelity(tcm_evolve_exact(f, J2, tau), Theta);
    };
    const double tau0 = pi / 2 / std::sqrt(nbar);
    const std::vector<double> x0{std::log(2.0 * nbar / pi), std::log(tau0)};
    const std::vector<double> lo{std::log(0.2 * nbar), std::log(tau0 * 0.5)};
    const std::vector<double> hi{std::log(1.5 * nbar), std::log(tau0 * 2.0)};
    NelderMeadOptions opt;
    opt.xtol = 1e-8;
    opt.ftol = 1e-13;
    OptimizationResult r = nelder_mead(obj, x0, lo, hi, opt, restarts, seed);
    TcmOptimum out;
    out.var = std::exp(r.params_opt[0]);
    out.tau = std::exp(r.params_opt[1]);
    out.fidelity = r.objective_opt;
    out.raw = r;
    return out;
}

// Maximum atomic purity over a (sigma^2, tau) grid with Nelder-Mead
// refinement from the best grid point; 1 - result is the no-go floor.
inline double tcm_max_purity(double nbar, int J2, int grid_per_axis = 13,
                             std::uint64_t seed = 1) {
    const int n_max = suggest_nmax(nbar, 1.2 * nbar);
    auto purity_of = [&](double var, double tau) {
        FieldState f = make_gaussian(nbar, var, n_max, pi / 2);
        return tcm_evolve_exact(f, J2, tau).atomic_purity();
    };
    const double tau0 = pi / 2 / std::sqrt(nbar);
    double best = 0.0, bvar = 2.0 * nbar / pi, btau = tau0;
    for (int i = 0; i < grid_per_axis; ++i) {
        const double var = nbar * (0.5 + 0.6 * i / (grid_per_axis - 1));
        for (int j = 0; j < grid_per_axis; ++j) {
            const double tau = tau0 * (0.85 + 0.3 * j / (grid_per_axis - 1));
            const double p = purity_of(var, tau);
            if (p > best) {
                best = p;
                bvar = var;
                btau = tau;
            }
        }
    }
    Objective obj = [&](const std::vector<double>& x) {
        return purity_of(std::exp(x[0]), std::exp(x[1]));
    };
    NelderMeadOptions opt;
    opt.xtol = 1e-9;
    opt.ftol = 1e-15;
    OptimizationResult r =
        nelder_mead(obj, {std::log(bvar), std::log(btau)},
                    {std::log(0.3 * nbar), std::log(tau0 * 0.7)},
                    {std::log(1.3 * nbar), std::log(tau0 * 1.3)}, opt, 2, seed);
    return std::max(best, r.objective_opt);
}

} // namespace qpulse
