#pragma once

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "qpulse/exact_states.hpp"
#include "qpulse/fidelity.hpp"
#include "qpulse/fock.hpp"
#include "qpulse/jcm.hpp"
#include "qpulse/math_util.hpp"
#include "qpulse/pipelines.hpp"
#include "qpulse/tcm.hpp"
#include "qpulse/wigner.hpp"

namespace qpulse {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double runtime_s = 0.0;
    double budget_s = 0.0;
    std::string detail;
};

namespace verify_detail {

inline std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

inline const std::vector<double>& six_thetas() {
    static const std::vector<double> t{pi / 8, pi / 4, 3 * pi / 8,
                                       pi / 2, 5 * pi / 8, 3 * pi / 4};
    return t;
}

inline FieldState random_field(SplitMix64& rng, int n_max) {
    FieldState f;
    f.amps.resize(static_cast<std::size_t>(n_max) + 1);
    for (auto& a : f.amps)
        a = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    detail::normalize_and_fix_phase(f.amps);
    return f;
}

} // namespace verify_detail

//
// 1. Exactness of the recursion builders across theta x n x m x start:
//    build -> evolve gives atom purity and fidelity to |theta> within 1e-10.
//    Cells with n_max < m for ground starts are undefined (the builder
//    rejects them) and are skipped.
//
inline CriterionResult criterion_exactness() {
    using namespace verify_detail;
    CriterionResult res{1, "exactness suite (build->evolve purity/fidelity >= 1-1e-10)"};
    res.budget_s = 10.0;
    const auto t0 = std::chrono::steady_clock::now();

    int checked = 0, failed = 0, skipped = 0;
    double worst = 0.0;
    std::string worst_cell = "none";
    for (const double theta : six_thetas()) {
        for (const int nb : {2, 5, 20, 100}) {
            for (const int m : {1, 2, 3}) {
                for (const int start : {0, 1}) {
                    if (start == 0 && nb < m) {
                        ++skipped;
                        continue;
                    }
                    RecursionBuild b = start == 0 ? build_ground(theta, nb, m)
                                                  : build_excited(theta, nb, 0, m);
                    EvolutionParams p{b.tau, 0.0, m};
                    JointState j = start == 0 ? evolve_from_ground(b.state, p)
                                              : evolve_from_excited(b.state, p);
                    QubitDensity rho = reduce_atom(j);
                    const double imp = 1.0 - rho.purity();
                    const double infid = 1.0 - rho.fidelity_to({theta, 0.0});
                    const double bad = std::max(imp, infid);
                    ++checked;
                    if (bad > worst) {
                        worst = bad;
                        worst_cell = fmt("%s theta=%.4f n=%d m=%d", start == 0 ? "ground" : "excited",
                                         theta, nb, m);
                    }
                    if (!(imp <= 1e-10 && infid <= 1e-10)) ++failed;
                }
            }
        }
    }
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = failed == 0 && res.runtime_s < res.budget_s;
    res.detail = fmt("%d/%d cells ok (%d undefined cells skipped: ground n_max < m); "
                     "worst deviation %.2e at %s",
                     checked - failed, checked, skipped, worst, worst_cell.c_str());
    return res;
}

//
// 2. Ground builds at n_max = 200: fitted sigma^2/nbar within 5% of sinc theta.
//
inline CriterionResult criterion_sinc_law() {
    using namespace verify_detail;
    CriterionResult res{2, "sinc-variance law at n_max = 200"};
    res.budget_s = 5.0;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool ok = true;
    std::string detail;
    for (const double theta : six_thetas()) {
        RecursionBuild b = build_ground(theta, 200, 1);
        Moments m = fit_gaussian(b.state);
        const double ratio = m.variance / m.mean;
        const double rel = std::abs(ratio / sinc(theta) - 1.0);
        worst = std::max(worst, rel);
        if (rel > 0.05) ok = false;
    }
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = ok && res.runtime_s < res.budget_s;
    res.detail = fmt("worst |ratio/sinc - 1| = %.3f%% (tol 5%%)", 100 * worst);
    return res;
}

//
// 3. Closed-form averaged fidelities vs the quadrature oracle on 25 random
//    (field, tau, Theta) cases, both averaging modes, to 1e-8.
//
inline CriterionResult criterion_oracle_agreement() {
    using namespace verify_detail;
    CriterionResult res{3, "closed forms vs quadrature oracle (<= 1e-8, 25 random cases)"};
    res.budget_s = 30.0;
    const auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(0xACCE55ULL);
    double worst = 0.0;
    for (int c = 0; c < 25; ++c) {
        const int n_max = 8 + static_cast<int>(rng.next_u64() % 52);
        FieldState f = random_field(rng, n_max);
        const double tau = rng.uniform(0.05, 3.0);
        const double Theta = rng.uniform(0.0, 2 * pi);
        const double d1 = std::abs(avg_fidelity_full_sphere(f, tau, Theta) -
                                   oracle_avg_fidelity(f, tau, Theta, Averaging::FullSphere));
        const double d2 = std::abs(avg_fidelity_fixed_phi(f, tau, Theta) -
                                   oracle_avg_fidelity(f, tau, Theta, Averaging::FixedPhi, 256));
        worst = std::max({worst, d1, d2});
    }
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = worst <= 1e-8 && res.runtime_s < res.budget_s;
    res.detail = fmt("worst |closed - oracle| = %.2e", worst);
    return res;
}

//
// 4. Full-sphere pi/2 optimum at nbar = 20, n_max = 400:
//    argmax sigma^2/nbar = 0.90 +- 0.03.
//
inline CriterionResult criterion_fig3_optimum() {
    using namespace verify_detail;
    CriterionResult res{4, "pi/2 gate optimum at nbar = 20 (sigma^2/nbar = 0.90 +- 0.03)"};
    res.budget_s = 60.0;
    const auto t0 = std::chrono::steady_clock::now();
    Objective obj = [&](const std::vector<double>& x) {
        return avg_fidelity_full_sphere(make_gaussian(20.0, std::exp(x[0]), 400),
                                        std::exp(x[1]), pi / 2);
    };
    const double tau0 = pi / 2 / std::sqrt(20.0);
    NelderMeadOptions opt;
    opt.xtol = 1e-8;
    opt.ftol = 1e-13;
    OptimizationResult r = nelder_mead(obj, {std::log(18.0), std::log(tau0)},
                                       {std::log(5.0), std::log(0.5 * tau0)},
                                       {std::log(35.0), std::log(2.0 * tau0)}, opt, 4, 11);
    const double ratio = std::exp(r.params_opt[0]) / 20.0;
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = std::abs(ratio - 0.90) <= 0.03 && res.runtime_s < res.budget_s;
    res.detail = fmt("argmax sigma^2/nbar = %.4f, F = %.6f", ratio, r.objective_opt);
    return res;
}

//
// 5. Squeezing laws at nbar = 500: full-sphere sigma^2/nbar = sinc(Theta/2)
//    within 3%; fixed-phi (varphi optimized) = sinc(Theta/2)/sqrt(2) within
//    5%; at Theta = pi/2 fixed-phi sigma^2 = 2 nbar/pi within 3%.
//
inline CriterionResult criterion_squeezing_laws() {
    using namespace verify_detail;
    CriterionResult res{5, "squeezing laws at nbar = 500 (sinc(Theta/2), /sqrt2, 2nbar/pi)"};
    res.budget_s = 600.0;
    const auto t0 = std::chrono::steady_clock::now();
    const double nbar = 500.0;
    bool ok = true;
    double worst_full = 0.0, worst_fix = 0.0, pi2_rel = 0.0;
    for (const double Theta : {pi / 4, pi / 2, 3 * pi / 4, pi}) {
        GateOptimum full = optimize_full_sphere(nbar, Theta, 21, 4);
        const double rel_full = std::abs(full.var / (nbar * sinc(Theta / 2)) - 1.0);
        worst_full = std::max(worst_full, rel_full);
        if (rel_full > 0.03) ok = false;

        GateOptimum fix = optimize_fixed_phi(nbar, Theta, true, 22, 4);
        const double rel_fix =
            std::abs(fix.var / (nbar * sinc(Theta / 2) / std::sqrt(2.0)) - 1.0);
        worst_fix = std::max(worst_fix, rel_fix);
        if (rel_fix > 0.05) ok = false;
        if (Theta == pi / 2) {
            pi2_rel = std::abs(fix.var / (2.0 * nbar / pi) - 1.0);
            if (pi2_rel > 0.03) ok = false;
        }
    }
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = ok && res.runtime_s < res.budget_s;
    res.detail = fmt("worst rel: full-sphere %.3f%% (tol 3%%), fixed-phi %.3f%% (tol 5%%), "
                     "pi/2 fixed-phi vs 2nbar/pi %.3f%% (tol 3%%)",
                     100 * worst_full, 100 * worst_fix, 100 * pi2_rel);
    return res;
}

//
// 6. Improvement curves: dF >= 0 and increasing on a 16-point Theta grid at
//    nbar in {50, 200}; error ratio < 1 for Theta >= pi/4.
//
inline CriterionResult criterion_improvement() {
    using namespace verify_detail;
    CriterionResult res{6, "squeezed-vs-coherent improvement curves"};
    res.budget_s = 300.0;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string note;
    for (const double nbar : {50.0, 200.0}) {
        double prev = -1.0;
        for (int i = 1; i <= 16; ++i) {
            const double Theta = pi * i / 16;
            ImprovementPoint p = improvement_at(nbar, Theta, 31);
            if (p.dF < 0.0) {
                ok = false;
                note += fmt(" dF<0 at nbar=%g Theta=%.3f;", nbar, Theta);
            }
            if (p.dF < prev) {
                ok = false;
                note += fmt(" not increasing at nbar=%g Theta=%.3f;", nbar, Theta);
            }
            if (Theta >= pi / 4 - 1e-12 && !(p.error_ratio < 1.0)) {
                ok = false;
                note += fmt(" ratio>=1 at nbar=%g Theta=%.3f;", nbar, Theta);
            }
            prev = p.dF;
        }
    }
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = ok && res.runtime_s < res.budget_s;
    res.detail = ok ? "dF >= 0, increasing in Theta; error ratio < 1 from pi/4 on"
                    : note;
    return res;
}

//
// 7. TCM oracles: J2 = 1 block evolution equals the JCM closed form and
//    J2 = 2 equals the two-atom analytic solution, elementwise to 1e-10,
//    over a 20-point tau grid.
//
inline CriterionResult criterion_tcm_oracles() {
    using namespace verify_detail;
    CriterionResult res{7, "TCM oracles (J2=1 == JCM, J2=2 == analytic, 1e-10)"};
    res.budget_s = 10.0;
    const auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(0x7C037C03ULL);
    FieldState f = random_field(rng, 30);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double tau = 0.1 + 4.9 * i / 19.0;
        DickeJointState c1 = tcm_evolve_exact(f, 1, tau);
        JointState j = evolve_from_ground(f, EvolutionParams{tau, 0.0, 1});
        for (int n = 0; n <= f.n_max(); ++n) {
            worst = std::max(worst, std::abs(c1.at(n, 0) - j.cg[n]));
            worst = std::max(worst, std::abs(c1.at(n, 1) - j.ce[n]));
        }
        DickeJointState c2 = tcm_evolve_exact(f, 2, tau);
        DickeJointState ca = tcm_evolve_n2_analytic(f, tau);
        for (std::size_t k = 0; k < c2.c.size(); ++k)
            worst = std::max(worst, std::abs(c2.c[k] - ca.c[k]));
    }
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = worst <= 1e-10 && res.runtime_s < res.budget_s;
    res.detail = fmt("worst elementwise deviation %.2e", worst);
    return res;
}

//
// 8. TCM optima: exact at nbar = 100, J2 in {2,4,8}: sigma^2 within 10% of
//    2 nbar/pi and tau sqrt(nbar) within 10% of pi/2; approximate at
//    nbar = 500: within 5% of sigma^2 = 2(nbar - 1.2 J + 0.5)/pi and
//    tau sqrt(nbar - 2J + 0.5) = pi/2.
//
inline CriterionResult criterion_tcm_optimum() {
    using namespace verify_detail;
    CriterionResult res{8, "TCM optima (exact nbar=100 within 10%; approx nbar=500 within 5%)"};
    res.budget_s = 900.0;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_exact = 0.0, worst_approx = 0.0;
    for (const int J2 : {2, 4, 8}) {
        TcmOptimum o = optimize_tcm(100.0, J2, false, 41, 8);
        const double rv = std::abs(o.var / (2.0 * 100.0 / pi) - 1.0);
        const double rt = std::abs(o.tau * std::sqrt(100.0) / (pi / 2) - 1.0);
        worst_exact = std::max({worst_exact, rv, rt});
        if (rv > 0.10 || rt > 0.10) ok = false;
    }
    for (const int J2 : {2, 4, 8}) {
        const double J = J2 / 2.0;
        TcmOptimum o = optimize_tcm(500.0, J2, true, 42, 8);
        const double rv = std::abs(o.var / (2.0 * (500.0 - 1.2 * J + 0.5) / pi) - 1.0);
        const double rt = std::abs(o.tau * std::sqrt(500.0 - 2.0 * J + 0.5) / (pi / 2) - 1.0);
        worst_approx = std::max({worst_approx, rv, rt});
        if (rv > 0.05 || rt > 0.05) ok = false;
    }
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = ok && res.runtime_s < res.budget_s;
    res.detail = fmt("worst rel: exact %.2f%% (tol 10%%), approx %.2f%% (tol 5%%)",
                     100 * worst_exact, 100 * worst_approx);
    return res;
}

//
// 9. No-go suite: detuned truncation residual is strictly positive for
//    delta/Omega_0 in {0.1, 0.5, 1}, decreases monotonically to 0 as
//    delta -> 0, and vanishes on resonance; the J2 = 2 atomic impurity
//    floor over the optimization grid stays above 1e-6.
//
inline CriterionResult criterion_nogo() {
    using namespace verify_detail;
    CriterionResult res{9, "no-go suite (detuned leak > 0; TCM impurity floor > 1e-6)"};
    res.budget_s = 120.0;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> grid;
    grid.reserve(20001);
    for (int i = 1; i <= 20001; ++i) grid.push_back(10.0 * pi * i / 20001);
    bool ok = true;
    std::string note;

    const double l01 = detuned_leak(5, 0.1, grid);
    const double l05 = detuned_leak(5, 0.5, grid);
    const double l10 = detuned_leak(5, 1.0, grid);
    if (!(l01 > 1e-6 && l05 > 1e-3 && l10 > 1e-3)) {
        ok = false;
        note += " detuned leak not positive;";
    }
    const double s1 = detuned_leak(5, 0.1, grid);
    const double s2 = detuned_leak(5, 0.01, grid);
    const double s3 = detuned_leak(5, 0.001, grid);
    if (!(s3 < s2 && s2 < s1)) {
        ok = false;
        note += " leak not monotone in delta;";
    }
    const double l0 = detuned_leak(5, 0.0, {pi / std::sqrt(5.0)});
    if (!(l0 <= 1e-12)) {
        ok = false;
        note += " resonant leak nonzero;";
    }

    const double max_purity = tcm_max_purity(100.0, 2, 13, 51);
    const double floor = 1.0 - max_purity;
    if (!(floor > 1e-6)) ok = false;
    const double infid_floor = 1.0 - optimize_tcm(100.0, 2, false, 52, 4).fidelity;

    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = ok && res.runtime_s < res.budget_s;
    res.detail = fmt("leaks {%.3e, %.3e, %.3e}; delta->0 chain {%.1e > %.1e > %.1e}; "
                     "resonant %.1e; impurity floor %.3e (required > 1e-6; "
                     "infidelity floor %.3e)%s",
                     l01, l05, l10, s1, s2, s3, l0, floor, infid_floor, note.c_str());
    return res;
}

//
// 10. Wigner suite: vacuum negativity <= 1e-6; the one-photon negativity
//     matches its analytic value 4 e^{-1/2} - 2 within 1e-4; ground-build
//     pi/2 negativities strictly decrease over n_max = 2..10.
//
inline CriterionResult criterion_wigner() {
    using namespace verify_detail;
    CriterionResult res{10, "Wigner suite (vacuum, one-photon value, decay trend)"};
    res.budget_s = 120.0;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string note;

    NegativityResult vac = negativity_full(make_fock(0, 4), PhaseGrid{6.0, 96, 128});
    if (!(std::abs(vac.raw) <= 1e-6)) {
        ok = false;
        note += fmt(" vacuum %.2e;", vac.raw);
    }
    const double one_exact = 4.0 * std::exp(-0.5) - 2.0;
    NegativityResult one = negativity_full(make_fock(1, 4), PhaseGrid{6.0, 96, 128});
    if (!(std::abs(one.delta - one_exact) <= 1e-4)) {
        ok = false;
        note += fmt(" |1> off by %.2e;", one.delta - one_exact);
    }
    double prev = 1e9;
    bool decreasing = true;
    std::string seq;
    for (int nb = 2; nb <= 10; ++nb) {
        RecursionBuild b = build_ground(pi / 2, nb, 1);
        NegativityResult nr = negativity_full(b.state, default_phase_grid(b.state));
        seq += fmt(" %.2e", nr.raw);
        if (!(nr.raw < prev)) decreasing = false;
        prev = nr.raw;
    }
    if (!decreasing) {
        ok = false;
        note += " trend not decreasing:" + seq + ";";
    }
    res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.pass = ok && res.runtime_s < res.budget_s;
    res.detail = ok ? fmt("vacuum %.1e; |1> = %.8f (analytic %.8f); trend%s",
                          vac.raw, one.delta, one_exact, seq.c_str())
                    : note;
    return res;
}

inline CriterionResult run_criterion(int id) {
    switch (id) {
        case 1: return criterion_exactness();
        case 2: return criterion_sinc_law();
        case 3: return criterion_oracle_agreement();
        case 4: return criterion_fig3_optimum();
        case 5: return criterion_squeezing_laws();
        case 6: return criterion_improvement();
        case 7: return criterion_tcm_oracles();
        case 8: return criterion_tcm_optimum();
        case 9: return criterion_nogo();
        case 10: return criterion_wigner();
        default: throw std::domain_error("run_criterion: id must be 1..10");
    }
}

// Suite names exposed by the CLI: exactness {1,2}, oracle {3,7,10},
// asymptotics {4,5,6,8}, nogo {9}, all {1..10}.
inline std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "exactness") return {1, 2};
    if (suite == "oracle") return {3, 7, 10};
    if (suite == "asymptotics") return {4, 5, 6, 8};
    if (suite == "nogo") return {9};
    if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    throw std::domain_error("unknown verify suite: " + suite);
}

} // namespace qpulse
