#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpulse/io.hpp"
#include "qpulse/pipelines.hpp"
#include "qpulse/verify.hpp"
#include "qpulse/wigner.hpp"

namespace qpulse {

// Desk-scale resource caps; figure runs whose stated parameters exceed them
// abort with ResourceCapError (CLI exit code 3).
struct ResourceCaps {
    double max_nbar = 1000.0;
    int max_nmax = 2000;
    int max_J2 = 12;
};

struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void check_caps(const ResourceCaps& caps, double nbar, int n_max, int J2 = 1) {
    if (nbar > caps.max_nbar)
        throw ResourceCapError("nbar exceeds resource cap");
    if (n_max > caps.max_nmax)
        throw ResourceCapError("n_max exceeds resource cap");
    if (J2 > caps.max_J2)
        throw ResourceCapError("J2 exceeds resource cap");
}

// Named objectives for grid sweeps. Parameter names follow the CSV axis
// names. Unknown ids are a domain error.
inline SweepObjective objective_by_id(const std::string& id) {
    auto get = [](const std::map<std::string, double>& p, const std::string& k,
                  double fallback = std::nan("")) {
        auto it = p.find(k);
        if (it != p.end()) return it->second;
        if (std::isnan(fallback))
            throw std::domain_error("objective: missing parameter " + k);
        return fallback;
    };
    if (id == "avg_fidelity_full_sphere") {
        return [get](const std::map<std::string, double>& p) {
            const double nbar = get(p, "nbar");
            const double var = get(p, "var");
            const int n_max = static_cast<int>(get(p, "n_max", suggest_nmax(nbar, var)));
            return avg_fidelity_full_sphere(
                make_gaussian(nbar, var, n_max, get(p, "phase_step", pi / 2)),
                get(p, "tau"), get(p, "Theta"));
        };
    }
    if (id == "avg_fidelity_fixed_phi") {
        return [get](const std::map<std::string, double>& p) {
            const double nbar = get(p, "nbar");
            const double var = get(p, "var");
            const int n_max = static_cast<int>(get(p, "n_max", suggest_nmax(nbar, var)));
            return avg_fidelity_fixed_phi(
                make_gaussian(nbar, var, n_max, get(p, "varphi", pi / 2)),
                get(p, "tau"), get(p, "Theta"));
        };
    }
    if (id == "tcm_fidelity_exact") {
        return [get](const std::map<std::string, double>& p) {
            const double nbar = get(p, "nbar");
            const double var = get(p, "var");
            const int n_max = static_cast<int>(get(p, "n_max", suggest_nmax(nbar, var)));
            FieldState f = make_gaussian(nbar, var, n_max, pi / 2);
            return spin_target_fidelity(
                tcm_evolve_exact(f, static_cast<int>(get(p, "J2")), get(p, "tau")),
                get(p, "Theta", pi / 2));
        };
    }
    if (id == "tcm_impurity") {
        return [get](const std::map<std::string, double>& p) {
            const double nbar = get(p, "nbar");
            const double var = get(p, "var");
            const int n_max = static_cast<int>(get(p, "n_max", suggest_nmax(nbar, var)));
            FieldState f = make_gaussian(nbar, var, n_max, pi / 2);
            return 1.0 - tcm_evolve_exact(f, static_cast<int>(get(p, "J2")), get(p, "tau"))
                             .atomic_purity();
        };
    }
    throw std::domain_error("unknown objective id: " + id);
}

namespace fig_detail {

inline double poisson_prob(int n, double nbar) {
    if (nbar <= 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(n * std::log(nbar) - nbar - std::lgamma(n + 1.0));
}

inline std::vector<double> theta_six() {
    return {pi / 8, 2 * pi / 8, 3 * pi / 8, 4 * pi / 8, 5 * pi / 8, 6 * pi / 8};
}

inline json base_manifest(const std::string& figure, bool paper_scale,
                          std::uint64_t seed) {
    json m;
    m["figure"] = figure;
    m["scale"] = paper_scale ? "paper" : "desk";
    m["seed"] = seed;
    return m;
}

} // namespace fig_detail

// Photon-number distributions of the exact ground-start pulse states at
// n_max = 200 for six pulse areas, next to same-energy Poissonians.
inline json figure_fig1(const std::string& out_dir, bool paper_scale,
                        std::uint64_t seed, unsigned, const ResourceCaps& caps) {
    const auto t0 = std::chrono::steady_clock::now();
    const int n_max = 200;
    check_caps(caps, 0.0, n_max);
    CsvWriter csv(out_dir + "/fig1.csv");
    csv.header({"theta", "n", "prob", "coherent_prob"});
    json thetas = json::array();
    for (const double th : fig_detail::theta_six()) {
        RecursionBuild b = build_ground(th, n_max, 1);
        const double nbar = moments(b.state).mean;
        for (int n = 0; n <= b.state.n_max(); ++n)
            csv.row({th, static_cast<double>(n), std::norm(b.state.amps[n]),
                     fig_detail::poisson_prob(n, nbar)});
        thetas.push_back(th);
    }
    json m = fig_detail::base_manifest("fig1", paper_scale, seed);
    m["n_max"] = n_max;
    m["theta"] = thetas;
    m["outputs"] = {"fig1.csv"};
    m["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

// Integrated Wigner negativities of the ground-start states for small
// truncations, showing the rapid approach to Gaussianity.
inline json figure_fig2(const std::string& out_dir, bool paper_scale,
                        std::uint64_t seed, unsigned threads, const ResourceCaps& caps) {
    const auto t0 = std::chrono::steady_clock::now();
    check_caps(caps, 0.0, 10);
    CsvWriter csv(out_dir + "/fig2.csv");
    csv.header({"theta", "n_max", "negativity", "raw", "below_resolution"});
    const auto thetas = fig_detail::theta_six();
    struct Row {
        double th;
        int nb;
        NegativityResult r;
    };
    std::vector<Row> rows(thetas.size() * 9);
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double th = thetas[i / 9];
        const int nb = 2 + static_cast<int>(i % 9);
        RecursionBuild b = build_ground(th, nb, 1);
        rows[i] = Row{th, nb, negativity_full(b.state, default_phase_grid(b.state))};
    });
    for (const auto& r : rows)
        csv.row({r.th, static_cast<double>(r.nb), r.r.delta, r.r.raw,
                 r.r.below_resolution ? 1.0 : 0.0});
    json m = fig_detail::base_manifest("fig2", paper_scale, seed);
    m["n_max_range"] = {2, 10};
    m["outputs"] = {"fig2.csv"};
    m["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

// Full-sphere pi/2 fidelity against sigma^2/nbar at nbar = 20, tau optimized
// per point; the argmax lands near 0.9.
inline json figure_fig3(const std::string& out_dir, bool paper_scale,
                        std::uint64_t seed, unsigned threads, const ResourceCaps& caps) {
    const auto t0 = std::chrono::steady_clock::now();
    const double nbar = 20.0;
    const int n_max = paper_scale ? 400 : 200;
    const int points = paper_scale ? 81 : 33;
    check_caps(caps, nbar, n_max);
    struct Row {
        double ratio, F, tau;
    };
    std::vector<Row> rows(points);
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double ratio = 0.5 + 0.8 * static_cast<double>(i) / (points - 1);
        FieldState f = make_gaussian(nbar, ratio * nbar, n_max);
        const double tau0 = pi / 2 / std::sqrt(nbar);
        Objective obj = [&](const std::vector<double>& x) {
            return avg_fidelity_full_sphere(f, std::exp(x[0]), pi / 2);
        };
        NelderMeadOptions opt;
        opt.xtol = 1e-10;
        opt.ftol = 1e-14;
        OptimizationResult r =
            nelder_mead(obj, {std::log(tau0)}, {std::log(0.5 * tau0)},
                        {std::log(2.0 * tau0)}, opt, 1, seed);
        rows[i] = Row{ratio, r.objective_opt, std::exp(r.params_opt[0])};
    });
    CsvWriter csv(out_dir + "/fig3.csv");
    csv.header({"var_over_nbar", "avg_fidelity", "tau_opt"});
    double best_ratio = 0.0, best_F = -1.0;
    for (const auto& r : rows) {
        csv.row({r.ratio, r.F, r.tau});
        if (r.F > best_F) {
            best_F = r.F;
            best_ratio = r.ratio;
        }
    }
    json m = fig_detail::base_manifest("fig3", paper_scale, seed);
    m["nbar"] = nbar;
    m["n_max"] = n_max;
    m["argmax_var_over_nbar"] = best_ratio;
    m["outputs"] = {"fig3.csv"};
    m["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

// Optimal variances and fidelities vs pulse area for the averaged gates,
// with the sinc reference curves.
inline json figure_fig4(const std::string& out_dir, bool paper_scale,
                        std::uint64_t seed, unsigned threads, const ResourceCaps& caps) {
    const auto t0 = std::chrono::steady_clock::now();
    const double nbar = paper_scale ? 500.0 : 100.0;
    const int points = paper_scale ? 16 : 8;
    check_caps(caps, nbar, gate_nmax(nbar));
    struct Row {
        double Theta;
        GateOptimum full, fixed;
    };
    std::vector<Row> rows(points);
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double Theta = pi * static_cast<double>(i + 1) / points;
        rows[i] = Row{Theta, optimize_full_sphere(nbar, Theta, seed + i, 4),
                      optimize_fixed_phi(nbar, Theta, true, seed + 1000 + i, 4)};
    });
    CsvWriter csv(out_dir + "/fig4.csv");
    csv.header({"Theta", "var_ratio_full", "F_full", "var_ratio_fixed_phi",
                "varphi_opt", "F_fixed_phi", "curve_sinc_theta", "curve_sinc_half",
                "curve_sinc_half_over_sqrt2"});
    for (const auto& r : rows)
        csv.row({r.Theta, r.full.var / nbar, r.full.fidelity, r.fixed.var / nbar,
                 r.fixed.varphi, r.fixed.fidelity, sinc(r.Theta),
                 sinc(r.Theta / 2), sinc(r.Theta / 2) / std::sqrt(2.0)});
    json m = fig_detail::base_manifest("fig4", paper_scale, seed);
    m["nbar"] = nbar;
    m["outputs"] = {"fig4.csv"};
    m["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

// Additive fidelity gain and multiplicative error reduction of optimally
// squeezed fields over same-energy unsqueezed ones.
inline json figure_fig6(const std::string& out_dir, bool paper_scale,
                        std::uint64_t seed, unsigned threads, const ResourceCaps& caps) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> nbars = paper_scale ? std::vector<double>{50.0, 200.0}
                                                  : std::vector<double>{50.0};
    const int points = paper_scale ? 16 : 8;
    for (const double nb : nbars) check_caps(caps, nb, gate_nmax(nb));
    std::vector<ImprovementPoint> rows(nbars.size() * points);
    std::vector<double> row_nbar(rows.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double nb = nbars[i / points];
        const double Theta = pi * static_cast<double>(i % points + 1) / points;
        rows[i] = improvement_at(nb, Theta, seed + i);
        row_nbar[i] = nb;
    });
    CsvWriter csv(out_dir + "/fig6.csv");
    csv.header({"nbar", "Theta", "F_squeezed", "F_coherent", "dF", "error_ratio"});
    for (std::size_t i = 0; i < rows.size(); ++i)
        csv.row({row_nbar[i], rows[i].Theta, rows[i].F_squeezed, rows[i].F_coherent,
                 rows[i].dF, rows[i].error_ratio});
    json m = fig_detail::base_manifest("fig6", paper_scale, seed);
    m["nbar"] = nbars;
    m["outputs"] = {"fig6.csv"};
    m["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

// Collective pi/2 pulse optima from the exact block evolution.
inline json figure_tcm_fig4(const std::string& out_dir, bool paper_scale,
                            std::uint64_t seed, unsigned threads,
                            const ResourceCaps& caps) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> nbars = paper_scale ? std::vector<double>{100.0, 200.0}
                                                  : std::vector<double>{100.0};
    const std::vector<int> J2s = paper_scale ? std::vector<int>{2, 4, 6, 8}
                                             : std::vector<int>{2, 4, 6};
    for (const double nb : nbars)
        for (const int J2 : J2s) check_caps(caps, nb, suggest_nmax(nb, 1.5 * nb), J2);
    struct Row {
        double nbar;
        int J2;
        TcmOptimum o;
    };
    std::vector<Row> rows(nbars.size() * J2s.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double nb = nbars[i / J2s.size()];
        const int J2 = J2s[i % J2s.size()];
        rows[i] = Row{nb, J2, optimize_tcm(nb, J2, false, seed + i, 8)};
    });
    CsvWriter csv(out_dir + "/tcm_fig4.csv");
    csv.header({"J2", "nbar", "one_minus_F", "var_opt", "var_opt_over_classical",
                "tau_opt", "tau_sqrt_nbar_over_half_pi"});
    for (const auto& r : rows)
        csv.row({static_cast<double>(r.J2), r.nbar, 1.0 - r.o.fidelity, r.o.var,
                 r.o.var / (2.0 * r.nbar / pi), r.o.tau,
                 r.o.tau * std::sqrt(r.nbar) / (pi / 2)});
    json m = fig_detail::base_manifest("tcm-fig4", paper_scale, seed);
    m["outputs"] = {"tcm_fig4.csv"};
    m["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

// Same optima from the strong-field approximate propagator, with the
// J-shifted reference curves.
inline json figure_tcm_fig5(const std::string& out_dir, bool paper_scale,
                            std::uint64_t seed, unsigned threads,
                            const ResourceCaps& caps) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> nbars = paper_scale ? std::vector<double>{200.0, 500.0}
                                                  : std::vector<double>{500.0};
    const std::vector<int> J2s = paper_scale ? std::vector<int>{2, 4, 6, 8, 10, 12}
                                             : std::vector<int>{2, 4, 8};
    for (const double nb : nbars)
        for (const int J2 : J2s) check_caps(caps, nb, suggest_nmax(nb, 1.5 * nb), J2);
    struct Row {
        double nbar;
        int J2;
        TcmOptimum o;
    };
    std::vector<Row> rows(nbars.size() * J2s.size());
    parallel_for(rows.size(), threads, [&](std::size_t i) {
        const double nb = nbars[i / J2s.size()];
        const int J2 = J2s[i % J2s.size()];
        rows[i] = Row{nb, J2, optimize_tcm(nb, J2, true, seed + i, 8)};
    });
    CsvWriter csv(out_dir + "/tcm_fig5.csv");
    csv.header({"J2", "nbar", "one_minus_F", "var_opt", "var_curve", "tau_opt",
                "tau_curve"});
    for (const auto& r : rows) {
        const double J = r.J2 / 2.0;
        csv.row({static_cast<double>(r.J2), r.nbar, 1.0 - r.o.fidelity, r.o.var,
                 2.0 * (r.nbar - 1.2 * J + 0.5) / pi, r.o.tau,
                 pi / 2 / std::sqrt(r.nbar - 2.0 * J + 0.5)});
    }
    json m = fig_detail::base_manifest("tcm-fig5", paper_scale, seed);
    m["outputs"] = {"tcm_fig5.csv"};
    m["runtime_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return m;
}

inline json run_figure(const std::string& id, const std::string& out_dir,
                       bool paper_scale, std::uint64_t seed, unsigned threads,
                       const ResourceCaps& caps = {}) {
    std::filesystem::create_directories(out_dir);
    if (id == "fig1") return figure_fig1(out_dir, paper_scale, seed, threads, caps);
    if (id == "fig2") return figure_fig2(out_dir, paper_scale, seed, threads, caps);
    if (id == "fig3") return figure_fig3(out_dir, paper_scale, seed, threads, caps);
    if (id == "fig4") return figure_fig4(out_dir, paper_scale, seed, threads, caps);
    if (id == "fig6") return figure_fig6(out_dir, paper_scale, seed, threads, caps);
    if (id == "fig5" || id == "tcm-fig5")
        return figure_tcm_fig5(out_dir, paper_scale, seed, threads, caps);
    if (id == "tcm-fig4") return figure_tcm_fig4(out_dir, paper_scale, seed, threads, caps);
    throw std::domain_error("unknown figure id: " + id);
}

} // namespace qpulse
