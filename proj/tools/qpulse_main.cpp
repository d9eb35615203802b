// qpulse command-line front end: build field states, reproduce the figure
// datasets as CSV, and run the verification suites.
//
// Exit codes: 0 ok, 1 verify failure, 2 domain error, 3 resource cap.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qpulse/cli_config.hpp"
#include "qpulse/exact_states.hpp"
#include "qpulse/figures.hpp"
#include "qpulse/io.hpp"
#include "qpulse/verify.hpp"

namespace fs = std::filesystem;
using namespace qpulse;

namespace {

void echo_config(const RunConfig& cfg, const json& extra) {
    fs::create_directories(cfg.out_dir);
    json j = cfg.echo();
    j["command"] = extra;
    write_json_file(cfg.out_dir + "/config.echo.json", j);
}

int cmd_build(const RunConfig& cfg, const std::string& kind, int n, int n_max,
              double nbar, double var, double phase_step, double theta, int k,
              int m, int n_min, int wigner_grid) {
    fs::create_directories(cfg.out_dir);
    FieldState state;
    json extra{{"name", "build"}, {"kind", kind}};
    if (kind == "fock") {
        state = make_fock(n, n_max);
        extra["n"] = n;
        extra["nmax"] = n_max;
    } else if (kind == "gaussian") {
        state = make_gaussian(nbar, var, n_max, phase_step);
        const Moments mo = moments(state);
        std::printf("moments: mean = %.10g variance = %.10g\n", mo.mean, mo.variance);
        extra["nbar"] = nbar;
        extra["var"] = var;
        extra["nmax"] = n_max;
        extra["phase_step"] = phase_step;
    } else if (kind == "transcoherent-ground" || kind == "transcoherent-excited") {
        RecursionBuild b = kind == "transcoherent-ground"
                               ? build_ground(theta, n_max, m)
                               : build_excited(theta, n_min, k, m);
        state = b.state;
        std::printf("tau = %.17g\n", b.tau);
        if (!b.exact_truncation)
            std::printf("boundary_leak = %.3e (no exact truncation rung for m >= 2)\n",
                        b.boundary_leak);
        write_json_file(cfg.out_dir + "/build.json", to_json(b));
        extra["theta"] = theta;
        extra["m"] = m;
        if (kind == "transcoherent-ground")
            extra["nmax"] = n_max;
        else {
            extra["nmin"] = n_min;
            extra["k"] = k;
        }
    } else {
        throw std::domain_error("unknown build kind: " + kind);
    }
    write_json_file(cfg.out_dir + "/state.json", to_json(state));
    write_distribution_csv(cfg.out_dir + "/distribution.csv", state);
    if (wigner_grid > 0)
        write_wigner_grid_csv(cfg.out_dir + "/wigner.csv", state,
                              default_phase_grid(state).extent, wigner_grid);
    echo_config(cfg, extra);
    return 0;
}

int cmd_figure(const RunConfig& cfg, const std::string& id, const std::string& scale) {
    if (scale != "desk" && scale != "paper")
        throw std::domain_error("scale must be 'desk' or 'paper'");
    const ResourceCaps caps{cfg.cap_nbar, cfg.cap_nmax, cfg.cap_J2};
    json manifest = run_figure(id, cfg.out_dir, scale == "paper", cfg.seed,
                               cfg.thread_count(), caps);
    manifest["threads"] = cfg.threads;
    write_json_file(cfg.out_dir + "/" + id + ".manifest.json", manifest);
    echo_config(cfg, json{{"name", "figure"}, {"id", id}, {"scale", scale}});
    std::printf("figure %s (%s scale) written to %s\n", id.c_str(), scale.c_str(),
                cfg.out_dir.c_str());
    return 0;
}

int cmd_verify(const std::string& suite) {
    int failures = 0;
    for (const int id : suite_criteria(suite)) {
        const CriterionResult r = run_criterion(id);
        std::printf("[%s] %2d %s: %s (%.2fs, budget %.0fs)\n",
                    r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
                    r.runtime_s, r.budget_s);
        std::fflush(stdout);
        if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantized field pulse design and verification"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", threads = "1";
    std::uint64_t seed = 20240801ULL;
    auto* opt_config = app.add_option("--config", config_path, "JSON config file");
    auto* opt_out = app.add_option("--out", out_dir, "output directory");
    auto* opt_seed = app.add_option("--seed", seed, "PRNG seed");
    auto* opt_threads = app.add_option("--threads", threads, "worker count or 'auto'");

    auto* build = app.add_subcommand("build", "construct a field state");
    std::string kind;
    int b_n = 0, b_nmax = 0, b_k = 0, b_m = 1, b_nmin = 0;
    double b_nbar = 0.0, b_var = 1.0, b_phase = pi / 2, b_theta = pi / 2;
    build->add_option("kind", kind,
                      "fock | gaussian | transcoherent-ground | transcoherent-excited")
        ->required();
    build->add_option("--n", b_n, "photon number (fock)");
    build->add_option("--nmax", b_nmax, "truncation index");
    build->add_option("--nbar", b_nbar, "mean photon number (gaussian)");
    build->add_option("--var", b_var, "photon-number variance (gaussian)");
    build->add_option("--phase-step", b_phase, "phase step between neighbours");
    build->add_option("--theta", b_theta, "pulse area");
    build->add_option("--k", b_k, "excitation branch (excited start)");
    build->add_option("--m", b_m, "photon order of the coupling");
    build->add_option("--nmin", b_nmin, "lowest occupied rung (excited start)");
    int b_wigner = 0;
    build->add_option("--wigner-grid", b_wigner,
                      "also dump W on an NxN phase-space grid");

    auto* figure = app.add_subcommand("figure", "emit a figure dataset as CSV");
    std::string fig_id, scale = "desk";
    figure->add_option("id", fig_id,
                       "fig1|fig2|fig3|fig4|fig5|fig6|tcm-fig4|tcm-fig5")
        ->required();
    figure->add_option("--scale", scale, "desk | paper");

    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all";
    verify->add_option("suite", suite, "exactness|oracle|asymptotics|nogo|all");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        cfg.out_dir = out_dir;
        cfg.seed = seed;
        cfg.threads = threads;
        if (!config_path.empty())
            merge_config(cfg, load_config_file(config_path), opt_out->count() > 0,
                         opt_seed->count() > 0, opt_threads->count() > 0);
        (void)opt_config;

        if (build->parsed())
            return cmd_build(cfg, kind, b_n, b_nmax, b_nbar, b_var, b_phase, b_theta,
                             b_k, b_m, b_nmin, b_wigner);
        if (figure->parsed()) return cmd_figure(cfg, fig_id, scale);
        if (verify->parsed()) return cmd_verify(suite);
    } catch (const ResourceCapError& e) {
        std::fprintf(stderr, "resource cap: %s\n", e.what());
        return 3;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
