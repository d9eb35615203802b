#include <catch2/catch_amalgamated.hpp>

#include "qpulse/exact_states.hpp"
#include "qpulse/fidelity.hpp"

using namespace qpulse;

TEST_CASE("target state amplitudes", "[fidelity]") {
    TargetAmplitudes t1 = target_state({0.0, 0.0}, pi / 2);
    REQUIRE(t1.g.real() == Catch::Approx(1 / std::sqrt(2.0)));
    REQUIRE(t1.e.real() == Catch::Approx(1 / std::sqrt(2.0)));

    TargetAmplitudes t2 = target_state({pi, 0.0}, pi / 2);
    REQUIRE(t2.g.real() == Catch::Approx(-1 / std::sqrt(2.0)));
    REQUIRE(t2.e.real() == Catch::Approx(1 / std::sqrt(2.0)));

    TargetAmplitudes t3 = target_state({1.1, 0.7}, 0.0);
    REQUIRE(std::abs(t3.g - cplx(std::cos(0.55), 0)) < 1e-14);
    REQUIRE(std::abs(t3.e - std::polar(std::sin(0.55), 0.7)) < 1e-14);
}

TEST_CASE("identity pulse has unit fidelity", "[fidelity]") {
    FieldState vac = make_fock(0, 3);
    REQUIRE(avg_fidelity_full_sphere(vac, 0.0, 0.0) == Catch::Approx(1.0));
    REQUIRE(avg_fidelity_fixed_phi(vac, 0.0, 0.0) == Catch::Approx(1.0));
}

TEST_CASE("closed forms match the quadrature oracle", "[fidelity]") {
    SplitMix64 rng(0xF1DEL);
    for (int c = 0; c < 5; ++c) {
        const int n_max = 6 + static_cast<int>(rng.next_u64() % 30);
        FieldState f;
        f.amps.resize(n_max + 1);
        for (auto& a : f.amps) a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        detail::normalize_and_fix_phase(f.amps);
        const double tau = rng.uniform(0.05, 3.0);
        const double Theta = rng.uniform(0.0, 2 * pi);
        REQUIRE(avg_fidelity_full_sphere(f, tau, Theta) ==
                Catch::Approx(oracle_avg_fidelity(f, tau, Theta, Averaging::FullSphere))
                    .margin(1e-10));
        REQUIRE(avg_fidelity_fixed_phi(f, tau, Theta) ==
                Catch::Approx(oracle_avg_fidelity(f, tau, Theta, Averaging::FixedPhi, 256))
                    .margin(1e-10));
    }
}

TEST_CASE("locked fast paths agree with the general paths", "[fidelity]") {
    SplitMix64 rng(0x10CC);
    for (int c = 0; c < 6; ++c) {
        const double nbar = rng.uniform(5.0, 40.0);
        const double var = rng.uniform(0.5, 1.2) * nbar;
        const double vp = rng.uniform(0.0, pi);
        const int n_max = suggest_nmax(nbar, var);
        FieldState f = make_gaussian(nbar, var, n_max, vp);
        std::vector<double> mag(f.amps.size());
        for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(f.amps[i]);
        const double tau = rng.uniform(0.1, 1.0);
        const double Theta = rng.uniform(0.0, 2 * pi);
        REQUIRE(avg_fidelity_full_sphere(f, tau, Theta) ==
                Catch::Approx(avg_fidelity_full_sphere_locked(mag, tau, Theta, vp))
                    .margin(1e-12));
        REQUIRE(avg_fidelity_fixed_phi(f, tau, Theta) ==
                Catch::Approx(avg_fidelity_fixed_phi_locked(mag, tau, Theta, vp))
                    .margin(1e-12));
    }
}

TEST_CASE("fidelities stay inside [0, 1]", "[fidelity]") {
    SplitMix64 rng(0xBEEF);
    for (int c = 0; c < 40; ++c) {
        const int n_max = 4 + static_cast<int>(rng.next_u64() % 20);
        FieldState f;
        f.amps.resize(n_max + 1);
        for (auto& a : f.amps) a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        detail::normalize_and_fix_phase(f.amps);
        const double tau = rng.uniform(0.0, 10.0);
        const double Theta = rng.uniform(0.0, 2 * pi);
        for (const double F : {avg_fidelity_full_sphere(f, tau, Theta),
                               avg_fidelity_fixed_phi(f, tau, Theta)}) {
            REQUIRE(F >= -1e-12);
            REQUIRE(F <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("quarter-turn phase step is optimal", "[fidelity]") {
    FieldState base = make_gaussian(20.0, 0.9 * 20.0, 120, 0.0);
    std::vector<double> mag(base.amps.size());
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(base.amps[i]);
    const double tau = pi / 2 / std::sqrt(20.0);

    auto argmax_varphi = [&](double Theta) {
        double best_vp = 0.0, best = -1.0;
        for (int i = -60; i <= 60; ++i) {
            const double vp = pi * i / 60.0;
            const double F = avg_fidelity_full_sphere_locked(mag, tau, Theta, vp);
            if (F > best) {
                best = F;
                best_vp = vp;
            }
        }
        return best_vp;
    };
    REQUIRE(argmax_varphi(pi / 2) == Catch::Approx(pi / 2).margin(0.06));
    // sin(Theta) < 0 flips the optimum to -pi/2
    REQUIRE(argmax_varphi(3 * pi / 2) == Catch::Approx(-pi / 2).margin(0.06));
}

TEST_CASE("pointwise fidelity of an exact pulse state", "[fidelity]") {
    RecursionBuild b = build_ground(pi / 3, 40, 1);
    // evaluated at its own design point the pulse is exact
    JointState j = evolve_from_ground(b.state, {b.tau, 0.0, 1});
    QubitDensity rho = reduce_atom(j);
    REQUIRE(rho.fidelity_to({pi / 3, 0.0}) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("joint evolution hits the rotated target at high energy", "[fidelity]") {
    const double nbar = 500.0;
    FieldState f = make_gaussian(nbar, nbar * sinc(pi / 4), 680);
    const double F = pointwise_fidelity(f, pi / 2 / std::sqrt(nbar),
                                        {pi / 3, pi / 5}, pi / 2);
    REQUIRE(F >= 0.99);
}

TEST_CASE("gate spec dispatch", "[fidelity]") {
    FieldState f = make_gaussian(15.0, 12.0, 90);
    const double tau = 0.4;
    GateSpec full{1.2, Averaging::FullSphere, pi / 2};
    GateSpec fixed{1.2, Averaging::FixedPhi, pi / 2};
    REQUIRE(avg_fidelity(f, tau, full) ==
            Catch::Approx(avg_fidelity_full_sphere(f, tau, 1.2)));
    REQUIRE(avg_fidelity(f, tau, fixed) ==
            Catch::Approx(avg_fidelity_fixed_phi(f, tau, 1.2)));
}

TEST_CASE("oracle quadrature is converged", "[fidelity]") {
    FieldState f = make_gaussian(12.0, 10.0, 80);
    const double tau = 0.4, Theta = 1.3;
    const double a = oracle_avg_fidelity(f, tau, Theta, Averaging::FullSphere, 128, 64);
    const double b = oracle_avg_fidelity(f, tau, Theta, Averaging::FullSphere, 256, 64);
    REQUIRE(std::abs(a - b) < 1e-10);
    REQUIRE_THROWS_AS(oracle_avg_fidelity(f, tau, Theta, Averaging::FullSphere, 32, 64),
                      std::domain_error);
}
