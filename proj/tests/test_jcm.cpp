#include <catch2/catch_amalgamated.hpp>

#include "qpulse/exact_states.hpp"
#include "qpulse/jcm.hpp"

using namespace qpulse;

TEST_CASE("rabi frequencies", "[jcm]") {
    REQUIRE(rabi_freq(0) == Catch::Approx(1.0));
    REQUIRE(rabi_freq(3, {0.0, 0.0, 2}) == Catch::Approx(std::sqrt(20.0)));
    REQUIRE(rabi_freq(0, {0.0, 1.0, 1}) == Catch::Approx(std::sqrt(2.0)));
    REQUIRE(rabi_freq(-1) == 0.0);
    REQUIRE(rabi_freq(-2, {0.0, 0.0, 3}) == 0.0);
}

TEST_CASE("single-excitation pi pulse", "[jcm]") {
    FieldState one = make_fock(1, 3);
    JointState j = evolve_from_ground(one, {pi, 0.0, 1});
    REQUIRE(std::abs(j.ce[0] - cplx(0, -1)) < 1e-14);
    for (int n = 0; n <= 3; ++n) {
        if (n != 0) REQUIRE(std::abs(j.ce[n]) < 1e-14);
        REQUIRE(std::abs(j.cg[n]) < 1e-14);
    }

    FieldState vac = make_fock(0, 3);
    JointState jv = evolve_from_ground(vac, {2.7, 0.0, 1});
    REQUIRE(std::abs(jv.cg[0] - cplx(1, 0)) < 1e-14);
}

TEST_CASE("vacuum Rabi oscillation from excited", "[jcm]") {
    FieldState vac = make_fock(0, 2);
    JointState half = evolve_from_excited(vac, {pi, 0.0, 1});
    REQUIRE(std::abs(half.cg[1] - cplx(0, -1)) < 1e-14); // -i |1,g>
    JointState full = evolve_from_excited(vac, {2 * pi, 0.0, 1});
    REQUIRE(std::abs(full.ce[0] - cplx(-1, 0)) < 1e-14); // global phase -1
}

TEST_CASE("unitarity and excitation conservation", "[jcm]") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int n_max = 5 + static_cast<int>(rng.next_u64() % 40);
        FieldState f;
        f.amps.resize(n_max + 1);
        for (auto& a : f.amps) a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        detail::normalize_and_fix_phase(f.amps);
        const double tau = rng.uniform(0.0, 8.0);
        const int m = 1 + static_cast<int>(rng.next_u64() % 3);
        for (const bool excited : {false, true}) {
            JointState j = excited ? evolve_from_excited(f, {tau, 0.0, m})
                                   : evolve_from_ground(f, {tau, 0.0, m});
            REQUIRE(std::abs(j.norm2() - 1.0) < 1e-12);
        }
        // resonant m=1 excitation count: sum n |cg|^2 + (n+1) |ce|^2
        JointState j = evolve_from_ground(f, {tau, 0.0, 1});
        double exc = 0.0, exc0 = 0.0;
        for (int n = 0; n <= j.n_max(); ++n) {
            exc += n * std::norm(j.cg[n]) + (n + 1.0) * std::norm(j.ce[n]);
            if (n <= f.n_max()) exc0 += n * std::norm(f.amps[n]);
        }
        REQUIRE(exc == Catch::Approx(exc0).margin(1e-10));
        // detuned path reduces to resonant at delta = 0
        JointState jd = evolve_detuned_from_ground(f, {tau, 0.0, 1});
        for (int n = 0; n <= f.n_max(); ++n) {
            REQUIRE(std::abs(jd.cg[n] - j.cg[n]) < 1e-12);
            REQUIRE(std::abs(jd.ce[n] - j.ce[n]) < 1e-12);
        }
    }
}

TEST_CASE("dressed states acquire only a phase", "[jcm]") {
    const int n = 3;
    const double tau = 1.37;
    for (const double sign : {1.0, -1.0}) {
        JointState in;
        in.cg.assign(6, cplx{});
        in.ce.assign(6, cplx{});
        in.ce[n] = 1.0 / std::sqrt(2.0);
        in.cg[n + 1] = sign / std::sqrt(2.0);
        // evolve manually through the pair basis: phase exp(-+ i Om_n tau / 2)
        const double om = rabi_freq(n);
        JointState out;
        out.cg.assign(6, cplx{});
        out.ce.assign(6, cplx{});
        const cplx ph = std::polar(1.0, -sign * om * tau / 2);
        out.ce[n] = in.ce[n] * ph;
        out.cg[n + 1] = in.cg[n + 1] * ph;
        // same result from the closed-form evolution of the two components
        JointState a = evolve_from_excited(make_fock(n, n + 1), {tau, 0.0, 1});
        JointState b = evolve_from_ground(make_fock(n + 1, n + 1), {tau, 0.0, 1});
        cplx ce_n = (a.ce[n] + sign * b.ce[n]) / std::sqrt(2.0);
        cplx cg_n1 = (a.cg[n + 1] + sign * b.cg[n + 1]) / std::sqrt(2.0);
        REQUIRE(std::abs(ce_n - out.ce[n]) < 1e-13);
        REQUIRE(std::abs(cg_n1 - out.cg[n + 1]) < 1e-13);
    }
}

TEST_CASE("detuned evolution", "[jcm]") {
    // |0>: only a free phase on the ground amplitude
    FieldState vac = make_fock(0, 2);
    JointState j0 = evolve_detuned_from_ground(vac, {1.9, 0.7, 1});
    REQUIRE(std::abs(std::abs(j0.cg[0]) - 1.0) < 1e-13);

    // |1>, delta/Omega0 = 1, tau = pi: transfer probability sin^2(pi/sqrt2)/2 < 1
    FieldState one = make_fock(1, 2);
    JointState j1 = evolve_detuned_from_ground(one, {pi, 1.0, 1});
    const double expect = 0.5 * std::pow(std::sin(pi * std::sqrt(2.0) / 2), 2);
    REQUIRE(std::norm(j1.ce[0]) == Catch::Approx(expect).margin(1e-12));
    REQUIRE(std::norm(j1.ce[0]) < 1.0);
    REQUIRE(std::abs(j1.norm2() - 1.0) < 1e-12);
}

TEST_CASE("reduced atom and coherence", "[jcm]") {
    FieldState g = make_gaussian(12.0, 12.0, 60);
    JointState prod = evolve_from_ground(g, {0.0, 0.0, 1});
    QubitDensity rho = reduce_atom(prod);
    REQUIRE(rho.gg.real() == Catch::Approx(1.0));
    REQUIRE(rho.purity() == Catch::Approx(1.0));
    REQUIRE(coherence(prod) == Catch::Approx(0.0).margin(1e-14));

    JointState bell;
    bell.cg.assign(2, cplx{});
    bell.ce.assign(2, cplx{});
    bell.ce[0] = 1.0 / std::sqrt(2.0);
    bell.cg[1] = 1.0 / std::sqrt(2.0);
    REQUIRE(reduce_atom(bell).purity() == Catch::Approx(0.5));

    FieldState opt = make_gaussian(20.0, 2.0 * 20.0 / pi, 120);
    JointState jopt = evolve_from_ground(opt, {pi / 2 / std::sqrt(20.0), 0.0, 1});
    REQUIRE(coherence(jopt) >= 0.99);

    RecursionBuild b = build_ground(pi / 4, 50, 1);
    JointState jb = evolve_from_ground(b.state, {b.tau, 0.0, 1});
    REQUIRE(reduce_atom(jb).purity() >= 1.0 - 1e-10);
}

TEST_CASE("evolve_joint reduces to the pure starts", "[jcm]") {
    FieldState g = make_gaussian(8.0, 8.0, 50);
    const double tau = 0.83;
    JointState jg = evolve_joint(g, {0.0, 0.0}, {tau, 0.0, 1});
    JointState ref_g = evolve_from_ground(g, {tau, 0.0, 1});
    for (int n = 0; n <= ref_g.n_max(); ++n) {
        REQUIRE(std::abs(jg.cg[n] - ref_g.cg[n]) < 1e-13);
        REQUIRE(std::abs(jg.ce[n] - ref_g.ce[n]) < 1e-13);
    }
    JointState je = evolve_joint(g, {pi, 0.0}, {tau, 0.0, 1});
    JointState ref_e = evolve_from_excited(g, {tau, 0.0, 1});
    for (int n = 0; n <= ref_e.n_max(); ++n) {
        REQUIRE(std::abs(je.cg[n] - ref_e.cg[n]) < 1e-13);
        REQUIRE(std::abs(je.ce[n] - ref_e.ce[n]) < 1e-13);
    }
    REQUIRE(std::abs(je.norm2() - 1.0) < 1e-12);
}

TEST_CASE("field backaction stays small for recursion states", "[jcm]") {
    RecursionBuild b = build_ground(pi / 2, 100, 1);
    JointState j = evolve_from_ground(b.state, {b.tau, 0.0, 1});
    REQUIRE(field_purity(j) >= 1.0 - 1e-9);
}
