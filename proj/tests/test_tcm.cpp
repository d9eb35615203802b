#include <catch2/catch_amalgamated.hpp>

#include "qpulse/pipelines.hpp"
#include <algorithm>

#include "qpulse/tcm.hpp"

using namespace qpulse;

namespace {

FieldState random_state(SplitMix64& rng, int n_max) {
    FieldState f;
    f.amps.resize(n_max + 1);
    for (auto& a : f.amps) a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    detail::normalize_and_fix_phase(f.amps);
    return f;
}

} // namespace

TEST_CASE("tridiagonal QL solves small symmetric systems", "[tcm]") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 2 + static_cast<int>(rng.next_u64() % 8);
        std::vector<double> d(dim), e(dim - 1);
        for (auto& v : d) v = rng.uniform(-2, 2);
        for (auto& v : e) v = rng.uniform(-2, 2);
        std::vector<double> diag = d, off = e,
                            z(static_cast<std::size_t>(dim) * dim, 0.0);
        for (int i = 0; i < dim; ++i) z[static_cast<std::size_t>(i) * dim + i] = 1.0;
        detail::tridiag_ql(diag, off, z, dim);
        // residual A v - lambda v
        for (int j = 0; j < dim; ++j) {
            for (int i = 0; i < dim; ++i) {
                double av = d[i] * z[static_cast<std::size_t>(i) * dim + j];
                if (i > 0) av += e[i - 1] * z[static_cast<std::size_t>(i - 1) * dim + j];
                if (i < dim - 1) av += e[i] * z[static_cast<std::size_t>(i + 1) * dim + j];
                REQUIRE(av == Catch::Approx(diag[j] * z[static_cast<std::size_t>(i) * dim + j])
                                  .margin(1e-11));
            }
        }
        // orthonormal columns
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) {
                double dot = 0.0;
                for (int i = 0; i < dim; ++i)
                    dot += z[static_cast<std::size_t>(i) * dim + a] *
                           z[static_cast<std::size_t>(i) * dim + b];
                REQUIRE(dot == Catch::Approx(a == b ? 1.0 : 0.0).margin(1e-12));
            }
    }
}

TEST_CASE("excitation block spectrum", "[tcm]") {
    // two atoms: block E = n has eigenvalues {0, +-sqrt(2n-1)/sqrt(2)}
    for (const int n : {2, 5, 9}) {
        ExcitationBlock b = excitation_block(n, 2);
        REQUIRE(b.dim == 3);
        auto ev = b.eigenvalues();
        std::sort(ev.begin(), ev.end());
        const double w = std::sqrt(2.0 * n - 1.0) / std::sqrt(2.0);
        REQUIRE(ev[0] == Catch::Approx(-w).margin(1e-12));
        REQUIRE(ev[1] == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(ev[2] == Catch::Approx(w).margin(1e-12));
    }
    REQUIRE(excitation_block(0, 5).dim == 1);

    // window-variance diagnostic reduces to the classical point at l = 0
    REQUIRE(jx_window_variance(100.0, 2, 0.0) ==
            Catch::Approx((100.0 - 0.5) / pi));
}

TEST_CASE("one atom reproduces the JCM", "[tcm]") {
    SplitMix64 rng(7);
    FieldState f = random_state(rng, 35);
    for (const double tau : {0.2, 1.1, 2.9}) {
        DickeJointState c = tcm_evolve_exact(f, 1, tau);
        JointState j = evolve_from_ground(f, {tau, 0.0, 1});
        for (int n = 0; n <= f.n_max(); ++n) {
            REQUIRE(std::abs(c.at(n, 0) - j.cg[n]) < 1e-12);
            REQUIRE(std::abs(c.at(n, 1) - j.ce[n]) < 1e-12);
        }
    }
}

TEST_CASE("two atoms match the closed-form solution", "[tcm]") {
    SplitMix64 rng(11);
    FieldState f = random_state(rng, 30);
    for (const double tau : {0.3, 1.7, 4.2}) {
        DickeJointState c = tcm_evolve_exact(f, 2, tau);
        DickeJointState a = tcm_evolve_n2_analytic(f, tau);
        for (std::size_t k = 0; k < c.c.size(); ++k)
            REQUIRE(std::abs(c.c[k] - a.c[k]) < 1e-12);
    }
    // vacuum is stationary
    DickeJointState v = tcm_evolve_n2_analytic(make_fock(0, 3), 2.0);
    REQUIRE(std::abs(v.at(0, 0) - cplx(1, 0)) < 1e-14);
    // |1>: full transfer to |0> |J=1, m=0> at Omega_0 tau / sqrt(2) = pi/2
    DickeJointState one =
        tcm_evolve_n2_analytic(make_fock(1, 3), pi / 2 * std::sqrt(2.0));
    REQUIRE(std::abs(one.at(0, 1) - cplx(0, -1)) < 1e-13);
    // |2> revives when Omega_0 tau sqrt(3/2) = 2 pi
    DickeJointState two =
        tcm_evolve_n2_analytic(make_fock(2, 4), 2 * pi / std::sqrt(1.5));
    REQUIRE(std::abs(std::abs(two.at(2, 0)) - 1.0) < 1e-12);
}

TEST_CASE("block evolution conserves norm and excitation", "[tcm]") {
    SplitMix64 rng(13);
    FieldState f = random_state(rng, 40);
    for (const int J2 : {1, 2, 3, 5}) {
        DickeJointState c = tcm_evolve_exact(f, J2, 1.3);
        REQUIRE(std::abs(c.norm2() - 1.0) < 1e-12);
        // excitation E = n + (m + J) resolved per block
        std::vector<double> pin(f.amps.size(), 0.0), pout(f.amps.size(), 0.0);
        for (int E = 0; E <= f.n_max(); ++E) pin[E] = std::norm(f.amps[E]);
        for (int n = 0; n <= c.n_max; ++n)
            for (int j = 0; j <= J2; ++j)
                if (n + j < static_cast<int>(pout.size()))
                    pout[n + j] += std::norm(c.at(n, j));
        for (std::size_t E = 0; E < pin.size(); ++E)
            REQUIRE(pout[E] == Catch::Approx(pin[E]).margin(1e-12));
    }
    REQUIRE_THROWS_AS(tcm_evolve_exact(f, 0, 1.0), std::domain_error);
}

TEST_CASE("strong-field propagator", "[tcm]") {
    // needs zero weight below 2J + 1
    FieldState bad = make_fock(1, 10);
    REQUIRE_THROWS_AS(tcm_evolve_approx(bad, 2, 0.5), std::domain_error);

    auto cleared = [](double nbar, double var, int n_max, double step, int J2) {
        FieldState f = make_gaussian(nbar, var, n_max, step);
        for (int n = 0; n <= std::min(J2, f.n_max()); ++n) f.amps[n] = 0.0;
        detail::normalize_and_fix_phase(f.amps);
        return f;
    };

    // tau = 0 leaves all weight on m = -J
    FieldState g = cleared(60.0, 40.0, 120, 0.0, 4);
    DickeJointState c0 = tcm_evolve_approx(g, 4, 0.0);
    for (int n = 0; n <= c0.n_max; ++n)
        for (int j = 1; j <= 4; ++j) REQUIRE(std::abs(c0.at(n, j)) == 0.0);
    REQUIRE(std::abs(c0.norm2() - 1.0) < 1e-12);

    // J2 = 1 at nbar = 200 matches the exact fidelity to 1e-3
    const double nbar = 200.0, tau = pi / 2 / std::sqrt(nbar);
    FieldState opt = make_gaussian(nbar, 2 * nbar / pi, 330, pi / 2);
    const double f_exact = spin_target_fidelity(tcm_evolve_exact(opt, 1, tau), pi / 2);
    FieldState mag = cleared(nbar, 2 * nbar / pi, 330, 0.0, 1);
    const double f_approx = spin_target_fidelity(tcm_evolve_approx(mag, 1, tau), pi / 2);
    REQUIRE(std::abs(f_exact - f_approx) < 1e-3);
}

TEST_CASE("spin-coherent target fidelity", "[tcm]") {
    FieldState g = make_gaussian(30.0, 20.0, 80, pi / 2);
    DickeJointState c = tcm_evolve_exact(g, 3, 0.0);
    REQUIRE(spin_target_fidelity(c, 0.0) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(spin_target_fidelity(c, pi) == Catch::Approx(0.0).margin(1e-12));

    // the optimal pi/2 pulse at nbar = 100, J2 = 2
    FieldState opt = make_gaussian(100.0, 2 * 100.0 / pi, 190, pi / 2);
    DickeJointState pulse = tcm_evolve_exact(opt, 2, pi / 2 / std::sqrt(100.0));
    REQUIRE(spin_target_fidelity(pulse, pi / 2) >= 0.995);
}

TEST_CASE("spin expectations", "[tcm]") {
    FieldState g = make_gaussian(100.0, 2 * 100.0 / pi, 190, pi / 2);
    DickeJointState c0 = tcm_evolve_exact(g, 2, 0.0);
    SpinExpectations e0 = spin_expectations(c0);
    REQUIRE(e0.jx == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(e0.jy == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(e0.jz == Catch::Approx(-1.0).margin(1e-12));

    const double tau = pi / 2 / std::sqrt(100.0);
    DickeJointState c = tcm_evolve_exact(g, 2, tau);
    SpinExpectations e = spin_expectations(c);
    REQUIRE(std::abs(e.jz) <= 0.05);             // J = 1
    REQUIRE(e.jx >= 1.0 - 3.0 * (1.0 / 100.0) - 0.01);
    REQUIRE(std::abs(e.jz - jz_heisenberg(g, 2, tau)) <= 1e-2);
}

TEST_CASE("impurity never vanishes for two atoms", "[tcm]") {
    const double p = tcm_max_purity(50.0, 2, 5, 3);
    REQUIRE(p < 1.0 - 1e-10);
}
