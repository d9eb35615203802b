#include <catch2/catch_amalgamated.hpp>

#include "qpulse/fock.hpp"
#include "qpulse/math_util.hpp"

using namespace qpulse;

TEST_CASE("fock states", "[fock]") {
    FieldState vac = make_fock(0, 4);
    REQUIRE(vac.n_max() == 4);
    REQUIRE(vac.amps[0] == cplx{1.0, 0.0});
    REQUIRE(std::abs(vac.norm2() - 1.0) < 1e-12);

    FieldState three = make_fock(3, 3);
    Moments m = moments(three);
    REQUIRE(m.mean == Catch::Approx(3.0));
    REQUIRE(m.variance == Catch::Approx(0.0).margin(1e-14));

    REQUIRE_THROWS_AS(make_fock(5, 3), std::domain_error);
    REQUIRE_THROWS_AS(make_fock(-1, 3), std::domain_error);
}

TEST_CASE("gaussian construction and moments", "[fock]") {
    FieldState g = make_gaussian(20.0, 20.0, 400);
    Moments m = moments(g);
    REQUIRE(m.mean == Catch::Approx(20.0).epsilon(0.02));
    REQUIRE(m.variance == Catch::Approx(20.0).epsilon(0.02));

    FieldState sq = make_gaussian(20.0, 0.9 * 20.0, 400);
    Moments ms = moments(sq);
    REQUIRE(ms.variance / ms.mean == Catch::Approx(0.9).epsilon(0.02));

    // variance/mean = 2/pi squeezing at nbar = 50
    FieldState opt = make_gaussian(50.0, 50.0 * 2.0 / pi, 200);
    Moments mo = moments(opt);
    REQUIRE(mo.variance / mo.mean == Catch::Approx(2.0 / pi).epsilon(0.02));

    // vacuum limit
    FieldState v = make_gaussian(1e-9, 1e-9, 2);
    REQUIRE(std::norm(v.amps[0]) == Catch::Approx(1.0).margin(1e-9));

    REQUIRE_THROWS_AS(make_gaussian(10.0, -1.0, 100), std::domain_error);
    REQUIRE_THROWS_AS(make_gaussian(100.0, 100.0, 110), std::domain_error); // n_max too low
}

TEST_CASE("gaussian invariants", "[fock]") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const double nbar = rng.uniform(1.0, 80.0);
        const double var = rng.uniform(0.5, 1.4) * nbar;
        const int n_max = suggest_nmax(nbar, var);
        FieldState g = make_gaussian(nbar, var, n_max, rng.uniform(0.0, 2 * pi));
        REQUIRE(std::abs(g.norm2() - 1.0) < 1e-12);
        // discarded tail mass below 1e-8
        const double d = n_max + 1 - nbar;
        REQUIRE(std::exp(-d * d / (2 * var)) < 1e-8);
        // first nonzero amplitude real positive
        REQUIRE(g.amps[0].imag() == Catch::Approx(0.0).margin(1e-15));
        REQUIRE(g.amps[0].real() >= 0.0);
    }
    // fit recovers parameters when the distribution is comfortably interior
    for (int trial = 0; trial < 10; ++trial) {
        const double var = rng.uniform(1.0, 9.0);
        const double nbar = 10.0 * std::sqrt(var) + rng.uniform(0.0, 50.0);
        FieldState g = make_gaussian(nbar, var, suggest_nmax(nbar, var));
        Moments f = fit_gaussian(g);
        REQUIRE(f.mean == Catch::Approx(nbar).epsilon(0.01));
        REQUIRE(f.variance == Catch::Approx(var).epsilon(0.01));
    }
}

TEST_CASE("squeezing in dB", "[fock]") {
    REQUIRE(squeezing_db(2.85) == Catch::Approx(10.0).margin(0.2));
    REQUIRE(squeezing_db(3.04) == Catch::Approx(15.0).margin(0.4));
    REQUIRE(squeezing_db(1e-9) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE_THROWS_AS(squeezing_db(3.5), std::domain_error); // sinc < 0
}

TEST_CASE("deliverable pulse bands", "[fock]") {
    REQUIRE(pulse_spec_valid({pi / 2, 0, AtomStart::Ground}));
    REQUIRE_FALSE(pulse_spec_valid({3 * pi / 2, 0, AtomStart::Ground}));
    REQUIRE(pulse_spec_valid({3 * pi / 2, 1, AtomStart::Ground} ) == false);
    REQUIRE(pulse_spec_valid({5 * pi / 2, 1, AtomStart::Ground}));
    REQUIRE(pulse_spec_valid({pi / 2, 0, AtomStart::Excited}));
    REQUIRE_FALSE(pulse_spec_valid({pi / 2, 1, AtomStart::Excited}));
    REQUIRE(pulse_spec_valid({5 * pi / 2, 1, AtomStart::Excited}));
}

TEST_CASE("sinc and helpers", "[fock]") {
    REQUIRE(sinc(0.0) == 1.0);
    REQUIRE(sinc(1e-6) == Catch::Approx(1.0 - 1e-12 / 6).epsilon(1e-12));
    REQUIRE(sinc(pi / 2) == Catch::Approx(2.0 / pi));
    REQUIRE(suggest_nmax(100.0, 100.0) == 170);
}
