#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qhd/hydro.hpp"

using namespace qhd;

// Fig. 1 parameter set used throughout: gamma = 3/2, R^- = 0.7, s = 1,
// mu = 1, k = sqrt(2).
static const GasParams fig1{1.5, 1.0, std::sqrt(2.0)};

TEST_CASE("enthalpy branches") {
    CHECK(enthalpy(1.0, 1.0) == doctest::Approx(0.0));
    CHECK(enthalpy(1.0, 1.5) == doctest::Approx(3.0));
    // 30-digit evaluation of 3 * 0.7^(1/2)
    CHECK(enthalpy(0.7, 1.5) == doctest::Approx(2.50998007960222664).epsilon(1e-14));
    CHECK(enthalpy(0.5, 1.0) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(enthalpy(0.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(enthalpy(-1.0, 1.0), std::domain_error);
}

TEST_CASE("sound speed and characteristic identities") {
    CHECK(sound_speed(1.0, 1.7) == doctest::Approx(std::sqrt(1.7)).epsilon(1e-15));
    CHECK(sound_speed(0.7, 1.5) == doctest::Approx(1.12026337965726315).epsilon(1e-14));
    CHECK_THROWS_AS(sound_speed(0.0, 1.5), std::domain_error);

    // c_s^2 = rho h'(rho) on a rho grid, both branches of gamma
    for (double gam : {1.0, 1.5, 2.0, 2.7}) {
        for (int i = 1; i <= 20; ++i) {
            const double rho = 0.1 * i;
            const double cs = sound_speed(rho, gam);
            CHECK(cs * cs == doctest::Approx(rho * enthalpy_prime(rho, gam)).epsilon(1e-12));
        }
    }
}

TEST_CASE("pressure/enthalpy compatibility p' = rho h' by finite differences") {
    auto pressure = [](double rho, double gam) { return std::pow(rho, gam); };
    for (double gam : {1.0, 1.5, 2.5}) {
        for (int i = 2; i <= 18; ++i) {
            const double rho = 0.1 * i;
            const double h = 1e-6 * rho;
            const double dp = (pressure(rho + h, gam) - pressure(rho - h, gam)) / (2 * h);
            CHECK(dp == doctest::Approx(rho * enthalpy_prime(rho, gam)).epsilon(1e-6));
        }
    }
}

TEST_CASE("build_shock: Fig. 1 family") {
    const ShockData sd = build_shock(0.7, 0.6, 1.0, fig1);
    CHECK(sd.eps == doctest::Approx(0.1));
    // frozen oracle values (30-digit evaluation of the closed forms)
    CHECK(sd.a_const == doctest::Approx(0.710838385605225121).epsilon(1e-13));
    CHECK(sd.u_minus == doctest::Approx(-0.0154834080074644590).epsilon(1e-12));
    CHECK(sd.u_plus == doctest::Approx(-0.184730642675375202).epsilon(1e-12));
    CHECK(sd.b_const == doctest::Approx(2.52558335557145391).epsilon(1e-13));

    auto [r1, r2] = sd.rh_residuals();
    CHECK(r1 <= 1e-12);
    CHECK(r2 <= 1e-12);
    // mass-flux constant consistent across the two end states
    CHECK((sd.s - sd.u_plus) * sd.r_plus ==
          doctest::Approx((sd.s - sd.u_minus) * sd.r_minus).epsilon(1e-13));
}

TEST_CASE("build_shock: A limit as eps -> 0 is R^- c_s(R^-)") {
    const double a_lim = 0.784184365760084206;  // 0.7 * c_s(0.7)
    double prev_gap = 1e9;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const ShockData sd = build_shock(0.7, 0.7 - eps, 1.0, fig1);
        const double gap = std::abs(sd.a_const - a_lim);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-4);
}

TEST_CASE("build_shock: degenerate and invalid inputs") {
    CHECK_THROWS_AS(build_shock(1.0, 1.0, 1.0, fig1), std::invalid_argument);
    CHECK_THROWS_AS(build_shock(0.6, 0.7, 1.0, fig1), std::invalid_argument);  // s>0 needs R^- > R^+
    CHECK_THROWS_AS(build_shock(0.7, 0.6, -1.0, fig1), std::invalid_argument);
    CHECK_THROWS_AS(build_shock(-0.7, 0.6, 1.0, fig1), std::domain_error);
}

TEST_CASE("lax_classify: Fig. 1 shock is a Lax 2-shock") {
    const ShockData sd = build_shock(0.7, 0.6, 1.0, fig1);
    CHECK(lax_classify(sd) == LaxFamily::lax2);
    // frozen characteristic speeds
    CHECK(lambda2(sd.r_plus, sd.u_plus, 1.5) ==
          doctest::Approx(0.893181693213877465).epsilon(1e-12));
    CHECK(lambda2(sd.r_minus, sd.u_minus, 1.5) ==
          doctest::Approx(1.10477997164979869).epsilon(1e-12));

    // a speed outside both Lax intervals
    ShockData bad = sd;
    bad.s = 2.0 * lambda2(sd.r_minus, sd.u_minus, 1.5);
    CHECK(lax_classify(bad) == LaxFamily::none);
}

TEST_CASE("sonic_classify") {
    CHECK(sonic_classify(1.0, 0.0, 1.5) == SonicClass::subsonic);
    CHECK(sonic_classify(1.0, std::sqrt(1.4), 1.4) == SonicClass::sonic);
    CHECK(sonic_classify(1.0, -std::sqrt(1.4), 1.4) == SonicClass::sonic);
    CHECK(sonic_classify(1.0, 5.0, 1.5) == SonicClass::supersonic);

    // Fig. 1 end states are subsonic for small eps
    for (double eps : {0.1, 0.05, 0.01}) {
        const ShockData sd = build_shock(0.7, 0.7 - eps, 1.0, fig1);
        CHECK(sonic_classify(sd.r_minus, sd.u_minus, 1.5) == SonicClass::subsonic);
        CHECK(sonic_classify(sd.r_plus, sd.u_plus, 1.5) == SonicClass::subsonic);
    }
}

TEST_CASE("kappa values and continuity at gamma = 3") {
    CHECK(kappa(3.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(kappa(1.5) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(kappa(1.0) == doctest::Approx(1.38196601125010515).epsilon(1e-14));
    CHECK(kappa(2.0) == doctest::Approx(1.63397459621556135).epsilon(1e-14));
    CHECK(kappa(1.1) == doctest::Approx(1.40455488498966777).epsilon(1e-14));
    CHECK(std::abs(kappa(3.0 - 1e-13) - kappa(3.0 + 1e-13)) <= 1e-12);
    CHECK(kappa(4.0) == 2.0);
    CHECK_THROWS_AS(kappa(0.9), std::domain_error);
}

TEST_CASE("speed_bound") {
    CHECK(speed_bound(0.7, 1.5) == doctest::Approx(1.68039506948589472).epsilon(1e-13));
    CHECK(1.0 < speed_bound(0.7, 1.5));  // Fig. 1's s = 1 is admissible
    // gamma >= 3: bound is 2 c_s
    CHECK(speed_bound(0.9, 3.5) == doctest::Approx(2.0 * sound_speed(0.9, 3.5)).epsilon(1e-15));
    // monotone in R^- for fixed gamma > 1
    double prev = 0.0;
    for (double rm : {0.2, 0.5, 0.9, 1.4}) {
        const double b = speed_bound(rm, 1.8);
        CHECK(b > prev);
        prev = b;
    }
}

TEST_CASE("kappa_comparison_table dominates the linear-viscosity bound") {
    std::vector<double> grid;
    for (int i = 1; i < 200; ++i) grid.push_back(1.0 + 2.0 * i / 200.0);
    for (const auto& row : kappa_comparison_table(grid)) {
        CHECK(row.kappa_value >= row.linear_viscosity_bound);
        CHECK(row.kappa_value - row.linear_viscosity_bound >= 0.0);
    }
    // gamma = 2 row
    const auto rows = kappa_comparison_table({2.0});
    CHECK(rows[0].kappa_value == doctest::Approx(1.63397459621556135).epsilon(1e-14));
    CHECK(rows[0].linear_viscosity_bound == doctest::Approx(1.5));
    CHECK_THROWS_AS(kappa_comparison_table({3.5}), std::domain_error);
}
