#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qhd/profile.hpp"

using namespace qhd;

static const GasParams fig1{1.5, 1.0, std::sqrt(2.0)};

static ShockData fig1_shock(double eps) { return build_shock(0.7, 0.7 - eps, 1.0, fig1); }

TEST_CASE("f_of_R: roots at the end states, negative between, forms agree") {
    const ShockData sd = fig1_shock(0.1);
    CHECK(std::abs(f_of_R(sd.r_minus, sd)) < 1e-13);
    CHECK(std::abs(f_of_R(sd.r_plus, sd)) < 1e-13);
    // frozen midpoint value (30-digit evaluation)
    CHECK(f_of_R(0.65, sd) == doctest::Approx(-0.00580337370334884331).epsilon(1e-10));
    CHECK(f_of_R(0.65, sd) < 0.0);

    for (double R = 0.2; R < 1.4; R += 0.05)
        CHECK(f_of_R(R, sd) == doctest::Approx(f_of_R_longform(R, sd)).epsilon(1e-12));
    CHECK_THROWS_AS(f_of_R(0.0, sd), std::domain_error);
}

TEST_CASE("ode_rhs: equilibria and midpoint curvature sign") {
    const ShockData sd = fig1_shock(0.1);
    for (double R : {sd.r_minus, sd.r_plus}) {
        const auto [dR, d2R] = ode_rhs(R, 0.0, sd);
        CHECK(dR == 0.0);
        CHECK(std::abs(d2R) < 1e-12);
    }
    const double r0 = r0_and_expansion(sd).r0_numeric;
    const auto [dR, d2R] = ode_rhs(r0, 0.0, sd);
    const double k2 = sd.gas.k * sd.gas.k;
    CHECK(d2R == doctest::Approx(2.0 / k2 * f_of_R(r0, sd)).epsilon(1e-12));
    CHECK(d2R < 0.0);
    CHECK_THROWS_AS(ode_rhs(-0.1, 0.0, sd), std::domain_error);
}

TEST_CASE("equilibrium linearization: saddle at R^-, trace/det identities") {
    const ShockData sd = fig1_shock(0.05);
    const auto lin = equilibrium_linearization(sd, EndState::minus);
    CHECK(lin.is_saddle);
    CHECK(lin.eigenvalues[0].real() > 0.0);
    CHECK(lin.eigenvalues[0].imag() == 0.0);
    CHECK(lin.eigenvalues[1].real() < 0.0);
    const double k2 = sd.gas.k * sd.gas.k;
    CHECK(lin.trace == doctest::Approx(-2.0 * sd.s * sd.gas.mu / k2).epsilon(1e-15));
    CHECK(lin.det == doctest::Approx(-2.0 / k2 * f_prime(sd.r_minus, sd)).epsilon(1e-12));

    const auto lp = equilibrium_linearization(sd, EndState::plus);
    CHECK(!lp.is_saddle);  // stable node or focus
    CHECK(lp.eigenvalues[0].real() < 0.0);
}

TEST_CASE("solve_profile: monotone at eps = 0.05") {
    const ShockData sd = fig1_shock(0.05);
    ProfileOptions opts;
    opts.n_points = 1200;
    const ProfileGrid g = solve_profile(sd, opts);

    const auto rep = monotonicity_report(g);
    CHECK(rep.is_monotone);
    CHECK(rep.n_sign_changes == 0);
    CHECK(rep.min_R > 0.0);

    // endpoint residuals
    CHECK(std::abs(g.R.front() - sd.r_minus) <= opts.tail_tol);
    CHECK(std::hypot(g.R.back() - sd.r_plus, g.dR.back()) <= 2.0 * opts.tail_tol);
    // phase condition
    int i0 = -1;
    for (int i = 0; i < g.n(); ++i)
        if (std::abs(g.x[i]) < 0.5 * g.dx) i0 = i;
    REQUIRE(i0 >= 0);
    CHECK(g.R[i0] == doctest::Approx(0.5 * (sd.r_plus + sd.r_minus)).epsilon(1e-3));

    // (s - U) R = A pointwise
    for (int i = 0; i < g.n(); ++i)
        CHECK(std::abs((sd.s - g.U[i]) * g.R[i] - sd.a_const) <= 1e-10);
    // A > 0 and R' < 0 force U' < 0 on the monotone profile
    for (int i = 0; i < g.n(); ++i)
        if (g.dR[i] < -1e-12) CHECK(g.dU[i] < 0.0);
}

TEST_CASE("solve_profile: oscillatory at eps = 0.6") {
    const ShockData sd = fig1_shock(0.6);
    ProfileOptions opts;
    opts.n_points = 4000;
    const ProfileGrid g = solve_profile(sd, opts);
    const auto rep = monotonicity_report(g);
    CHECK(!rep.is_monotone);
    CHECK(rep.n_sign_changes >= 2);
    CHECK(rep.min_R > 0.0);  // stays away from vacuum
}

TEST_CASE("ODE residual on the uniform grid, independent finite differences") {
    for (double eps : {0.05, 0.6}) {
        const ShockData sd = fig1_shock(eps);
        ProfileOptions opts;
        opts.n_points = 4000;
        const ProfileGrid g = solve_profile(sd, opts);
        const double h = g.dx;
        double worst = 0.0;
        for (int i = 2; i + 2 < g.n(); ++i) {
            const double d1 = (g.R[i - 2] - 8 * g.R[i - 1] + 8 * g.R[i + 1] - g.R[i + 2]) / (12 * h);
            const double d2 =
                (-g.R[i - 2] + 16 * g.R[i - 1] - 30 * g.R[i] + 16 * g.R[i + 1] - g.R[i + 2]) /
                (12 * h * h);
            worst = std::max(worst, std::abs(d2 - ode_rhs(g.R[i], d1, sd)[1]));
            worst = std::max(worst, std::abs(d1 - g.dR[i]));
        }
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("grid refinement and launch-offset invariance") {
    const ShockData sd = fig1_shock(0.05);
    ProfileOptions opts;
    opts.n_points = 800;
    const ProfileGrid g1 = solve_profile(sd, opts);
    const ProfileGrid g2 = resample(g1, 1600);
    double m1 = 0.0, m2 = 0.0;
    for (double v : g1.R) m1 = std::max(m1, v);
    for (double v : g2.R) m2 = std::max(m2, v);
    CHECK(std::abs(m1 - m2) <= 1e-6);

    // different launch offsets agree after the phase re-centering
    ProfileOptions o2 = opts;
    o2.delta0_scale = 1e-6;
    const ProfileGrid gb = solve_profile(sd, o2);
    const double lo = std::max(g1.x.front(), gb.x.front());
    const double hi = std::min(g1.x.back(), gb.x.back());
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const double x = lo + (hi - lo) * i / 499.0;
        worst = std::max(worst, std::abs(g1.trajectory.eval(x, sd)[0] -
                                         gb.trajectory.eval(x, sd)[0]));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("derivative bound ratios stay within a factor of two") {
    ProfileOptions opts;
    opts.n_points = 800;
    const auto rows = derivative_bound_sweep(0.7, 1.0, fig1, {0.1, 0.05, 0.025}, opts);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) CHECK(r.monotone);
    auto ratio_span = [&](auto proj) {
        double lo = 1e300, hi = 0.0;
        for (const auto& r : rows) {
            lo = std::min(lo, proj(r));
            hi = std::max(hi, proj(r));
        }
        return hi / lo;
    };
    CHECK(ratio_span([](const DerivativeBoundRow& r) { return r.sup_dR_over_eps2; }) <= 2.0);
    CHECK(ratio_span([](const DerivativeBoundRow& r) { return r.sup_d2R_over_eps_dR; }) <= 2.0);
    CHECK(ratio_span([](const DerivativeBoundRow& r) { return r.sup_dU_over_eps2; }) <= 2.0);
    CHECK(ratio_span([](const DerivativeBoundRow& r) { return r.sup_d2U_over_eps_dR; }) <= 2.0);
    // U-ratios bounded by a fixed multiple of R-ratios (chain rule through
    // U = s - A/R)
    for (const auto& r : rows)
        CHECK(r.sup_dU_over_eps2 <= 10.0 * r.sup_dR_over_eps2);
}

TEST_CASE("R0: bisection root and expansion order") {
    // eps -> 0: R0 -> R^-
    for (double eps : {0.05, 0.01, 0.002}) {
        const auto rep = r0_and_expansion(fig1_shock(eps));
        CHECK(std::abs(rep.r0_numeric - 0.7) < eps);
        CHECK(rep.r0_numeric > 0.7 - eps);
    }
    const auto slopes = r0_gap_slopes(0.7, 1.0, fig1, {0.1, 0.05, 0.025});
    CHECK(slopes.slope == doctest::Approx(3.0).epsilon(0.1));

    // gamma = 3: quadratic coefficient vanishes, remainder still third order
    const GasParams g3{3.0, 1.0, std::sqrt(2.0)};
    const auto s3 = r0_gap_slopes(0.7, 1.0, g3, {0.1, 0.05, 0.025});
    CHECK(s3.slope >= 2.7);
    const auto r3 = r0_and_expansion(build_shock(0.7, 0.65, 1.0, g3));
    CHECK(r3.r0_expansion == doctest::Approx(0.7 - 0.025).epsilon(1e-12));
}

TEST_CASE("A expansion: second-order remainder") {
    const auto rep = a_expansion_check(0.7, 1.0, fig1, {0.1, 0.05, 0.025, 0.0125});
    CHECK(rep.slope == doctest::Approx(2.0).epsilon(0.15));
    // gamma = 1 edge: c_s = 1 at every density
    const GasParams g1{1.0, 1.0, 1.0};
    const auto rep1 = a_expansion_check(0.7, 1.0, g1, {0.1, 0.05, 0.025});
    CHECK(rep1.slope == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("tanh reference: exact solution of the reduced equation") {
    const ShockData sd = fig1_shock(0.05);
    const TanhReference ref = tanh_reference(sd);
    CHECK(ref.c == doctest::Approx(2.24105364250198807).epsilon(1e-13));
    // d Rbar/dz = c (Rbar^2 - 1/4) checked against central differences
    for (double z : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
        auto rbar = [&](double zz) { return -0.5 * std::tanh(0.5 * ref.c * zz); };
        const double h = 1e-6;
        const double dz = (rbar(z + h) - rbar(z - h)) / (2 * h);
        CHECK(dz == doctest::Approx(ref.reduced_rhs(rbar(z))).epsilon(1e-8));
    }
    // limits map to the end states
    CHECK(ref(1e6) == doctest::Approx(sd.r_plus).epsilon(1e-12));
    CHECK(ref(-1e6) == doctest::Approx(sd.r_minus).epsilon(1e-12));
}

TEST_CASE("tanh reference converges to the computed profile at rate >= 1") {
    ProfileOptions opts;
    opts.n_points = 800;
    std::vector<double> epss{0.1, 0.05, 0.025};
    std::vector<double> errs;
    for (double eps : epss) {
        const ProfileGrid g = solve_profile(fig1_shock(eps), opts);
        errs.push_back(tanh_profile_distance(g));
    }
    for (std::size_t i = 0; i < epss.size(); ++i) {
        CHECK(errs[i] / epss[i] <= 0.2);  // sup error <= 0.2 eps
    }
    CHECK(detail::loglog_slope(epss, errs) >= 1.0);
}

TEST_CASE("solve_profile rejects non-Lax input") {
    ShockData sd = fig1_shock(0.05);
    sd.s = 3.0;  // breaks the Lax chain without rebuilding velocities
    CHECK_THROWS_AS(solve_profile(sd), std::invalid_argument);
}
