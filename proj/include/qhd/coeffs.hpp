// Coefficient functions of the transformed (integrated) spectral problem,
//
//   f1 = R h'(R) - U^2,   f2 = s - 2U,   g = R (U/R)',
//   a  = (f2/f1)'/2 + R' f2 / (R f1),    b = R'/R - f2 g / f1,
//   omega = (s/2) (1/f1)' - g/f1,
//
// together with their (A, R) closed forms F1, F2, G, H, B, D and the lemma
// certificates that measure the inequality margins along a computed profile.
// All x-derivatives go through (R, R', R'') by the chain rule; nothing here
// uses finite differences.

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qhd/hydro.hpp"
#include "qhd/profile.hpp"

namespace qhd {

struct certificate_infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct supersonic_coefficient_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed forms of the coefficients as functions of (A, R) at fixed (s, gamma).
struct ClosedForms {
    double s;
    double gamma;

    double F1(double A, double R) const {
        const double w = s - A / R;
        return gamma * std::pow(R, gamma - 1.0) - w * w;
    }
    double dF1_dR(double A, double R) const {
        return gamma * (gamma - 1.0) * std::pow(R, gamma - 2.0) -
               2.0 * (s - A / R) * A / (R * R);
    }
    double F2(double A, double R) const { return -s + 2.0 * A / R; }
    double dF2_dR(double A, double R) const { return -2.0 * A / (R * R); }
    double G(double A, double R) const { return (2.0 * A - s * R) / (R * R); }
    double H(double A, double R) const {
        const double f1 = F1(A, R);
        return -(dF2_dR(A, R) * f1 - F2(A, R) * dF1_dR(A, R)) / (2.0 * f1 * f1) -
               F2(A, R) / (R * f1);
    }
    double B(double A, double R) const {
        return 1.0 / R - F2(A, R) * G(A, R) / F1(A, R);
    }
    double D(double A, double R) const {
        const double f1 = F1(A, R);
        return -s * dF1_dR(A, R) / (2.0 * f1 * f1) - G(A, R) / f1;
    }
    /// D(A^-, R^-) reduces to -(2 s^2 - 10 c_s s + (gamma+9) c_s^2) /
    /// (2 R^- s (2 c_s - s)^2); the numerator quadratic changes sign at
    /// s = kappa(gamma) c_s.
    double D_endpoint(double r_minus) const {
        const double cs = sound_speed(r_minus, gamma);
        return -(2.0 * s * s - 10.0 * cs * s + (gamma + 9.0) * cs * cs) /
               (2.0 * r_minus * s * (2.0 * cs - s) * (2.0 * cs - s));
    }
};

struct EndpointScalars {
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;
};

/// q1 = G, q2 = H, q3 = B evaluated at (A^-, R^-) = (R^- c_s(R^-), R^-).
inline EndpointScalars endpoint_scalars(const ShockData& sd) {
    const double cs = sound_speed(sd.r_minus, sd.gas.gamma);
    if (!(sd.s > 0.0 && sd.s < 2.0 * cs))
        throw std::invalid_argument("endpoint_scalars: need s in (0, 2 c_s(R^-))");
    const double rm = sd.r_minus, s = sd.s, g = sd.gas.gamma;
    EndpointScalars q;
    q.q1 = (2.0 * cs - s) / rm;
    q.q2 = (cs * cs * (g + 1.0) - 4.0 * cs * s + 2.0 * s * s) / (2.0 * rm * s * s * (2.0 * cs - s));
    q.q3 = -2.0 * (cs - s) / (rm * s);
    return q;
}

/// Any eta in (|q3|/(2 q1), 2 q2/|q3|) works; we pick the geometric mean
/// sqrt(q2/q1), which lies strictly inside whenever the interval is nonempty.
inline double eta_select(double q1, double q2, double q3) {
    if (q3 == 0.0) return 1.0;
    if (!(q3 * q3 < 4.0 * q1 * q2))
        throw certificate_infeasible_error(
            "eta_select: empty admissible interval (needs gamma > 1 and s in (0, 2 c_s))");
    return std::sqrt(q2 / q1);
}

/// Pointwise coefficient arrays over a ProfileGrid, endpoint scalars and the
/// selected Young weight.  f1 > 0 everywhere is required (subsonic regime);
/// g < 0 holds along monotone profiles.
struct CoefficientFields {
    std::vector<double> f1, f2, g, a, b, omega;
    std::vector<double> df1, d2f1, dg;
    EndpointScalars q;
    double eta = std::numeric_limits<double>::quiet_NaN();
};

inline CoefficientFields coefficient_fields(const ProfileGrid& grid) {
    const ShockData& sd = grid.shock;
    const double s = sd.s, gam = sd.gas.gamma;
    const std::size_t n = grid.R.size();

    CoefficientFields cf;
    cf.f1.resize(n);
    cf.f2.resize(n);
    cf.g.resize(n);
    cf.a.resize(n);
    cf.b.resize(n);
    cf.omega.resize(n);
    cf.df1.resize(n);
    cf.d2f1.resize(n);
    cf.dg.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double R = grid.R[i], dR = grid.dR[i], d2R = grid.d2R[i];
        const double U = grid.U[i], dU = grid.dU[i], d2U = grid.d2U[i];
        const double hp = enthalpy_prime(R, gam);
        const double hpp = enthalpy_second(R, gam);
        const double hppp = gam * (gam - 2.0) * (gam - 3.0) * std::pow(R, gam - 4.0);

        const double f1 = R * hp - U * U;
        if (!(f1 > 0.0))
            throw supersonic_coefficient_error(
                "coefficient_fields: f1 <= 0 along the profile (supersonic point)");
        const double f2 = s - 2.0 * U;
        const double df1 = (hp + R * hpp) * dR - 2.0 * U * dU;
        const double d2f1 = (2.0 * hpp + R * hppp) * dR * dR + (hp + R * hpp) * d2R -
                            2.0 * dU * dU - 2.0 * U * d2U;
        const double df2 = -2.0 * dU;
        const double g = dU - U * dR / R;
        const double dg = d2U - dU * dR / R - U * d2R / R + U * dR * dR / (R * R);

        cf.f1[i] = f1;
        cf.f2[i] = f2;
        cf.g[i] = g;
        cf.df1[i] = df1;
        cf.d2f1[i] = d2f1;
        cf.dg[i] = dg;
        cf.a[i] = (df2 * f1 - f2 * df1) / (2.0 * f1 * f1) + dR * f2 / (R * f1);
        cf.b[i] = dR / R - f2 * g / f1;
        cf.omega[i] = -s * df1 / (2.0 * f1 * f1) - g / f1;
    }

    cf.q = endpoint_scalars(sd);
    if (cf.q.q3 == 0.0 || cf.q.q3 * cf.q.q3 < 4.0 * cf.q.q1 * cf.q.q2)
        cf.eta = eta_select(cf.q.q1, cf.q.q2, cf.q.q3);
    return cf;
}

namespace detail {

/// Indices where |R'| exceeds cutoff * max|R'|; shared by every ratio
/// statistic that divides by |R'|.
inline std::vector<std::size_t> cutoff_set(const ProfileGrid& g, double cutoff = 0.01) {
    double m = 0.0;
    for (double d : g.dR) m = std::max(m, std::abs(d));
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g.dR.size(); ++i)
        if (std::abs(g.dR[i]) > cutoff * m) idx.push_back(i);
    return idx;
}

}  // namespace detail

/// Margins of the coefficient-bound lemma: 0 < C^-1 <= f1 <= C,
/// |f1'| <= C |R'|, |f1''| <= C eps |R'|, g <= C^-1 R' < 0, |g'| <= C eps |R'|.
struct F1gCertificate {
    double inf_f1 = 0.0;
    double sup_f1 = 0.0;
    double sup_df1_over_dR = 0.0;       // sup |f1'| / |R'|
    double sup_d2f1_over_eps_dR = 0.0;  // sup |f1''| / (eps |R'|)
    double inf_g_over_dR = 0.0;         // inf g / R', positive when g and R' share sign
    double sup_dg_over_eps_dR = 0.0;    // sup |g'| / (eps |R'|)
    bool pass = false;
};

inline F1gCertificate lemma_f1g_certificate(const CoefficientFields& cf, const ProfileGrid& grid,
                                            double cutoff = 0.01) {
    F1gCertificate c;
    c.inf_f1 = std::numeric_limits<double>::infinity();
    c.inf_g_over_dR = std::numeric_limits<double>::infinity();
    const double eps = grid.shock.eps;
    for (std::size_t i = 0; i < cf.f1.size(); ++i) {
        c.inf_f1 = std::min(c.inf_f1, cf.f1[i]);
        c.sup_f1 = std::max(c.sup_f1, cf.f1[i]);
    }
    for (std::size_t i : detail::cutoff_set(grid, cutoff)) {
        const double adr = std::abs(grid.dR[i]);
        c.sup_df1_over_dR = std::max(c.sup_df1_over_dR, std::abs(cf.df1[i]) / adr);
        c.sup_d2f1_over_eps_dR =
            std::max(c.sup_d2f1_over_eps_dR, std::abs(cf.d2f1[i]) / (eps * adr));
        c.sup_dg_over_eps_dR = std::max(c.sup_dg_over_eps_dR, std::abs(cf.dg[i]) / (eps * adr));
        c.inf_g_over_dR = std::min(c.inf_g_over_dR, cf.g[i] / grid.dR[i]);
    }
    c.pass = c.inf_f1 > 0.0 && c.inf_g_over_dR > 0.0 && std::isfinite(c.sup_f1) &&
             std::isfinite(c.sup_df1_over_dR) && std::isfinite(c.sup_d2f1_over_eps_dR) &&
             std::isfinite(c.sup_dg_over_eps_dR);
    return c;
}

/// Empirical constants of -g - |b|/(2 eta) >= C1 |R'| and
/// a - (eta/2) |b| >= C2 |R'|.
struct HyperbolicCertificate {
    double c1 = 0.0;
    double c2 = 0.0;
    double eta = 0.0;
    bool pass = false;
};

inline HyperbolicCertificate hyperbolic_certificate(const CoefficientFields& cf, double eta,
                                                    const ProfileGrid& grid, double cutoff = 0.01) {
    HyperbolicCertificate c;
    c.eta = eta;
    c.c1 = std::numeric_limits<double>::infinity();
    c.c2 = std::numeric_limits<double>::infinity();
    for (std::size_t i : detail::cutoff_set(grid, cutoff)) {
        const double adr = std::abs(grid.dR[i]);
        c.c1 = std::min(c.c1, (-cf.g[i] - std::abs(cf.b[i]) / (2.0 * eta)) / adr);
        c.c2 = std::min(c.c2, (cf.a[i] - 0.5 * eta * std::abs(cf.b[i])) / adr);
    }
    c.pass = c.c1 > 0.0 && c.c2 > 0.0;
    return c;
}

/// Empirical constant of omega >= C3 |R'| plus the endpoint predictor
/// D(A^-, R^-), whose sign flips at s = kappa(gamma) c_s(R^-).
struct OmegaCertificate {
    double c3 = 0.0;
    double d_endpoint = 0.0;
    double kappa_threshold = 0.0;  // kappa(gamma) c_s(R^-)
    bool pass = false;
};

inline OmegaCertificate omega_certificate(const CoefficientFields& cf, const ProfileGrid& grid,
                                          double cutoff = 0.01) {
    OmegaCertificate c;
    const ShockData& sd = grid.shock;
    c.c3 = std::numeric_limits<double>::infinity();
    for (std::size_t i : detail::cutoff_set(grid, cutoff))
        c.c3 = std::min(c.c3, cf.omega[i] / std::abs(grid.dR[i]));
    const ClosedForms forms{sd.s, sd.gas.gamma};
    c.d_endpoint = forms.D_endpoint(sd.r_minus);
    c.kappa_threshold = kappa(sd.gas.gamma) * sound_speed(sd.r_minus, sd.gas.gamma);
    c.pass = c.c3 > 0.0;
    return c;
}

}  // namespace qhd
