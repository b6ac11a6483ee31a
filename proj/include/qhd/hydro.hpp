// Thermodynamic closures and Rankine-Hugoniot algebra for the 1-D quantum
// hydrodynamics system with pressure p(rho) = rho^gamma.  Everything here is
// closed form; the profile and spectrum machinery consumes the validated
// ShockData records produced by build_shock().

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhd {

/// Physical constants of the model: adiabatic exponent, viscosity mu,
/// dispersion (Bohm) coefficient k.
struct GasParams {
    double gamma = 1.5;
    double mu = 1.0;
    double k = 1.0;

    void validate() const {
        if (!(gamma >= 1.0))
            throw std::domain_error("GasParams: gamma must satisfy gamma >= 1, got " + std::to_string(gamma));
        if (!(mu > 0.0))
            throw std::domain_error("GasParams: mu must be positive");
        if (!(k > 0.0))
            throw std::domain_error("GasParams: k must be positive");
    }
};

/// Enthalpy h(rho): ln(rho) for gamma = 1, gamma/(gamma-1) rho^(gamma-1)
/// for gamma > 1.  Satisfies p'(rho) = rho h'(rho).
inline double enthalpy(double rho, double gamma) {
    if (!(rho > 0.0))
        throw std::domain_error("enthalpy: rho must be positive, got " + std::to_string(rho));
    if (!(gamma >= 1.0))
        throw std::domain_error("enthalpy: gamma must satisfy gamma >= 1");
    if (gamma == 1.0) return std::log(rho);
    return gamma / (gamma - 1.0) * std::pow(rho, gamma - 1.0);
}

/// h'(rho) = gamma rho^(gamma-2).  The log branch (gamma = 1) gives 1/rho,
/// which is the same expression.
inline double enthalpy_prime(double rho, double gamma) {
    if (!(rho > 0.0)) throw std::domain_error("enthalpy_prime: rho must be positive");
    return gamma * std::pow(rho, gamma - 2.0);
}

inline double enthalpy_second(double rho, double gamma) {
    if (!(rho > 0.0)) throw std::domain_error("enthalpy_second: rho must be positive");
    return gamma * (gamma - 2.0) * std::pow(rho, gamma - 3.0);
}

/// Sound speed c_s(rho) = sqrt(rho h'(rho)) = sqrt(gamma rho^(gamma-1)).
inline double sound_speed(double rho, double gamma) {
    if (!(rho > 0.0))
        throw std::domain_error("sound_speed: rho must be positive, got " + std::to_string(rho));
    return std::sqrt(gamma * std::pow(rho, gamma - 1.0));
}

/// Characteristic speeds of the underlying hyperbolic system.
inline double lambda1(double rho, double u, double gamma) { return u - sound_speed(rho, gamma); }
inline double lambda2(double rho, double u, double gamma) { return u + sound_speed(rho, gamma); }

enum class LaxFamily { lax1, lax2, none };
enum class SonicClass { subsonic, sonic, supersonic };

/// Full parameter record of one Lax shock.  A is the mass-flux constant
/// (s - U^pm) R^pm, B the Bernoulli constant, eps = R^- - R^+ the amplitude.
struct ShockData {
    GasParams gas;
    double r_minus = 0.0;
    double r_plus = 0.0;
    double u_minus = 0.0;
    double u_plus = 0.0;
    double s = 0.0;
    double a_const = 0.0;
    double b_const = 0.0;
    double eps = 0.0;

    /// Relative residuals of the two Rankine-Hugoniot conditions.
    std::pair<double, double> rh_residuals() const {
        const double g = gas.gamma;
        const double scale1 = std::abs(s * r_minus) + std::abs(r_minus * u_minus) + 1.0;
        const double res1 = s * (r_plus - r_minus) - (r_plus * u_plus - r_minus * u_minus);
        const double hm = enthalpy(r_minus, g), hp = enthalpy(r_plus, g);
        const double scale2 = std::abs(s * u_minus) + std::abs(hm) + 0.5 * u_minus * u_minus + 1.0;
        const double res2 = s * (u_plus - u_minus)
                            - (0.5 * u_plus * u_plus - 0.5 * u_minus * u_minus + hp - hm);
        return {std::abs(res1) / scale1, std::abs(res2) / scale2};
    }
};

/// Builds a validated shock record from (R^-, R^+, s).  The mass-flux
/// constant comes from the positive branch of
///   A = R^+ R^- sqrt( 2 (h(R^+) - h(R^-)) / ((R^+)^2 - (R^-)^2) ),
/// velocities from U^pm = s - A/R^pm and the Bernoulli constant from
/// B = -s U^pm + (U^pm)^2/2 + h(R^pm) (both signs must agree).
inline ShockData build_shock(double r_minus, double r_plus, double s, const GasParams& gas) {
    gas.validate();
    if (!(r_minus > 0.0) || !(r_plus > 0.0))
        throw std::domain_error("build_shock: densities must be positive");
    if (r_minus == r_plus)
        throw std::invalid_argument("build_shock: degenerate shock, equal densities force equal velocities");
    if (!(r_minus > r_plus))
        throw std::invalid_argument("build_shock: expected R^- > R^+ (s > 0 convention; "
                                    "the s < 0 case is the mirror image x -> -x)");
    if (!(s > 0.0))
        throw std::invalid_argument("build_shock: shock speed must be positive");

    const double g = gas.gamma;
    const double hm = enthalpy(r_minus, g), hp = enthalpy(r_plus, g);
    const double ratio = 2.0 * (hp - hm) / (r_plus * r_plus - r_minus * r_minus);
    // h increasing and r_plus < r_minus make both numerator and denominator
    // negative, so the radicand is positive.
    const double a = r_plus * r_minus * std::sqrt(ratio);

    ShockData sd;
    sd.gas = gas;
    sd.r_minus = r_minus;
    sd.r_plus = r_plus;
    sd.s = s;
    sd.a_const = a;
    sd.u_minus = s - a / r_minus;
    sd.u_plus = s - a / r_plus;
    sd.eps = r_minus - r_plus;

    const double b_minus = -s * sd.u_minus + 0.5 * sd.u_minus * sd.u_minus + hm;
    const double b_plus = -s * sd.u_plus + 0.5 * sd.u_plus * sd.u_plus + hp;
    const double bscale = std::abs(b_minus) + std::abs(b_plus) + 1.0;
    if (std::abs(b_minus - b_plus) / bscale > 1e-12)
        throw std::runtime_error("build_shock: Bernoulli constants from the two end states disagree");
    sd.b_const = 0.5 * (b_minus + b_plus);

    auto [res1, res2] = sd.rh_residuals();
    if (res1 > 1e-12 || res2 > 1e-12)
        throw std::runtime_error("build_shock: Rankine-Hugoniot residuals above tolerance");
    return sd;
}

/// Lax entropy classification: family k iff lambda_k(R+,U+) < s < lambda_k(R-,U-).
inline LaxFamily lax_classify(const ShockData& sd) {
    const double g = sd.gas.gamma;
    const bool l1 = lambda1(sd.r_plus, sd.u_plus, g) < sd.s && sd.s < lambda1(sd.r_minus, sd.u_minus, g);
    const bool l2 = lambda2(sd.r_plus, sd.u_plus, g) < sd.s && sd.s < lambda2(sd.r_minus, sd.u_minus, g);
    if (l1 && !l2) return LaxFamily::lax1;
    if (l2 && !l1) return LaxFamily::lax2;
    return LaxFamily::none;
}

/// Compares |u| against c_s(rho) with a relative band for the sonic case;
/// exact sonicity never arises from floating-point construction.
inline SonicClass sonic_classify(double rho, double u, double gamma, double band = 1e-10) {
    const double cs = sound_speed(rho, gamma);
    const double r = std::abs(u) / cs;
    if (std::abs(1.0 - r) <= band) return SonicClass::sonic;
    return r < 1.0 ? SonicClass::subsonic : SonicClass::supersonic;
}

/// Speed-bound coefficient kappa(gamma) = (5 - sqrt(7 - 2 gamma))/2 for
/// gamma <= 3 and 2 beyond; continuous at gamma = 3.
inline double kappa(double gamma) {
    if (!(gamma >= 1.0))
        throw std::domain_error("kappa: gamma must satisfy gamma >= 1");
    if (gamma > 3.0) return 2.0;
    return 0.5 * (5.0 - std::sqrt(7.0 - 2.0 * gamma));
}

/// Stability speed bound sbar = min(2 c_s(R^-), kappa(gamma) c_s(R^-)).
inline double speed_bound(double r_minus, double gamma) {
    const double cs = sound_speed(r_minus, gamma);
    return std::min(2.0 * cs, kappa(gamma) * cs);
}

struct KappaRow {
    double gamma;
    double kappa_value;
    double linear_viscosity_bound;  // (gamma+1)/2
};

/// Comparison of the nonlinear-viscosity speed-bound coefficient against the
/// linear-viscosity one, on a gamma grid inside (1, 3).
inline std::vector<KappaRow> kappa_comparison_table(const std::vector<double>& gamma_grid) {
    std::vector<KappaRow> rows;
    rows.reserve(gamma_grid.size());
    for (double g : gamma_grid) {
        if (!(g > 1.0 && g < 3.0))
            throw std::domain_error("kappa_comparison_table: grid must lie in (1, 3)");
        rows.push_back({g, kappa(g), 0.5 * (g + 1.0)});
    }
    return rows;
}

inline const char* to_string(LaxFamily f) {
    switch (f) {
        case LaxFamily::lax1: return "lax1";
        case LaxFamily::lax2: return "lax2";
        default: return "none";
    }
}

inline const char* to_string(SonicClass c) {
    switch (c) {
        case SonicClass::subsonic: return "subsonic";
        case SonicClass::sonic: return "sonic";
        default: return "supersonic";
    }
}

}  // namespace qhd
