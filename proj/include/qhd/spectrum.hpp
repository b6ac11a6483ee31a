// Essential-spectrum borders from the asymptotic symbols, discrete spectra of
// the truncated operators, and the spurious-mode filter.  The truncation has
// no spectral gap (the essential spectrum accumulates at the origin), so a
// discrete eigenvalue is only trusted when its eigenvector decays in the
// tails AND it is reproduced under one grid doubling.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "qhd/coeffs.hpp"
#include "qhd/lapack.hpp"
#include "qhd/operators.hpp"
#include "qhd/profile.hpp"

namespace qhd {

struct BorderCurves {
    std::vector<double> xi;
    std::vector<std::complex<double>> branch1, branch2;  // sorted continuously in xi
    double max_re = 0.0;
    double argmax_xi = 0.0;
};

/// Samples the two dispersion curves lambda_pm(xi) of the frozen-coefficient
/// symbol at one end state.
inline BorderCurves fredholm_borders(double R, double U, const GasParams& gas, double s,
                                     const std::vector<double>& xi_grid) {
    BorderCurves bc;
    bc.xi = xi_grid;
    bc.max_re = -std::numeric_limits<double>::infinity();
    std::complex<double> prev1, prev2;
    for (std::size_t i = 0; i < xi_grid.size(); ++i) {
        const Eigen::Matrix2cd m = asymptotic_symbol(R, U, gas, s, xi_grid[i]);
        const std::complex<double> tr = m(0, 0) + m(1, 1);
        const std::complex<double> det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const std::complex<double> disc = std::sqrt(tr * tr - 4.0 * det);
        std::complex<double> l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
        if (i > 0 && std::abs(l1 - prev1) + std::abs(l2 - prev2) >
                         std::abs(l2 - prev1) + std::abs(l1 - prev2))
            std::swap(l1, l2);
        bc.branch1.push_back(l1);
        bc.branch2.push_back(l2);
        prev1 = l1;
        prev2 = l2;
        for (double re : {l1.real(), l2.real()})
            if (re > bc.max_re) {
                bc.max_re = re;
                bc.argmax_xi = xi_grid[i];
            }
    }
    return bc;
}

inline std::vector<double> uniform_xi_grid(double xi_max = 50.0, int samples = 2001) {
    std::vector<double> xs(samples);
    for (int i = 0; i < samples; ++i)
        xs[i] = -xi_max + 2.0 * xi_max * i / (samples - 1);
    return xs;
}

struct FilterOptions {
    double filter_tol = 1e-4;      // max eigenvalue movement under grid doubling
    double tail_mass_tol = 0.01;   // max eigenvector mass in the boundary bands
    double boundary_frac = 0.10;   // width of each boundary band
    double re_window = -1.5;       // only eigenvalues with Re >= re_window are vetted
    double zero_window = 1e-4;     // |lambda| window identifying the translation mode
    double gap_tol = 1e-6;
    double border_tol = 1e-10;
    double trans_res_tol = 1e-5;
    int max_candidates = 400;
};

enum class ModeLabel { filtered, essential_cluster, spurious, left_of_window };

inline const char* to_string(ModeLabel l) {
    switch (l) {
        case ModeLabel::filtered: return "filtered";
        case ModeLabel::essential_cluster: return "essential_cluster";
        case ModeLabel::spurious: return "spurious";
        default: return "left_of_window";
    }
}

struct ModeRecord {
    std::complex<double> lambda;           // base-resolution eigenvalue
    std::complex<double> lambda_refined;   // doubled-grid value (when computed)
    double tail_mass = 1.0;
    double movement = std::numeric_limits<double>::infinity();
    ModeLabel label = ModeLabel::left_of_window;
    Eigen::VectorXcd vector;               // base-resolution eigenvector (candidates only)
    Eigen::VectorXcd vector_refined;       // doubled-grid eigenvector (filtered only)
};

struct PointSpectrumResult {
    OperatorKind kind = OperatorKind::L;
    int n = 0;
    std::vector<ModeRecord> modes;  // sorted by Re(lambda) descending

    std::vector<const ModeRecord*> filtered() const {
        std::vector<const ModeRecord*> out;
        for (const auto& m : modes)
            if (m.label == ModeLabel::filtered) out.push_back(&m);
        return out;
    }
};

namespace detail {

inline double boundary_mass(const Eigen::VectorXcd& w, int n, double frac) {
    const int band = std::max(1, static_cast<int>(frac * n));
    double outer = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double m = std::norm(w[2 * i]) + std::norm(w[2 * i + 1]);
        total += m;
        if (i < band || i >= n - band) outer += m;
    }
    return outer / total;
}

/// Inverse iteration with a Rayleigh-quotient polish on a banded operator;
/// locks onto the eigenvalue nearest the initial shift.
struct RefineResult {
    bool converged = false;
    std::complex<double> lambda;
    Eigen::VectorXcd vec;
};

inline RefineResult banded_refine(const BandMatrix& m, std::complex<double> shift,
                                  Eigen::VectorXcd y, int fixed_iters = 2, int max_iters = 12) {
    RefineResult rr;
    y.normalize();
    std::complex<double> sigma = shift;
    std::complex<double> prev = sigma;
    for (int it = 0; it < max_iters; ++it) {
        std::optional<ShiftedBandedLU> lu;
        try {
            lu.emplace(m, sigma);
            if (lu->singular()) {
                // shift sits exactly on an eigenvalue
                rr.converged = true;
                rr.lambda = sigma;
                rr.vec = y;
                return rr;
            }
            lu->solve(y);
        } catch (const numerical_error&) {
            return rr;
        }
        y.normalize();
        const Eigen::VectorXcd my = m.apply(y);
        const std::complex<double> rq = y.dot(my);  // y^H M y
        if (it >= fixed_iters) sigma = rq;
        if (std::abs(rq - prev) < 1e-12 * (1.0 + std::abs(rq))) {
            rr.converged = true;
            rr.lambda = rq;
            rr.vec = y;
            return rr;
        }
        prev = rq;
    }
    rr.lambda = prev;
    rr.vec = y;
    return rr;
}

inline Eigen::VectorXcd inject_to_doubled(const Eigen::VectorXcd& w, int n, int n2) {
    // Linear interpolation of each component onto the doubled grid over the
    // same domain; only used as a starting vector.
    Eigen::VectorXcd out(2 * n2);
    for (int i = 0; i < n2; ++i) {
        const double t = static_cast<double>(i) * (n - 1) / (n2 - 1);
        const int j = std::min(static_cast<int>(t), n - 2);
        const double fr = t - j;
        for (int c = 0; c < 2; ++c)
            out[2 * i + c] = (1.0 - fr) * w[2 * j + c] + fr * w[2 * (j + 1) + c];
    }
    return out;
}

}  // namespace detail

/// Relative residual ||L (R', U')|| / ||(R', U')|| of the discretized
/// translation relation.
inline double translation_residual(const OperatorMatrix& op, const ProfileGrid& g) {
    Eigen::VectorXcd w(2 * op.n);
    if (op.is_banded()) {
        for (int i = 0; i < op.n; ++i) {
            w[2 * i] = g.dR[i];
            w[2 * i + 1] = g.dU[i];
        }
    } else {
        for (int i = 0; i < op.n; ++i) {
            const double xq = op.nodes[i];
            const auto [R, P] = g.trajectory.eval(xq, g.shock);
            w[2 * i] = P;
            w[2 * i + 1] = g.shock.a_const * P / (R * R);
        }
    }
    return op.apply(w).norm() / w.norm();
}

/// Dense eigensolve at the base resolution plus the two-stage filter:
/// tail-decay of the eigenvector and reproducibility under grid doubling.
inline PointSpectrumResult point_spectrum(const ProfileGrid& g, OperatorKind kind,
                                          Scheme scheme = Scheme::fd4,
                                          const FilterOptions& fo = {}) {
    auto assemble = [&](const ProfileGrid& gg) {
        if (kind == OperatorKind::L) return assemble_L(gg, scheme);
        return assemble_A(gg, coefficient_fields(gg), scheme);
    };

    const OperatorMatrix op = assemble(g);
    const EigenSolveResult es = dense_eigensolve(op.to_dense(), true);

    PointSpectrumResult ps;
    ps.kind = kind;
    ps.n = op.n;

    std::vector<int> order(es.values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (es.values[a].real() != es.values[b].real())
            return es.values[a].real() > es.values[b].real();
        return es.values[a].imag() > es.values[b].imag();
    });

    // Doubled-resolution operator for the movement check.
    const ProfileGrid g2 = resample(g, 2 * g.n());
    std::optional<OperatorMatrix> op2;
    std::optional<EigenSolveResult> es2;  // spectral path: plain doubled eigensolve
    if (scheme == Scheme::fd4) {
        op2 = assemble(g2);
    } else {
        es2 = dense_eigensolve(assemble(g2).to_dense(), false);
    }

    int candidates = 0;
    for (int idx : order) {
        ModeRecord rec;
        rec.lambda = es.values[idx];
        if (rec.lambda.real() < fo.re_window) {
            rec.label = ModeLabel::left_of_window;
            ps.modes.push_back(std::move(rec));
            continue;
        }
        rec.tail_mass = detail::boundary_mass(es.vectors.col(idx), op.n, fo.boundary_frac);
        if (rec.tail_mass > fo.tail_mass_tol) {
            rec.label = ModeLabel::essential_cluster;
            ps.modes.push_back(std::move(rec));
            continue;
        }
        rec.vector = es.vectors.col(idx);
        if (++candidates > fo.max_candidates) {
            rec.label = ModeLabel::spurious;
            ps.modes.push_back(std::move(rec));
            continue;
        }

        if (scheme == Scheme::fd4) {
            const Eigen::VectorXcd y0 = detail::inject_to_doubled(rec.vector, op.n, op2->n);
            const auto rr = detail::banded_refine(op2->band, rec.lambda, y0);
            if (rr.converged) {
                rec.lambda_refined = rr.lambda;
                rec.movement = std::abs(rr.lambda - rec.lambda);
                if (rec.movement <= fo.filter_tol) {
                    rec.label = ModeLabel::filtered;
                    rec.vector_refined = rr.vec;
                } else {
                    rec.label = ModeLabel::spurious;
                }
            } else {
                rec.label = ModeLabel::spurious;
            }
        } else {
            double best = std::numeric_limits<double>::infinity();
            std::complex<double> bl;
            for (Eigen::Index j = 0; j < es2->values.size(); ++j) {
                const double d = std::abs(es2->values[j] - rec.lambda);
                if (d < best) {
                    best = d;
                    bl = es2->values[j];
                }
            }
            rec.lambda_refined = bl;
            rec.movement = best;
            rec.label = best <= fo.filter_tol ? ModeLabel::filtered : ModeLabel::spurious;
        }
        ps.modes.push_back(std::move(rec));
    }
    return ps;
}

enum class Verdict { spectrally_stable, unstable, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::spectrally_stable: return "spectrally_stable";
        case Verdict::unstable: return "unstable";
        default: return "inconclusive";
    }
}

struct SpectrumReport {
    double max_re_border = 0.0;
    double max_re_point = -std::numeric_limits<double>::infinity();  // filtered, non-translation
    double translation_residual = 0.0;
    int n_translation_modes = 0;   // filtered eigenvalues of L inside the zero window
    int n_zero_modes_A = 0;        // filtered eigenvalues of A inside the zero window
    int n_unresolved_right = 0;    // spurious modes with Re >= -gap_tol
    double s_bar = 0.0;
    bool hypothesis_s = false;     // s < s_bar
    Verdict verdict = Verdict::inconclusive;
};

/// Combines borders, the filtered spectra of L and A and the translation
/// residual into the stability verdict.
inline SpectrumReport spectral_verdict(const ShockData& sd, const BorderCurves& border_minus,
                                       const BorderCurves& border_plus,
                                       const PointSpectrumResult& psL,
                                       const PointSpectrumResult& psA, double trans_residual,
                                       const FilterOptions& fo = {}) {
    SpectrumReport rep;
    rep.max_re_border = std::max(border_minus.max_re, border_plus.max_re);
    rep.translation_residual = trans_residual;
    rep.s_bar = speed_bound(sd.r_minus, sd.gas.gamma);
    rep.hypothesis_s = sd.s < rep.s_bar;

    bool unstable_point = false;
    for (const auto* m : psL.filtered()) {
        if (std::abs(m->lambda) <= fo.zero_window) {
            ++rep.n_translation_modes;
            continue;
        }
        rep.max_re_point = std::max(rep.max_re_point, m->lambda.real());
        if (m->lambda.real() > fo.gap_tol) unstable_point = true;
    }
    for (const auto& m : psL.modes)
        if (m.label == ModeLabel::spurious && m.lambda.real() >= -fo.gap_tol)
            ++rep.n_unresolved_right;
    for (const auto* m : psA.filtered())
        if (std::abs(m->lambda) <= fo.zero_window) ++rep.n_zero_modes_A;

    const bool borders_ok = rep.max_re_border <= fo.border_tol;
    if (!borders_ok || unstable_point) {
        rep.verdict = Verdict::unstable;
        return rep;
    }
    const bool point_ok = rep.n_translation_modes == 1 &&
                          rep.max_re_point < -fo.gap_tol &&
                          rep.n_zero_modes_A == 0 &&
                          rep.n_unresolved_right == 0 &&
                          rep.translation_residual <= fo.trans_res_tol;
    rep.verdict = point_ok ? Verdict::spectrally_stable : Verdict::inconclusive;
    return rep;
}

}  // namespace qhd
