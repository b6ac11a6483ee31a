// Discretizations of the linearized operator L around the profile, of the
// integrated/transformed operator A, and of the constant-coefficient
// asymptotic symbols.  Both operators act on interleaved two-component grid
// vectors; the FD4 path keeps a banded matrix, the Chebyshev collocation path
// a dense one (cross-check scheme).

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qhd/band.hpp"
#include "qhd/coeffs.hpp"
#include "qhd/hydro.hpp"
#include "qhd/profile.hpp"

namespace qhd {

enum class Scheme { fd4, spectral };
enum class OperatorKind { L, A };

inline const char* to_string(Scheme s) { return s == Scheme::fd4 ? "fd4" : "spectral"; }
inline const char* to_string(OperatorKind k) { return k == OperatorKind::L ? "L" : "A"; }

struct OperatorMatrix {
    OperatorKind kind = OperatorKind::L;
    Scheme scheme = Scheme::fd4;
    int n = 0;          // grid points per component; matrix is 2n x 2n
    double dx = 0.0;    // uniform spacing (fd4 only)
    double domain_length = 0.0;
    BandMatrix band;              // fd4
    Eigen::MatrixXd dense_mat;    // spectral
    std::vector<double> nodes;    // spectral collocation nodes (interior)

    bool is_banded() const { return scheme == Scheme::fd4; }
    Eigen::MatrixXd to_dense() const { return is_banded() ? band.to_dense() : dense_mat; }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
        if (is_banded()) return band.apply(v);
        return dense_mat * v;
    }
};

namespace detail {

// Adapters so the operator blocks are written once for both backends.
struct BandBackend {
    using Mat = BandMatrix;
    int n;
    Mat d1, d2, d3;
    static Mat diag(const std::vector<double>& c) {
        Mat m = BandMatrix::zero(static_cast<int>(c.size()), 0, 0);
        for (int i = 0; i < m.n; ++i) m.w(i, 0) = c[i];
        return m;
    }
    static Mat dl(const std::vector<double>& c, const Mat& m) { return m.scaled_rows(c); }
    static Mat dr(const Mat& m, const std::vector<double>& c) { return m.scaled_cols(c); }
};

struct DenseBackend {
    using Mat = Eigen::MatrixXd;
    int n;
    Mat d1, d2, d3;
    static Mat diag(const std::vector<double>& c) {
        Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
        return v.asDiagonal();
    }
    static Mat dl(const std::vector<double>& c, const Mat& m) {
        return Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()).asDiagonal() * m;
    }
    static Mat dr(const Mat& m, const std::vector<double>& c) {
        return m * Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()).asDiagonal();
    }
};

// Pointwise profile data needed by the assemblies.
struct ProfileArrays {
    std::vector<double> R, dR, d2R, U, dU, d2U;
    ShockData sd;

    static ProfileArrays from_grid(const ProfileGrid& g) {
        return {g.R, g.dR, g.d2R, g.U, g.dU, g.d2U, g.shock};
    }
    static ProfileArrays from_nodes(const ProfileGrid& g, const std::vector<double>& xs) {
        ProfileArrays p;
        p.sd = g.shock;
        const double A = g.shock.a_const, s = g.shock.s;
        for (double xq : xs) {
            const auto [R, P] = g.trajectory.eval(xq, g.shock);
            const double d2 = ode_rhs(R, P, g.shock)[1];
            p.R.push_back(R);
            p.dR.push_back(P);
            p.d2R.push_back(d2);
            const double R2 = R * R;
            p.U.push_back(s - A / R);
            p.dU.push_back(A * P / R2);
            p.d2U.push_back(A * d2 / R2 - 2.0 * A * P * P / (R2 * R));
        }
        return p;
    }
};

// Blocks of L, composed exactly as the operator is displayed:
//   rho-row: s rho' - (R u + U rho)'
//   u-row:   s u' - (U u)' - (h'(R) rho)' + mu (R^-1 (R u + U rho)')'
//            - mu (R^-2 (R U)' rho)'
//            + (k^2/2) (R^-1/2 (R^-1/2 rho)'')' - (k^2/2) (R^-3/2 (sqrt R)'' rho)'
template <class BK>
void blocks_L(const BK& bk, const ProfileArrays& p, typename BK::Mat& brr,
              typename BK::Mat& bru, typename BK::Mat& bur, typename BK::Mat& buu) {
    const std::size_t n = p.R.size();
    const ShockData& sd = p.sd;
    const double s = sd.s, mu = sd.gas.mu, k2 = sd.gas.k * sd.gas.k, gam = sd.gas.gamma;

    std::vector<double> hpR(n), invR(n), sqrtRinv(n), ru_prime_over_R2(n), bohm_low(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double R = p.R[i];
        hpR[i] = enthalpy_prime(R, gam);
        invR[i] = 1.0 / R;
        sqrtRinv[i] = 1.0 / std::sqrt(R);
        ru_prime_over_R2[i] = (p.dR[i] * p.U[i] + R * p.dU[i]) / (R * R);
        // (sqrt R)'' = R''/(2 sqrt R) - (R')^2/(4 R^(3/2))
        const double sqR = std::sqrt(R);
        const double ddsq = 0.5 * p.d2R[i] / sqR - 0.25 * p.dR[i] * p.dR[i] / (R * sqR);
        bohm_low[i] = ddsq / (R * sqR);  // R^-3/2 (sqrt R)''
    }

    using M = typename BK::Mat;
    const M& D1 = bk.d1;
    const M& D2 = bk.d2;

    M sd1 = D1;
    sd1 *= s;
    M d1u = BK::dr(D1, p.U);
    d1u *= -1.0;
    brr = sd1;
    brr += d1u;

    bru = BK::dr(D1, p.R);
    bru *= -1.0;

    buu = sd1;
    buu += d1u;
    {
        M visc = BK::dl(invR, BK::dr(D1, p.R));
        M t = D1 * visc;
        t *= mu;
        buu += t;
    }

    bur = BK::dr(D1, hpR);
    bur *= -1.0;
    {
        M visc = BK::dl(invR, BK::dr(D1, p.U));
        M t = D1 * visc;
        t *= mu;
        bur += t;
    }
    {
        M t = BK::dr(D1, ru_prime_over_R2);
        t *= -mu;
        bur += t;
    }
    {
        M inner = BK::dl(sqrtRinv, BK::dr(D2, sqrtRinv));
        M t = D1 * inner;
        t *= 0.5 * k2;
        bur += t;
    }
    {
        M t = BK::dr(D1, bohm_low);
        t *= -0.5 * k2;
        bur += t;
    }
}

// Blocks of A, the transformed spectral problem:
//   rho-row: s rho' - v' + g rho + (R'/R) v
//   v-row:  -(f1 + 2 mu U') rho' - (mu g' + f2 g) rho + k^2 L_Q rho
//           + (f2 - mu R'/R) v' + mu v'' - (f2 R'/R + mu (R'/R)') v
// with L_Q rho = rho'''/2 - (R'/R) rho''/2 - (R'/R)' rho'/2.
template <class BK>
void blocks_A(const BK& bk, const ProfileArrays& p, const CoefficientFields& cf,
              typename BK::Mat& brr, typename BK::Mat& brv, typename BK::Mat& bvr,
              typename BK::Mat& bvv) {
    const std::size_t n = p.R.size();
    const ShockData& sd = p.sd;
    const double s = sd.s, mu = sd.gas.mu, k2 = sd.gas.k * sd.gas.k;

    std::vector<double> rpr(n), rpr_prime(n), c_rho1(n), c_rho0(n), c_v1(n), c_v0(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double R = p.R[i];
        rpr[i] = p.dR[i] / R;
        rpr_prime[i] = p.d2R[i] / R - rpr[i] * rpr[i];
        c_rho1[i] = -(cf.f1[i] + 2.0 * mu * p.dU[i]);
        c_rho0[i] = -(mu * cf.dg[i] + cf.f2[i] * cf.g[i]);
        c_v1[i] = cf.f2[i] - mu * rpr[i];
        c_v0[i] = -(cf.f2[i] * rpr[i] + mu * rpr_prime[i]);
    }

    using M = typename BK::Mat;
    const M& D1 = bk.d1;
    const M& D2 = bk.d2;
    const M& D3 = bk.d3;

    brr = D1;
    brr *= s;
    brr += BK::diag(cf.g);

    brv = D1;
    brv *= -1.0;
    brv += BK::diag(rpr);

    bvr = BK::dl(c_rho1, D1);
    bvr += BK::diag(c_rho0);
    {
        M lq = D3;
        lq *= 0.5;
        M t2 = BK::dl(rpr, D2);
        t2 *= -0.5;
        lq += t2;
        M t1 = BK::dl(rpr_prime, D1);
        t1 *= -0.5;
        lq += t1;
        lq *= k2;
        bvr += lq;
    }

    bvv = BK::dl(c_v1, D1);
    {
        M t = D2;
        t *= mu;
        bvv += t;
    }
    bvv += BK::diag(c_v0);
}

inline void check_domain(const ProfileGrid& g, double tol) {
    const double res_left = std::abs(g.R.front() - g.shock.r_minus);
    const double res_right = std::hypot(g.R.back() - g.shock.r_plus, g.dR.back());
    if (res_left > tol || res_right > tol)
        throw std::invalid_argument(
            "operator assembly refused: profile tails not resolved on this domain");
}

/// Chebyshev-Gauss-Lobatto differentiation matrix on [a, b] with nodes
/// returned in increasing order.
inline Eigen::MatrixXd chebyshev_d1(int nn, double a, double b, std::vector<double>& nodes) {
    const int N = nn - 1;
    Eigen::VectorXd xc(nn);
    for (int j = 0; j <= N; ++j) xc[j] = std::cos(M_PI * j / N);
    Eigen::MatrixXd D(nn, nn);
    auto cconst = [&](int j) { return (j == 0 || j == N) ? 2.0 : 1.0; };
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j)
            if (i != j)
                D(i, j) = (cconst(i) / cconst(j)) * std::pow(-1.0, i + j) / (xc[i] - xc[j]);
    for (int i = 0; i <= N; ++i) {
        double ssum = 0.0;
        for (int j = 0; j <= N; ++j)
            if (j != i) ssum += D(i, j);
        D(i, i) = -ssum;
    }
    // Flip to increasing x and map [-1, 1] -> [a, b].
    Eigen::MatrixXd Dr(nn, nn);
    for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) Dr(i, j) = D(nn - 1 - i, nn - 1 - j);
    Dr *= -2.0 / (b - a);
    nodes.resize(nn);
    for (int i = 0; i < nn; ++i) nodes[i] = 0.5 * (a + b) - 0.5 * (b - a) * xc[nn - 1 - i];
    return Dr;
}

}  // namespace detail

/// Assembles the discretized linearized operator L on the profile grid.
inline OperatorMatrix assemble_L(const ProfileGrid& g, Scheme scheme = Scheme::fd4,
                                 double domain_tol = 1e-6) {
    detail::check_domain(g, domain_tol);
    OperatorMatrix op;
    op.kind = OperatorKind::L;
    op.scheme = scheme;
    op.domain_length = g.x.back() - g.x.front();

    if (scheme == Scheme::fd4) {
        const int n = g.n();
        detail::BandBackend bk{n, fd::derivative_matrix(n, g.dx, 1),
                               fd::derivative_matrix(n, g.dx, 2),
                               fd::derivative_matrix(n, g.dx, 3)};
        BandMatrix brr, bru, bur, buu;
        detail::blocks_L(bk, detail::ProfileArrays::from_grid(g), brr, bru, bur, buu);
        op.n = n;
        op.dx = g.dx;
        op.band = interleave2x2(brr, bru, bur, buu);
        return op;
    }

    // Chebyshev collocation on the same domain, homogeneous Dirichlet by
    // restriction to interior nodes.
    const int nn = g.n();
    std::vector<double> nodes;
    Eigen::MatrixXd D1 = detail::chebyshev_d1(nn, g.x.front(), g.x.back(), nodes);
    detail::DenseBackend bk{nn, D1, D1 * D1, D1 * D1 * D1};
    Eigen::MatrixXd brr, bru, bur, buu;
    detail::blocks_L(bk, detail::ProfileArrays::from_nodes(g, nodes), brr, bru, bur, buu);

    const int ni = nn - 2;
    op.n = ni;
    op.nodes.assign(nodes.begin() + 1, nodes.end() - 1);
    op.dense_mat.setZero(2 * ni, 2 * ni);
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < ni; ++j) {
            op.dense_mat(2 * i, 2 * j) = brr(i + 1, j + 1);
            op.dense_mat(2 * i, 2 * j + 1) = bru(i + 1, j + 1);
            op.dense_mat(2 * i + 1, 2 * j) = bur(i + 1, j + 1);
            op.dense_mat(2 * i + 1, 2 * j + 1) = buu(i + 1, j + 1);
        }
    return op;
}

/// Assembles the discretized integrated operator A in the (rho, v) variables.
inline OperatorMatrix assemble_A(const ProfileGrid& g, const CoefficientFields& cf,
                                 Scheme scheme = Scheme::fd4, double domain_tol = 1e-6) {
    detail::check_domain(g, domain_tol);
    OperatorMatrix op;
    op.kind = OperatorKind::A;
    op.scheme = scheme;
    op.domain_length = g.x.back() - g.x.front();

    if (scheme == Scheme::fd4) {
        const int n = g.n();
        detail::BandBackend bk{n, fd::derivative_matrix(n, g.dx, 1),
                               fd::derivative_matrix(n, g.dx, 2),
                               fd::derivative_matrix(n, g.dx, 3)};
        BandMatrix brr, brv, bvr, bvv;
        detail::blocks_A(bk, detail::ProfileArrays::from_grid(g), cf, brr, brv, bvr, bvv);
        op.n = n;
        op.dx = g.dx;
        op.band = interleave2x2(brr, brv, bvr, bvv);
        return op;
    }

    const int nn = g.n();
    std::vector<double> nodes;
    Eigen::MatrixXd D1 = detail::chebyshev_d1(nn, g.x.front(), g.x.back(), nodes);
    detail::DenseBackend bk{nn, D1, D1 * D1, D1 * D1 * D1};
    const auto arrays = detail::ProfileArrays::from_nodes(g, nodes);
    // Coefficient fields at the collocation nodes.
    ProfileGrid pg;
    pg.shock = g.shock;
    pg.x = nodes;
    pg.R = arrays.R;
    pg.dR = arrays.dR;
    pg.d2R = arrays.d2R;
    pg.U = arrays.U;
    pg.dU = arrays.dU;
    pg.d2U = arrays.d2U;
    const CoefficientFields cfn = coefficient_fields(pg);

    Eigen::MatrixXd brr, brv, bvr, bvv;
    detail::blocks_A(bk, arrays, cfn, brr, brv, bvr, bvv);
    const int ni = nn - 2;
    op.n = ni;
    op.nodes.assign(nodes.begin() + 1, nodes.end() - 1);
    op.dense_mat.setZero(2 * ni, 2 * ni);
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < ni; ++j) {
            op.dense_mat(2 * i, 2 * j) = brr(i + 1, j + 1);
            op.dense_mat(2 * i, 2 * j + 1) = brv(i + 1, j + 1);
            op.dense_mat(2 * i + 1, 2 * j) = bvr(i + 1, j + 1);
            op.dense_mat(2 * i + 1, 2 * j + 1) = bvv(i + 1, j + 1);
        }
    return op;
}

/// Gamma transform (rho, u) -> (rho, U rho + R u) and its inverse.
inline Eigen::VectorXcd gamma_transform(const Eigen::VectorXcd& rho, const Eigen::VectorXcd& u,
                                        const ProfileGrid& g) {
    Eigen::VectorXcd v(rho.size());
    for (Eigen::Index i = 0; i < rho.size(); ++i) v[i] = g.U[i] * rho[i] + g.R[i] * u[i];
    return v;
}

inline Eigen::VectorXcd gamma_inverse(const Eigen::VectorXcd& rho, const Eigen::VectorXcd& v,
                                      const ProfileGrid& g) {
    Eigen::VectorXcd u(rho.size());
    for (Eigen::Index i = 0; i < rho.size(); ++i) u[i] = (v[i] - g.U[i] * rho[i]) / g.R[i];
    return u;
}

/// L_Q rho = rho'''/2 - (R'/R) rho''/2 - (R'/R)' rho'/2, FD4 on the grid.
inline Eigen::VectorXd lq_apply(const ProfileGrid& g, const Eigen::VectorXd& rho) {
    const int n = g.n();
    const BandMatrix D1 = fd::derivative_matrix(n, g.dx, 1);
    const BandMatrix D2 = fd::derivative_matrix(n, g.dx, 2);
    const BandMatrix D3 = fd::derivative_matrix(n, g.dx, 3);
    Eigen::VectorXd r1 = D1.apply(rho), r2 = D2.apply(rho), r3 = D3.apply(rho);
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        const double rpr = g.dR[i] / g.R[i];
        const double rprp = g.d2R[i] / g.R[i] - rpr * rpr;
        out[i] = 0.5 * r3[i] - 0.5 * rpr * r2[i] - 0.5 * rprp * r1[i];
    }
    return out;
}

/// Analytic symbol of the asymptotic operator at a frozen end state:
/// rows of L^pm under (rho, u) ~ e^{i xi x}.
inline Eigen::Matrix2cd asymptotic_symbol(double R, double U, const GasParams& gas, double s,
                                          double xi) {
    const std::complex<double> I(0.0, 1.0);
    const double k2 = gas.k * gas.k;
    Eigen::Matrix2cd m;
    m(0, 0) = I * xi * (s - U);
    m(0, 1) = -I * xi * R;
    m(1, 0) = -I * xi * enthalpy_prime(R, gas.gamma) - gas.mu * xi * xi * U / R -
              I * xi * xi * xi * 0.5 * k2 / R;
    m(1, 1) = I * xi * (s - U) - gas.mu * xi * xi;
    return m;
}

/// Symbol of the discrete operator at frequency xi, read off a middle row of
/// the banded matrix (valid for frozen coefficients, central stencils).
inline Eigen::Matrix2cd fd_symbol(const OperatorMatrix& op, double xi) {
    if (!op.is_banded()) throw std::invalid_argument("fd_symbol: fd4 operators only");
    const std::complex<double> I(0.0, 1.0);
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    const int ic = op.n / 2;
    for (int r = 0; r < 2; ++r) {
        const int row = 2 * ic + r;
        for (int d = op.band.lo; d <= op.band.hi; ++d) {
            const int col = row + d;
            if (col < 0 || col >= 2 * op.n) continue;
            const double v = op.band.w(row, d - op.band.lo);
            if (v == 0.0) continue;
            const int j = col / 2, c = col % 2;
            m(r, c) += v * std::exp(I * xi * (double)(j - ic) * op.dx);
        }
    }
    return m;
}

}  // namespace qhd
