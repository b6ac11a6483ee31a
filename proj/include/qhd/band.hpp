// Banded real matrices, Fornberg finite-difference weights and the FD4
// derivative operators used for the discretized spectral problems.  The
// operators keep their banded structure through composition, which is what
// makes the grid-doubling eigenvalue refinement cheap.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qhd {

/// Square banded matrix: entry (i, i+d) for d in [lo, hi] lives at w(i, d-lo).
/// Slots whose column index would fall outside [0, n) are structural zeros.
struct BandMatrix {
    int n = 0;
    int lo = 0, hi = 0;
    Eigen::MatrixXd w;

    static BandMatrix zero(int n, int lo, int hi) {
        BandMatrix b;
        b.n = n;
        b.lo = lo;
        b.hi = hi;
        b.w = Eigen::MatrixXd::Zero(n, hi - lo + 1);
        return b;
    }

    double at(int i, int j) const {
        const int d = j - i;
        if (d < lo || d > hi) return 0.0;
        return w(i, d - lo);
    }
    void add_at(int i, int j, double v) {
        const int d = j - i;
        if (d < lo || d > hi) throw std::out_of_range("BandMatrix::add_at outside band");
        w(i, d - lo) += v;
    }

    /// diag(c) * M
    BandMatrix scaled_rows(const std::vector<double>& c) const {
        BandMatrix r = *this;
        for (int i = 0; i < n; ++i) r.w.row(i) *= c[i];
        return r;
    }
    /// M * diag(c)
    BandMatrix scaled_cols(const std::vector<double>& c) const {
        BandMatrix r = *this;
        for (int i = 0; i < n; ++i)
            for (int d = lo; d <= hi; ++d) {
                const int j = i + d;
                if (j >= 0 && j < n) r.w(i, d - lo) *= c[j];
            }
        return r;
    }

    BandMatrix& operator+=(const BandMatrix& o) {
        if (o.lo < lo || o.hi > hi) {
            BandMatrix wider = zero(n, std::min(lo, o.lo), std::max(hi, o.hi));
            wider.w.middleCols(lo - wider.lo, hi - lo + 1) = w;
            *this = wider;
        }
        w.middleCols(o.lo - lo, o.hi - o.lo + 1) += o.w;
        return *this;
    }
    BandMatrix& operator*=(double c) {
        w *= c;
        return *this;
    }

    friend BandMatrix operator*(const BandMatrix& a, const BandMatrix& b) {
        BandMatrix c = zero(a.n, a.lo + b.lo, a.hi + b.hi);
        for (int i = 0; i < a.n; ++i)
            for (int d = a.lo; d <= a.hi; ++d) {
                const int m = i + d;
                if (m < 0 || m >= a.n) continue;
                const double av = a.w(i, d - a.lo);
                if (av == 0.0) continue;
                for (int e = b.lo; e <= b.hi; ++e) {
                    const int j = m + e;
                    if (j < 0 || j >= a.n) continue;
                    c.w(i, d + e - c.lo) += av * b.w(m, e - b.lo);
                }
            }
        return c;
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            const int dlo = std::max(lo, -i), dhi = std::min(hi, n - 1 - i);
            for (int d = dlo; d <= dhi; ++d) acc += w(i, d - lo) * x[i + d];
            y[i] = acc;
        }
        return y;
    }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const {
        Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n);
        for (int i = 0; i < n; ++i) {
            std::complex<double> acc = 0.0;
            const int dlo = std::max(lo, -i), dhi = std::min(hi, n - 1 - i);
            for (int d = dlo; d <= dhi; ++d) acc += w(i, d - lo) * x[i + d];
            y[i] = acc;
        }
        return y;
    }

    Eigen::MatrixXd to_dense() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int d = lo; d <= hi; ++d) {
                const int j = i + d;
                if (j >= 0 && j < n) m(i, j) = w(i, d - lo);
            }
        return m;
    }
};

namespace fd {

/// Fornberg weights: derivative orders 0..m at point z from the given nodes.
/// Returns an (n_nodes) x (m+1) array, column k = weights of the k-th
/// derivative.
inline Eigen::MatrixXd fornberg_weights(double z, const std::vector<double>& x, int m) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, m + 1);
    double c1 = 1.0;
    double c4 = x[0] - z;
    C(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k) C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    return C;
}

/// 4th-order derivative matrix d^m/dx^m on a uniform grid: central stencils
/// in the interior, one-sided (same order) near the boundary.
inline BandMatrix derivative_matrix(int n, double h, int m) {
    if (m < 1 || m > 3) throw std::invalid_argument("derivative_matrix: m in {1,2,3}");
    const int r = (m == 3) ? 3 : 2;   // central half width
    const int wnd = m + 4;            // one-sided window (order-4 boundary stencils)
    const int reach = std::max(r, wnd - 1);
    BandMatrix D = BandMatrix::zero(n, -reach, reach);

    std::vector<double> nodes;
    for (int i = 0; i < n; ++i) {
        int j0;
        if (i - r >= 0 && i + r < n)
            j0 = i - r;
        else if (i - r < 0)
            j0 = 0;
        else
            j0 = n - wnd;
        const int wlen = (i - r >= 0 && i + r < n) ? 2 * r + 1 : wnd;
        nodes.resize(wlen);
        for (int j = 0; j < wlen; ++j) nodes[j] = (j0 + j - i) * h;
        const Eigen::MatrixXd W = fornberg_weights(0.0, nodes, m);
        for (int j = 0; j < wlen; ++j) D.add_at(i, j0 + j, W(j, m));
    }
    return D;
}

}  // namespace fd

/// Interleaves a 2x2 block structure of scalar band matrices into one band
/// matrix acting on [rho_0, u_0, rho_1, u_1, ...].
inline BandMatrix interleave2x2(const BandMatrix& brr, const BandMatrix& bru,
                                const BandMatrix& bur, const BandMatrix& buu) {
    const int n = brr.n;
    const int slo = std::min({brr.lo, bru.lo, bur.lo, buu.lo});
    const int shi = std::max({brr.hi, bru.hi, bur.hi, buu.hi});
    BandMatrix M = BandMatrix::zero(2 * n, 2 * slo - 1, 2 * shi + 1);
    auto emit = [&](const BandMatrix& blk, int rrow, int ccol) {
        for (int i = 0; i < n; ++i)
            for (int d = blk.lo; d <= blk.hi; ++d) {
                const int j = i + d;
                if (j < 0 || j >= n) continue;
                const double v = blk.w(i, d - blk.lo);
                if (v != 0.0) M.add_at(2 * i + rrow, 2 * j + ccol, v);
            }
    };
    emit(brr, 0, 0);
    emit(bru, 0, 1);
    emit(bur, 1, 0);
    emit(buu, 1, 1);
    return M;
}

}  // namespace qhd
