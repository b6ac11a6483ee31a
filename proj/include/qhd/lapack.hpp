// Thin LAPACKE wrappers: dense real nonsymmetric eigensolve (dgeev, with
// complex eigenvector reconstruction from conjugate pairs) and banded complex
// LU factor/solve (zgbtrf/zgbtrs) for shift-invert iterations.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <lapacke.h>
#include <stdexcept>
#include <vector>

#include "qhd/band.hpp"

namespace qhd {

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EigenSolveResult {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  // empty unless requested
};

/// Full spectrum of a real dense matrix.  Eigenvectors of complex-conjugate
/// pairs are unpacked from the packed dgeev layout.
inline EigenSolveResult dense_eigensolve(Eigen::MatrixXd a, bool want_vectors) {
    const int n = static_cast<int>(a.rows());
    Eigen::VectorXd wr(n), wi(n);
    Eigen::MatrixXd vr;
    if (want_vectors) vr.resize(n, n);
    const int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(),
                                   n, wr.data(), wi.data(), nullptr, 1,
                                   want_vectors ? vr.data() : nullptr, want_vectors ? n : 1);
    if (info != 0)
        throw numerical_error("dgeev failed with info = " + std::to_string(info));

    EigenSolveResult res;
    res.values.resize(n);
    for (int j = 0; j < n; ++j) res.values[j] = {wr[j], wi[j]};
    if (want_vectors) {
        res.vectors.resize(n, n);
        for (int j = 0; j < n; ++j) {
            if (wi[j] > 0.0 && j + 1 < n) {
                res.vectors.col(j) = vr.col(j) + std::complex<double>(0, 1) * vr.col(j + 1);
                res.vectors.col(j + 1) = vr.col(j) - std::complex<double>(0, 1) * vr.col(j + 1);
                ++j;
            } else {
                res.vectors.col(j) = vr.col(j).cast<std::complex<double>>();
            }
        }
    }
    return res;
}

/// LU factorization of (M - sigma I) for a real banded M and complex shift,
/// in LAPACK general-band storage.
class ShiftedBandedLU {
  public:
    ShiftedBandedLU(const BandMatrix& m, std::complex<double> sigma) {
        n_ = m.n;
        kl_ = std::max(0, -m.lo);
        ku_ = std::max(0, m.hi);
        ldab_ = 2 * kl_ + ku_ + 1;
        ab_.assign(static_cast<std::size_t>(ldab_) * n_, {0.0, 0.0});
        ipiv_.resize(n_);
        for (int i = 0; i < n_; ++i)
            for (int d = m.lo; d <= m.hi; ++d) {
                const int j = i + d;
                if (j < 0 || j >= n_) continue;
                std::complex<double> v = m.w(i, d - m.lo);
                if (i == j) v -= sigma;
                ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] = v;
            }
        const int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_,
                                        reinterpret_cast<lapack_complex_double*>(ab_.data()),
                                        ldab_, ipiv_.data());
        singular_ = info > 0;
        if (info < 0)
            throw numerical_error("zgbtrf failed with info = " + std::to_string(info));
    }

    bool singular() const { return singular_; }

    /// Solves (M - sigma I) x = b in place.
    void solve(Eigen::VectorXcd& b) const {
        if (singular_) throw numerical_error("ShiftedBandedLU: factor is singular");
        const int info = LAPACKE_zgbtrs(
            LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1,
            reinterpret_cast<const lapack_complex_double*>(ab_.data()), ldab_, ipiv_.data(),
            reinterpret_cast<lapack_complex_double*>(b.data()), n_);
        if (info != 0)
            throw numerical_error("zgbtrs failed with info = " + std::to_string(info));
    }

  private:
    int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
    std::vector<std::complex<double>> ab_;
    std::vector<int> ipiv_;
    bool singular_ = false;
};

}  // namespace qhd
