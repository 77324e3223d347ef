#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "gmalab/errors.hpp"

// Elementary symmetric functions, Hermitian pencils and majorization.
//
// Conventions used throughout the library:
//   S_k(lambda)  = sum over k-subsets of products of entries, S_0 = 1, S_{-1} = 0;
//   S_{k;i...}   = S_k with the listed entries replaced by zero, and zero
//                  outright when an index repeats;
//   spectra are stored in ascending order;
//   relative eigenvalues of a pair (A, omega) are the eigenvalues of
//   L^{-1} A L^{-*} for the Cholesky factor omega = L L^*.

namespace gmalab {

inline constexpr long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

inline constexpr long long factorial(int n) {
    long long r = 1;
    for (int j = 2; j <= n; ++j) r *= j;
    return r;
}

// Ascending, finite eigenvalue list.
class Spectrum {
public:
    explicit Spectrum(std::vector<double> values) : v_(std::move(values)) {
        if (v_.empty()) throw std::invalid_argument("Spectrum: empty eigenvalue list");
        for (double x : v_) {
            if (!std::isfinite(x)) throw std::invalid_argument("Spectrum: non-finite eigenvalue");
        }
        std::sort(v_.begin(), v_.end());
    }

    int n() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return v_; }
    double min() const { return v_.front(); }
    double max() const { return v_.back(); }

private:
    std::vector<double> v_;
};

// Dense Hermitian matrix.  Ingestion checks Hermiticity entrywise to `tol`
// and then stores the exact Hermitian average (A + A^*)/2 so downstream
// algebra never sees the ingestion defect.
class HermitianMatrix {
public:
    static HermitianMatrix from_matrix(const Eigen::MatrixXcd& m, double tol = 1e-12) {
        if (m.rows() != m.cols() || m.rows() == 0)
            throw std::invalid_argument("HermitianMatrix: matrix must be square and non-empty");
        const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (defect > tol)
            throw std::invalid_argument("HermitianMatrix: Hermiticity defect " +
                                        std::to_string(defect) + " exceeds tolerance");
        return HermitianMatrix(((m + m.adjoint()) * 0.5).eval());
    }

    static HermitianMatrix identity(int n) {
        return HermitianMatrix(Eigen::MatrixXcd::Identity(n, n));
    }

    static HermitianMatrix scaled_identity(int n, double s) {
        return HermitianMatrix((s * Eigen::MatrixXcd::Identity(n, n)).eval());
    }

    static HermitianMatrix real_diagonal(const std::vector<double>& d) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d.size()),
                                                    static_cast<Eigen::Index>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(i)) = d[i];
        return HermitianMatrix(std::move(m));
    }

    int n() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& mat() const { return m_; }

private:
    explicit HermitianMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {}
    Eigen::MatrixXcd m_;
};

// S_k via the stable prefix recurrence e_j <- e_j + lambda_i * e_{j-1}.
// For nonnegative input every intermediate is a sum of nonnegative products,
// so no cancellation occurs.  The scalar type is a template parameter so the
// same production recurrence runs in exact rational arithmetic in tests.
template <class T>
std::vector<T> elementary_symmetric_all(std::span<const T> lambda, int up_to) {
    const int n = static_cast<int>(lambda.size());
    if (up_to < 0 || up_to > n)
        throw std::domain_error("elementary_symmetric_all: order out of [0, n]");
    std::vector<T> e(static_cast<std::size_t>(up_to) + 1, T(0));
    e[0] = T(1);
    int filled = 0;
    for (int i = 0; i < n; ++i) {
        filled = std::min(filled + 1, up_to);
        for (int j = filled; j >= 1; --j) e[static_cast<std::size_t>(j)] =
            e[static_cast<std::size_t>(j)] + lambda[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(j) - 1];
    }
    return e;
}

template <class T>
T elementary_symmetric(std::span<const T> lambda, int k) {
    const int n = static_cast<int>(lambda.size());
    if (k < -1 || k > n)
        throw std::domain_error("elementary_symmetric: order k must lie in [-1, n]");
    if (k == -1) return T(0);
    if (k == 0) return T(1);
    return elementary_symmetric_all(lambda, k)[static_cast<std::size_t>(k)];
}

inline double elementary_symmetric(const Spectrum& s, int k) {
    return elementary_symmetric(std::span<const double>(s.values()), k);
}

// S_{k;i_1...i_l}: zero the listed entries first; a repeated index makes the
// whole symbol zero by convention.
template <class T>
T restricted_symmetric(std::span<const T> lambda, int k, std::span<const int> excluded) {
    const int n = static_cast<int>(lambda.size());
    if (k < -1 || k > n)
        throw std::domain_error("restricted_symmetric: order k must lie in [-1, n]");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int idx : excluded) {
        if (idx < 0 || idx >= n)
            throw std::domain_error("restricted_symmetric: excluded index out of range");
        if (seen[static_cast<std::size_t>(idx)]) return T(0);
        seen[static_cast<std::size_t>(idx)] = 1;
    }
    if (k == -1) return T(0);
    std::vector<T> reduced(lambda.begin(), lambda.end());
    for (int idx : excluded) reduced[static_cast<std::size_t>(idx)] = T(0);
    return elementary_symmetric(std::span<const T>(reduced), k);
}

inline double restricted_symmetric(const Spectrum& s, int k, std::span<const int> excluded) {
    return restricted_symmetric(std::span<const double>(s.values()), k, excluded);
}

// L^{-1} for the Cholesky factor omega = L L^*; congruence by this factor
// reduces the pencil (a, omega) to an ordinary Hermitian eigenproblem.
// Throws PencilError when omega is not positive definite.
Eigen::MatrixXcd pencil_reduction_factor(const HermitianMatrix& omega);

// Eigenvalues of the pencil (a, omega): Cholesky-reduce omega, then run a
// cyclic complex Jacobi iteration on L^{-1} a L^{-*} until the off-diagonal
// Frobenius norm falls below 1e-13 (absolute, with a relative floor for
// large-scale inputs).  Throws PencilError when omega is not positive definite.
Spectrum relative_eigenvalues(const HermitianMatrix& a, const HermitianMatrix& omega);

// In-place variant on raw Eigen storage for hot loops; `scratch` is
// overwritten.  Writes the ascending eigenvalues to `out[0..n)`.
void relative_eigenvalues_inplace(Eigen::MatrixXcd& scratch, double* out);

// True when mu majorizes lambda: descending partial sums of mu dominate those
// of lambda and the totals agree within `total_tol`.
bool majorizes(const Spectrum& mu, const Spectrum& lambda, double total_tol = 1e-10);

// Newton-Maclaurin margins m_k = (S_k/C(n,k))^{1/k} - (S_{k+1}/C(n,k+1))^{1/(k+1)}
// for k = 1..n-1; every margin is nonnegative on positive spectra.
// Throws std::domain_error when an eigenvalue is nonpositive.
std::vector<double> newton_maclaurin_margin(const Spectrum& s);

} // namespace gmalab
