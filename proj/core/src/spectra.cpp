#include "gmalab/spectra.hpp"

#include <complex>

namespace gmalab {

namespace {

using cplx = std::complex<double>;

double off_diagonal_norm(const Eigen::MatrixXcd& a) {
    double s = 0.0;
    const int n = static_cast<int>(a.rows());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One cyclic sweep of two-sided complex Jacobi rotations.  Each rotation
// zeroes the pivot (p,q) exactly; the sweep is repeated until the off-diagonal
// mass is gone.  Quadratic convergence makes ~5 sweeps plenty at n <= 6.
void jacobi_sweep(Eigen::MatrixXcd& a) {
    const int n = static_cast<int>(a.rows());
    for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const cplx apq = a(p, q);
            const double mag = std::abs(apq);
            if (mag == 0.0) continue;
            const cplx phase = apq / mag;
            const double app = a(p, p).real();
            const double aqq = a(q, q).real();
            const double tau = (aqq - app) / (2.0 * mag);
            const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const cplx s = t * c * phase;

            // Apply J^* A J with J = [[c, s], [-conj(s), c]] on rows/cols (p,q).
            for (int k = 0; k < n; ++k) {
                const cplx akp = a(k, p);
                const cplx akq = a(k, q);
                a(k, p) = c * akp - std::conj(s) * akq;
                a(k, q) = s * akp + c * akq;
            }
            for (int k = 0; k < n; ++k) {
                const cplx apk = a(p, k);
                const cplx aqk = a(q, k);
                a(p, k) = c * apk - s * aqk;
                a(q, k) = std::conj(s) * apk + c * aqk;
            }
            // Clean the pivot pair and enforce real diagonal entries; the
            // rotation makes them exact up to roundoff anyway.
            a(p, q) = 0.0;
            a(q, p) = 0.0;
            a(p, p) = cplx(a(p, p).real(), 0.0);
            a(q, q) = cplx(a(q, q).real(), 0.0);
        }
    }
}

} // namespace

void relative_eigenvalues_inplace(Eigen::MatrixXcd& scratch, double* out) {
    const int n = static_cast<int>(scratch.rows());
    const double scale = std::max(1.0, scratch.cwiseAbs().maxCoeff());
    const double stop = 1e-13 * std::max(1.0, scale);
    for (int sweep = 0; sweep < 60; ++sweep) {
        if (off_diagonal_norm(scratch) <= stop) break;
        jacobi_sweep(scratch);
    }
    for (int i = 0; i < n; ++i) out[i] = scratch(i, i).real();
    std::sort(out, out + n);
}

Eigen::MatrixXcd pencil_reduction_factor(const HermitianMatrix& omega) {
    const int n = omega.n();
    Eigen::LLT<Eigen::MatrixXcd> llt(omega.mat());
    if (llt.info() != Eigen::Success)
        throw PencilError("pencil reduction: omega is not positive definite");
    // Guard against the semi-definite edge that LLT occasionally accepts.
    const Eigen::MatrixXcd l = llt.matrixL();
    for (int i = 0; i < n; ++i) {
        if (!(l(i, i).real() > 0.0))
            throw PencilError("pencil reduction: omega is not positive definite");
    }
    return llt.matrixL().solve(Eigen::MatrixXcd::Identity(n, n));
}

Spectrum relative_eigenvalues(const HermitianMatrix& a, const HermitianMatrix& omega) {
    if (a.n() != omega.n())
        throw std::invalid_argument("relative_eigenvalues: dimension mismatch");
    const int n = a.n();

    Eigen::LLT<Eigen::MatrixXcd> llt(omega.mat());
    if (llt.info() != Eigen::Success)
        throw PencilError("relative_eigenvalues: omega is not positive definite");
    // Guard against the semi-definite edge that LLT occasionally accepts.
    const Eigen::MatrixXcd l = llt.matrixL();
    for (int i = 0; i < n; ++i) {
        if (!(l(i, i).real() > 0.0))
            throw PencilError("relative_eigenvalues: omega is not positive definite");
    }

    // B = L^{-1} A L^{-*} via two triangular solves.
    Eigen::MatrixXcd b = llt.matrixL().solve(a.mat());
    b = llt.matrixL().solve(b.adjoint()).adjoint().eval();
    b = ((b + b.adjoint()) * 0.5).eval();

    std::vector<double> ev(static_cast<std::size_t>(n));
    relative_eigenvalues_inplace(b, ev.data());
    return Spectrum(std::move(ev));
}

bool majorizes(const Spectrum& mu, const Spectrum& lambda, double total_tol) {
    if (mu.n() != lambda.n())
        throw std::invalid_argument("majorizes: spectra have different sizes");
    const int n = mu.n();
    double pm = 0.0;
    double pl = 0.0;
    // Ascending storage, so walk from the top for descending partial sums.
    for (int k = 0; k < n; ++k) {
        pm += mu[n - 1 - k];
        pl += lambda[n - 1 - k];
        if (k < n - 1 && pl > pm + total_tol) return false;
    }
    return std::abs(pm - pl) <= total_tol;
}

std::vector<double> newton_maclaurin_margin(const Spectrum& s) {
    const int n = s.n();
    for (int i = 0; i < n; ++i) {
        if (!(s[i] > 0.0))
            throw std::domain_error("newton_maclaurin_margin: spectrum must be strictly positive");
    }
    std::span<const double> lam(s.values());
    const std::vector<double> e = elementary_symmetric_all(lam, n);
    std::vector<double> m;
    m.reserve(static_cast<std::size_t>(std::max(0, n - 1)));
    for (int k = 1; k <= n - 1; ++k) {
        const double a = std::pow(e[static_cast<std::size_t>(k)] / static_cast<double>(binomial(n, k)),
                                  1.0 / k);
        const double b = std::pow(e[static_cast<std::size_t>(k) + 1] / static_cast<double>(binomial(n, k + 1)),
                                  1.0 / (k + 1));
        m.push_back(a - b);
    }
    return m;
}

} // namespace gmalab
