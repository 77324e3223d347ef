#include "gmalab/energy.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "gmalab/dhym.hpp"
#include "gmalab/errors.hpp"

namespace gmalab {

namespace {

constexpr double kPi = std::numbers::pi;

// Reduced per-point pencil data for path energies: a0 = reduced background,
// b(x) = reduced Hessian correction, so the spectrum along the path is the
// eigenvalue list of a0 + t*b(x).
struct ReducedPath {
    Eigen::MatrixXcd a0;
    std::vector<Eigen::MatrixXcd> b;
};

ReducedPath reduce_path(const HermitianMatrix& background,
                        const HermitianMatrix& omega,
                        const PotentialField& phi) {
    const TorusGrid& g = phi.grid();
    if (background.n() != g.n || omega.n() != g.n)
        throw std::invalid_argument("path energy: dimension mismatch");
    const Eigen::MatrixXcd linv = pencil_reduction_factor(omega);
    const FormField hess = i_ddbar(phi);

    ReducedPath path;
    path.a0 = linv * background.mat() * linv.adjoint();
    path.b.assign(g.npoints(), Eigen::MatrixXcd(g.n, g.n));
    Eigen::MatrixXcd h(g.n, g.n), tmp(g.n, g.n);
    for (std::size_t p = 0; p < g.npoints(); ++p) {
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) h(j, k) = hess.hess(p, j, k);
        tmp.noalias() = linv * h;
        path.b[p].noalias() = tmp * linv.adjoint();
    }
    return path;
}

[[noreturn]] void throw_degenerate_at(const char* what, double t) {
    std::ostringstream msg;
    msg << what << " at path parameter t=" << t;
    throw DegenerateField(msg.str(), t);
}

} // namespace

Quadrature gauss_legendre_unit(int count) {
    if (count < 1)
        throw std::domain_error("gauss_legendre_unit: need at least one node");
    Quadrature q;
    q.nodes.resize(static_cast<std::size_t>(count));
    q.weights.resize(static_cast<std::size_t>(count));
    // Roots of P_count on (-1, 1) by Newton iteration from the Chebyshev
    // initial guess; standard three-term recurrence for P and P'.
    for (int i = 0; i < count; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= count; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = count * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        // Map from [-1, 1] to [0, 1]; weight 2/((1-x^2) dp^2) halves.
        q.nodes[static_cast<std::size_t>(count - 1 - i)] = 0.5 * (x + 1.0);
        q.weights[static_cast<std::size_t>(count - 1 - i)] =
            1.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

namespace {

double ma_energy_impl(const HermitianMatrix& background,
                      const PotentialField& phi, bool check_positivity) {
    const TorusGrid& g = phi.grid();
    const int n = g.n;
    if (background.n() != n)
        throw std::invalid_argument("ma_energy: background dimension mismatch");
    const FormField hess = i_ddbar(phi);

    // Coefficient extraction for det(t*chi + chi_phi): evaluate at the
    // integer nodes t = 0..n and solve the (n+1)x(n+1) Vandermonde system.
    Eigen::MatrixXd vand(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            vand(i, j) = std::pow(static_cast<double>(i), j);
    const Eigen::MatrixXd vinv = vand.inverse();

    Eigen::MatrixXcd chi_phi(n, n), shifted(n, n);
    Eigen::VectorXd dets(n + 1), rho(n + 1);
    double acc = 0.0;
    for (std::size_t p = 0; p < g.npoints(); ++p) {
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                chi_phi(j, k) = background.mat()(j, k) + hess.hess(p, j, k);
        if (check_positivity) {
            // Positivity of chi_phi via Cholesky.
            Eigen::LLT<Eigen::MatrixXcd> llt(chi_phi);
            bool positive = (llt.info() == Eigen::Success);
            if (positive) {
                const Eigen::MatrixXcd l = llt.matrixL();
                for (int i = 0; i < n; ++i)
                    if (!(l(i, i).real() > 0.0)) positive = false;
            }
            if (!positive)
                throw DegenerateField("ma_energy: chi_phi is not pointwise positive");
        }
        for (int t = 0; t <= n; ++t) {
            shifted = static_cast<double>(t) * background.mat() + chi_phi;
            dets(t) = shifted.determinant().real();
        }
        rho = vinv * dets;
        double point = 0.0;
        for (int j = 0; j <= n; ++j)
            point += rho(j) / static_cast<double>(binomial(n, j));
        acc += phi[p] * point;
    }
    return acc / static_cast<double>(g.npoints()) / (n + 1.0);
}

} // namespace

double ma_energy(const HermitianMatrix& background, const PotentialField& phi) {
    return ma_energy_impl(background, phi, true);
}

double ma_energy_primitive(const HermitianMatrix& background,
                           const PotentialField& phi) {
    return ma_energy_impl(background, phi, false);
}

double gma_j_energy(const HermitianMatrix& background,
                    const HermitianMatrix& omega, const GmaCoefficients& coeffs,
                    const PotentialField& phi, int quadrature_nodes) {
    const TorusGrid& g = phi.grid();
    const int n = g.n;
    if (coeffs.n() != n)
        throw std::invalid_argument("gma_j_energy: coefficient dimension mismatch");
    const ReducedPath path = reduce_path(background, omega, phi);
    const Quadrature quad = gauss_legendre_unit(quadrature_nodes);

    double energy = 0.0;
    Eigen::MatrixXcd scratch(n, n);
    double lambda[4];
    double ek[4]; // elementary symmetric prefix, n <= 3
    for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
        const double t = quad.nodes[q];
        double acc = 0.0;
        for (std::size_t p = 0; p < g.npoints(); ++p) {
            scratch = path.a0 + t * path.b[p];
            relative_eigenvalues_inplace(scratch, lambda);
            if (!(lambda[0] > 0.0))
                throw_degenerate_at("gma_j_energy: positivity lost", t);
            ek[0] = 1.0;
            for (int k = 1; k <= n; ++k) ek[k] = 0.0;
            for (int i = 0; i < n; ++i)
                for (int k = std::min(i + 1, n); k >= 1; --k)
                    ek[k] += lambda[i] * ek[k - 1];
            double val = coeffs.c0() - ek[n];
            for (int k = 1; k <= n - 1; ++k)
                val += coeffs.c(k) * ek[k] /
                       static_cast<double>(binomial(n, k));
            acc += phi[p] * val;
        }
        energy += quad.weights[q] * acc / static_cast<double>(g.npoints());
    }
    return energy;
}

double dhym_j_energy(const HermitianMatrix& alpha_background,
                     const HermitianMatrix& omega, double theta,
                     const PotentialField& phi, int quadrature_nodes) {
    const TorusGrid& g = phi.grid();
    const int n = g.n;
    const ReducedPath path = reduce_path(alpha_background, omega, phi);
    const Quadrature quad = gauss_legendre_unit(quadrature_nodes);
    const std::complex<double> rotor = std::exp(std::complex<double>(0.0, -theta));

    double energy = 0.0;
    Eigen::MatrixXcd scratch(n, n);
    double lambda[4];
    for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
        const double t = quad.nodes[q];
        double acc = 0.0;
        for (std::size_t p = 0; p < g.npoints(); ++p) {
            scratch = path.a0 + t * path.b[p];
            relative_eigenvalues_inplace(scratch, lambda);
            double phase = 0.0;
            std::complex<double> slope(1.0, 0.0);
            for (int j = 0; j < n; ++j) {
                phase += arccot(lambda[static_cast<std::size_t>(j)]);
                slope *= std::complex<double>(lambda[static_cast<std::size_t>(j)], 1.0);
            }
            if (!(phase < kPi))
                throw_degenerate_at("dhym_j_energy: phase left (0, pi)", t);
            acc += phi[p] * (rotor * slope).imag();
        }
        energy += quad.weights[q] * acc / static_cast<double>(g.npoints());
    }
    return energy;
}

IntersectionReport intersection_numbers(const HermitianMatrix& chi_bg,
                                        const HermitianMatrix& omega_bg,
                                        const GmaCoefficients& coeffs,
                                        bool pencil_reduce) {
    const int n = chi_bg.n();
    if (omega_bg.n() != n || coeffs.n() != n)
        throw std::invalid_argument("intersection_numbers: dimension mismatch");
    if (!pencil_reduce) {
        const Eigen::MatrixXcd comm =
            chi_bg.mat() * omega_bg.mat() - omega_bg.mat() * chi_bg.mat();
        const double scale = std::max(
            1.0, chi_bg.mat().cwiseAbs().maxCoeff() *
                     omega_bg.mat().cwiseAbs().maxCoeff());
        if (comm.cwiseAbs().maxCoeff() >= 1e-12 * scale)
            throw std::domain_error(
                "intersection_numbers: backgrounds do not commute; "
                "request pencil reduction explicitly");
    }
    const Spectrum lambda = relative_eigenvalues(chi_bg, omega_bg);
    const std::vector<double> table = elementary_symmetric_all(
        std::span<const double>(lambda.values()), n);

    IntersectionReport report;
    report.forced_c0 = table[static_cast<std::size_t>(n)];
    for (int k = 1; k <= n - 1; ++k)
        report.forced_c0 -= coeffs.c(k) * table[static_cast<std::size_t>(k)] /
                            static_cast<double>(binomial(n, k));

    report.min_proper_margin = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= n; ++p) {
        const auto values = tp_subset_values(
            std::span<const double>(lambda.values()),
            std::span<const double>(coeffs.lower()), report.forced_c0, p);
        for (const auto& [mask, value] : values) {
            report.entries.push_back(IntersectionEntry{p, mask, value});
            if (p < n)
                report.min_proper_margin =
                    std::min(report.min_proper_margin, value);
        }
    }
    return report;
}

} // namespace gmalab
