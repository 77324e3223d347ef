#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "gmalab/errors.hpp"
#include "gmalab/spectra.hpp"

// Discretized scalar potentials and (1,1)-form fields on the flat torus
// (C/Z+iZ)^n with the unit square lattice in every complex direction.  Real
// coordinates are ordered (x_1, y_1, ..., x_n, y_n), each sampled at N
// points with period 1, and flattened row-major with x_1 slowest.
//
// Derivatives are spectral: on the Fourier mode exp(2*pi*i*(a.x + b.y)),
//   d/dz_j   = (d/dx_j - i d/dy_j)/2  ->  pi*(b_j + i a_j)
//   d/dzbar_k= (d/dx_k + i d/dy_k)/2  ->  pi*(-b_k + i a_k).
// All reported integrals are ratios against the omega-volume of the torus
// (grid means); omega_volume_absolute recovers the absolute normalization.

namespace gmalab {

struct TorusGrid {
    int n = 1; // complex dimension
    int N = 8; // sample points per real axis

    TorusGrid(int n_, int N_) : n(n_), N(N_) {
        if (n < 1 || n > 3)
            throw std::domain_error("TorusGrid: complex dimension must be 1, 2, or 3");
        if (N < 8 || N % 2 != 0)
            throw std::domain_error("TorusGrid: N must be even and >= 8");
    }

    int axes() const { return 2 * n; }
    std::size_t npoints() const {
        std::size_t p = 1;
        for (int t = 0; t < axes(); ++t) p *= static_cast<std::size_t>(N);
        return p;
    }
    bool operator==(const TorusGrid&) const = default;
};

// Decodes the row-major point index into per-axis sample indices
// (x_1, y_1, ..., x_n, y_n ordering, x_1 slowest).
inline std::array<int, 6> grid_indices(const TorusGrid& g, std::size_t point) {
    std::array<int, 6> idx{};
    for (int t = g.axes() - 1; t >= 0; --t) {
        idx[static_cast<std::size_t>(t)] = static_cast<int>(point % static_cast<std::size_t>(g.N));
        point /= static_cast<std::size_t>(g.N);
    }
    return idx;
}

// Real scalar sample per grid point.
class PotentialField {
  public:
    explicit PotentialField(const TorusGrid& grid, double fill = 0.0)
        : grid_(grid), v_(grid.npoints(), fill) {}
    PotentialField(const TorusGrid& grid, std::vector<double> values);

    const TorusGrid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    double mean() const;
    double max() const;
    double min() const;

  private:
    TorusGrid grid_;
    std::vector<double> v_;
};

// Builds a potential by evaluating fn at the real coordinates of every grid
// point; fn receives a span of 2n coordinates in [0, 1).
template <class Fn>
PotentialField make_potential(const TorusGrid& g, Fn&& fn) {
    PotentialField out(g);
    std::array<double, 6> coords{};
    for (std::size_t p = 0; p < out.size(); ++p) {
        const std::array<int, 6> idx = grid_indices(g, p);
        for (int t = 0; t < g.axes(); ++t)
            coords[static_cast<std::size_t>(t)] =
                static_cast<double>(idx[static_cast<std::size_t>(t)]) / g.N;
        out[p] = fn(std::span<const double>(coords.data(),
                                            static_cast<std::size_t>(g.axes())));
    }
    return out;
}

// Constant background class representative plus a pointwise Hermitian
// correction (the i*d*dbar part, which has zero grid-mean in every entry
// when produced by i_ddbar).
class FormField {
  public:
    FormField(const TorusGrid& grid, HermitianMatrix background);

    const TorusGrid& grid() const { return grid_; }
    const HermitianMatrix& background() const { return background_; }

    std::complex<double> hess(std::size_t point, int j, int k) const {
        return hess_[offset(point, j, k)];
    }
    void set_hess(std::size_t point, int j, int k, std::complex<double> value) {
        hess_[offset(point, j, k)] = value;
    }

    // background + hessian at one point, as a dense matrix.
    Eigen::MatrixXcd point_value(std::size_t point) const;
    // Writes background + hessian into `out` without allocating.
    void point_value_into(std::size_t point, Eigen::MatrixXcd& out) const;

    // Grid mean of the hessian part (zero for exact corrections).
    Eigen::MatrixXcd hessian_mean() const;

  private:
    std::size_t offset(std::size_t point, int j, int k) const {
        const auto n = static_cast<std::size_t>(grid_.n);
        return (point * n + static_cast<std::size_t>(j)) * n +
               static_cast<std::size_t>(k);
    }

    TorusGrid grid_;
    HermitianMatrix background_;
    std::vector<std::complex<double>> hess_;
};

// Ascending relative eigenvalues of a form field against a fixed metric,
// n values per grid point.
struct RelativeSpectrumField {
    int n = 0;
    std::vector<double> data;

    std::size_t npoints() const {
        return n == 0 ? 0 : data.size() / static_cast<std::size_t>(n);
    }
    std::span<const double> at(std::size_t point) const {
        return std::span<const double>(
            data.data() + point * static_cast<std::size_t>(n),
            static_cast<std::size_t>(n));
    }
};

// Smooth bump mollifier of radius delta in the 2n real coordinates; the
// discrete kernel weights are nonnegative and normalized to unit sum.
struct MollifierSpec {
    double delta = 0.0;
};

// Complex Hessian of phi: entry (j, kbar) is the spectral second derivative
// d^2 phi / dz_j dzbar_k.  The result is pointwise Hermitian, each entry has
// zero grid mean, and the background of the returned field is zero.
// Off-diagonal symbols are dropped at Nyquist frequencies so that
// Hermiticity survives the one-sided mode representation.
FormField i_ddbar(const PotentialField& phi);

// background + i_ddbar(phi).
FormField chi_from_potential(const HermitianMatrix& background,
                             const PotentialField& phi);

// Relative eigenvalues of field(x) against omega at every grid point.
// Throws PencilError when omega is not positive definite.
RelativeSpectrumField relative_spectrum_field(const FormField& field,
                                              const HermitianMatrix& omega);

// S_k(lambda(x)) / binom(n,k), the pointwise ratio of field^k wedge
// omega^{n-k} to omega^n; k = n gives the top-density ratio S_n and k = 0
// the constant 1.
PotentialField wedge_ratio(const FormField& field, const HermitianMatrix& omega,
                           int k);

// Grid means: integrate(f) = mean of f, integrate(f, density) = mean of
// f*density.  Both are the corresponding omega-volume ratios; multiply by
// omega_volume_absolute for absolute values.  Mismatched grids throw
// std::invalid_argument.
double integrate(const PotentialField& f);
double integrate(const PotentialField& f, const PotentialField& density);

// Absolute omega-volume of the torus, n! * 2^n * det(omega).
double omega_volume_absolute(const TorusGrid& grid, const HermitianMatrix& omega);

// Periodic convolution with the normalized bump kernel.  Preserves the grid
// mean. Throws ResolutionError when delta is below the grid spacing 1/N.
PotentialField mollify(const PotentialField& phi, const MollifierSpec& spec);

// Mean of |phi1 - phi2| (the volume-ratio L^1 distance).
double l1_distance(const PotentialField& phi1, const PotentialField& phi2);

// phi - max(phi): the sup-normalized representative with max exactly 0.
PotentialField normalize_sup(const PotentialField& phi);

// Spectral holomorphic gradient: component j is the complex field
// d phi / dz_j.  Odd symbols are dropped at Nyquist frequencies.
std::vector<std::vector<std::complex<double>>> z_gradient(const PotentialField& phi);

// trace(omega^{-1} . i_ddbar(phi)): the metric Laplacian (up to the
// lattice normalization fixed by the spectral symbols above).
PotentialField metric_laplacian(const PotentialField& phi,
                                const HermitianMatrix& omega);

// Solves trace(omega^{-1} . i_ddbar(u)) = rhs for the mean-zero potential u
// by symbol division.  The right-hand side must have zero mean (tolerance
// 1e-10 relative to its sup); Nyquist-only content is annihilated.
PotentialField poisson_solve(const PotentialField& rhs,
                             const HermitianMatrix& omega);

} // namespace gmalab
