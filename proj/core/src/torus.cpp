#include "gmalab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fftw3.h>

namespace gmalab {

namespace {

constexpr double kPi = std::numbers::pi;

using ComplexVec = std::vector<std::complex<double>>;

// Unnormalized c2c transform over all 2n axes; sign is FFTW_FORWARD or
// FFTW_BACKWARD.  Plans are created per call with FFTW_ESTIMATE: planning a
// small rank-<=6 transform is cheap next to the grid work and keeps the
// call re-entrant.
ComplexVec fft(const TorusGrid& g, const ComplexVec& in, int sign) {
    ComplexVec out(in.size());
    std::vector<int> dims(static_cast<std::size_t>(g.axes()), g.N);
    ComplexVec work(in); // FFTW may destroy its input during planning
    fftw_plan plan = fftw_plan_dft(
        g.axes(), dims.data(), reinterpret_cast<fftw_complex*>(work.data()),
        reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
    if (plan == nullptr) throw std::runtime_error("fft: planner failed");
    work = in; // planning may have scribbled on the buffer
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

ComplexVec to_complex(const std::vector<double>& v) {
    ComplexVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

// Signed frequency of one axis sample index (N/2 stays at +N/2, the
// Nyquist representative).
int signed_freq(int idx, int N) { return idx <= N / 2 ? idx : idx - N; }

// Per-mode data for the spectral symbols: signed frequencies a_j, b_j per
// complex axis and a Nyquist flag per real axis.
struct ModeInfo {
    std::array<int, 3> a{};
    std::array<int, 3> b{};
    std::array<bool, 6> nyq{};
};

ModeInfo mode_info(const TorusGrid& g, std::size_t mode) {
    const std::array<int, 6> idx = grid_indices(g, mode);
    ModeInfo m;
    for (int j = 0; j < g.n; ++j) {
        const int ax = idx[static_cast<std::size_t>(2 * j)];
        const int ay = idx[static_cast<std::size_t>(2 * j + 1)];
        m.a[static_cast<std::size_t>(j)] = signed_freq(ax, g.N);
        m.b[static_cast<std::size_t>(j)] = signed_freq(ay, g.N);
        m.nyq[static_cast<std::size_t>(2 * j)] = (ax == g.N / 2);
        m.nyq[static_cast<std::size_t>(2 * j + 1)] = (ay == g.N / 2);
    }
    return m;
}

// d/dz_j symbol pi*(b_j + i a_j).
std::complex<double> dz_symbol(const ModeInfo& m, int j) {
    return std::complex<double>(kPi * m.b[static_cast<std::size_t>(j)],
                                kPi * m.a[static_cast<std::size_t>(j)]);
}

// d/dzbar_k symbol pi*(-b_k + i a_k).
std::complex<double> dzbar_symbol(const ModeInfo& m, int k) {
    return std::complex<double>(-kPi * m.b[static_cast<std::size_t>(k)],
                                kPi * m.a[static_cast<std::size_t>(k)]);
}

bool axis_pair_at_nyquist(const ModeInfo& m, int j) {
    return m.nyq[static_cast<std::size_t>(2 * j)] ||
           m.nyq[static_cast<std::size_t>(2 * j + 1)];
}

// Hessian symbol for entry (j, kbar).  Off-diagonal entries vanish when
// either complex axis carries a Nyquist frequency: the one-sided mode
// representative cannot represent the odd part of the symbol there, and
// keeping it would break pointwise Hermiticity.
std::complex<double> hessian_symbol(const ModeInfo& m, int j, int k) {
    if (j != k && (axis_pair_at_nyquist(m, j) || axis_pair_at_nyquist(m, k)))
        return {0.0, 0.0};
    return dz_symbol(m, j) * dzbar_symbol(m, k);
}

} // namespace

PotentialField::PotentialField(const TorusGrid& grid, std::vector<double> values)
    : grid_(grid), v_(std::move(values)) {
    if (v_.size() != grid_.npoints())
        throw std::invalid_argument("PotentialField: value count does not match grid");
    for (double x : v_)
        if (!std::isfinite(x))
            throw std::invalid_argument("PotentialField: non-finite sample");
}

double PotentialField::mean() const {
    double acc = 0.0;
    for (double x : v_) acc += x;
    return acc / static_cast<double>(v_.size());
}

double PotentialField::max() const {
    return *std::max_element(v_.begin(), v_.end());
}

double PotentialField::min() const {
    return *std::min_element(v_.begin(), v_.end());
}

FormField::FormField(const TorusGrid& grid, HermitianMatrix background)
    : grid_(grid), background_(std::move(background)),
      hess_(grid_.npoints() * static_cast<std::size_t>(grid_.n) *
                static_cast<std::size_t>(grid_.n),
            std::complex<double>(0.0, 0.0)) {
    if (background_.n() != grid_.n)
        throw std::invalid_argument("FormField: background dimension does not match grid");
}

Eigen::MatrixXcd FormField::point_value(std::size_t point) const {
    Eigen::MatrixXcd out(grid_.n, grid_.n);
    point_value_into(point, out);
    return out;
}

void FormField::point_value_into(std::size_t point, Eigen::MatrixXcd& out) const {
    out.resize(grid_.n, grid_.n);
    for (int j = 0; j < grid_.n; ++j)
        for (int k = 0; k < grid_.n; ++k)
            out(j, k) = background_.mat()(j, k) + hess_[offset(point, j, k)];
}

Eigen::MatrixXcd FormField::hessian_mean() const {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(grid_.n, grid_.n);
    for (std::size_t p = 0; p < grid_.npoints(); ++p)
        for (int j = 0; j < grid_.n; ++j)
            for (int k = 0; k < grid_.n; ++k)
                acc(j, k) += hess_[offset(p, j, k)];
    return acc / static_cast<double>(grid_.npoints());
}

FormField i_ddbar(const PotentialField& phi) {
    const TorusGrid& g = phi.grid();
    const std::size_t npts = g.npoints();
    const ComplexVec hat = fft(g, to_complex(phi.values()), FFTW_FORWARD);
    const double norm = 1.0 / static_cast<double>(npts);

    FormField out(g, HermitianMatrix::scaled_identity(g.n, 0.0));
    ComplexVec spec(npts), entry;
    for (int j = 0; j < g.n; ++j) {
        for (int k = j; k < g.n; ++k) {
            for (std::size_t m = 0; m < npts; ++m)
                spec[m] = hessian_symbol(mode_info(g, m), j, k) * hat[m] * norm;
            entry = fft(g, spec, FFTW_BACKWARD);
            if (j == k) {
                for (std::size_t p = 0; p < npts; ++p)
                    out.set_hess(p, j, j, entry[p].real());
            } else {
                for (std::size_t p = 0; p < npts; ++p) {
                    out.set_hess(p, j, k, entry[p]);
                    out.set_hess(p, k, j, std::conj(entry[p]));
                }
            }
        }
    }
    return out;
}

FormField chi_from_potential(const HermitianMatrix& background,
                             const PotentialField& phi) {
    FormField out = i_ddbar(phi);
    if (background.n() != phi.grid().n)
        throw std::invalid_argument(
            "chi_from_potential: background dimension does not match grid");
    FormField shifted(phi.grid(), background);
    for (std::size_t p = 0; p < phi.grid().npoints(); ++p)
        for (int j = 0; j < phi.grid().n; ++j)
            for (int k = 0; k < phi.grid().n; ++k)
                shifted.set_hess(p, j, k, out.hess(p, j, k));
    return shifted;
}

RelativeSpectrumField relative_spectrum_field(const FormField& field,
                                              const HermitianMatrix& omega) {
    const TorusGrid& g = field.grid();
    if (omega.n() != g.n)
        throw std::invalid_argument(
            "relative_spectrum_field: omega dimension does not match grid");
    const Eigen::MatrixXcd linv = pencil_reduction_factor(omega);
    RelativeSpectrumField out;
    out.n = g.n;
    out.data.resize(g.npoints() * static_cast<std::size_t>(g.n));
    Eigen::MatrixXcd a(g.n, g.n), scratch(g.n, g.n);
    for (std::size_t p = 0; p < g.npoints(); ++p) {
        field.point_value_into(p, a);
        scratch = linv * a * linv.adjoint();
        relative_eigenvalues_inplace(scratch,
                                     out.data.data() +
                                         p * static_cast<std::size_t>(g.n));
    }
    return out;
}

PotentialField wedge_ratio(const FormField& field, const HermitianMatrix& omega,
                           int k) {
    const TorusGrid& g = field.grid();
    if (k < 0 || k > g.n) throw std::domain_error("wedge_ratio: k out of [0, n]");
    const RelativeSpectrumField rsf = relative_spectrum_field(field, omega);
    PotentialField out(g);
    const double scale = 1.0 / static_cast<double>(binomial(g.n, k));
    for (std::size_t p = 0; p < g.npoints(); ++p)
        out[p] = elementary_symmetric(rsf.at(p), k) * scale;
    return out;
}

double integrate(const PotentialField& f) { return f.mean(); }

double integrate(const PotentialField& f, const PotentialField& density) {
    if (!(f.grid() == density.grid()))
        throw std::invalid_argument("integrate: grid mismatch");
    double acc = 0.0;
    for (std::size_t p = 0; p < f.size(); ++p) acc += f[p] * density[p];
    return acc / static_cast<double>(f.size());
}

double omega_volume_absolute(const TorusGrid& grid, const HermitianMatrix& omega) {
    if (omega.n() != grid.n)
        throw std::invalid_argument(
            "omega_volume_absolute: omega dimension does not match grid");
    const double det = omega.mat().determinant().real();
    return static_cast<double>(factorial(grid.n)) *
           std::pow(2.0, grid.n) * det;
}

PotentialField mollify(const PotentialField& phi, const MollifierSpec& spec) {
    const TorusGrid& g = phi.grid();
    const double h = 1.0 / g.N;
    if (!(spec.delta >= h))
        throw ResolutionError("mollify: radius below the grid spacing");

    // Discrete bump kernel exp(-1/(1-r^2)) on the scaled periodic distance,
    // normalized to unit total weight.
    std::vector<double> kernel(g.npoints(), 0.0);
    double total = 0.0;
    for (std::size_t p = 0; p < g.npoints(); ++p) {
        const std::array<int, 6> idx = grid_indices(g, p);
        double r2 = 0.0;
        for (int t = 0; t < g.axes(); ++t) {
            double d = static_cast<double>(idx[static_cast<std::size_t>(t)]) / g.N;
            if (d > 0.5) d -= 1.0; // periodic minimum image
            const double u = d / spec.delta;
            r2 += u * u;
        }
        if (r2 < 1.0) {
            kernel[p] = std::exp(-1.0 / (1.0 - r2));
            total += kernel[p];
        }
    }
    for (double& w : kernel) w /= total;

    const std::size_t npts = g.npoints();
    const ComplexVec khat = fft(g, to_complex(kernel), FFTW_FORWARD);
    const ComplexVec phat = fft(g, to_complex(phi.values()), FFTW_FORWARD);
    ComplexVec prod(npts);
    const double norm = 1.0 / static_cast<double>(npts);
    for (std::size_t m = 0; m < npts; ++m) prod[m] = khat[m] * phat[m] * norm;
    const ComplexVec conv = fft(g, prod, FFTW_BACKWARD);
    std::vector<double> out(npts);
    for (std::size_t p = 0; p < npts; ++p) out[p] = conv[p].real();
    return PotentialField(g, std::move(out));
}

double l1_distance(const PotentialField& phi1, const PotentialField& phi2) {
    if (!(phi1.grid() == phi2.grid()))
        throw std::invalid_argument("l1_distance: grid mismatch");
    double acc = 0.0;
    for (std::size_t p = 0; p < phi1.size(); ++p)
        acc += std::abs(phi1[p] - phi2[p]);
    return acc / static_cast<double>(phi1.size());
}

PotentialField normalize_sup(const PotentialField& phi) {
    const double top = phi.max();
    PotentialField out = phi;
    for (std::size_t p = 0; p < out.size(); ++p) out[p] -= top;
    return out;
}

std::vector<std::vector<std::complex<double>>> z_gradient(const PotentialField& phi) {
    const TorusGrid& g = phi.grid();
    const std::size_t npts = g.npoints();
    const ComplexVec hat = fft(g, to_complex(phi.values()), FFTW_FORWARD);
    const double norm = 1.0 / static_cast<double>(npts);
    std::vector<std::vector<std::complex<double>>> out;
    out.reserve(static_cast<std::size_t>(g.n));
    ComplexVec spec(npts);
    for (int j = 0; j < g.n; ++j) {
        for (std::size_t m = 0; m < npts; ++m) {
            const ModeInfo info = mode_info(g, m);
            spec[m] = axis_pair_at_nyquist(info, j)
                          ? std::complex<double>(0.0, 0.0)
                          : dz_symbol(info, j) * hat[m] * norm;
        }
        out.push_back(fft(g, spec, FFTW_BACKWARD));
    }
    return out;
}

namespace {

// Mode symbol of trace(omega^{-1} . i_ddbar(.)): -v^H W^{-1} v for the
// dz-symbol vector v, with the same Nyquist drops as the Hessian entries.
// Real and <= 0; zero exactly on DC and Nyquist-only modes.
std::vector<double> laplacian_symbol(const TorusGrid& g,
                                     const HermitianMatrix& omega) {
    const Eigen::MatrixXcd winv =
        omega.mat().llt().solve(Eigen::MatrixXcd::Identity(g.n, g.n));
    std::vector<double> s(g.npoints(), 0.0);
    for (std::size_t m = 0; m < g.npoints(); ++m) {
        const ModeInfo info = mode_info(g, m);
        std::complex<double> acc(0.0, 0.0);
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k)
                acc += winv(k, j) * hessian_symbol(info, j, k);
        s[m] = acc.real();
    }
    return s;
}

} // namespace

PotentialField metric_laplacian(const PotentialField& phi,
                                const HermitianMatrix& omega) {
    const TorusGrid& g = phi.grid();
    if (omega.n() != g.n)
        throw std::invalid_argument("metric_laplacian: omega dimension mismatch");
    const std::vector<double> sym = laplacian_symbol(g, omega);
    const std::size_t npts = g.npoints();
    const ComplexVec hat = fft(g, to_complex(phi.values()), FFTW_FORWARD);
    ComplexVec spec(npts);
    const double norm = 1.0 / static_cast<double>(npts);
    for (std::size_t m = 0; m < npts; ++m) spec[m] = sym[m] * hat[m] * norm;
    const ComplexVec field = fft(g, spec, FFTW_BACKWARD);
    std::vector<double> out(npts);
    for (std::size_t p = 0; p < npts; ++p) out[p] = field[p].real();
    return PotentialField(g, std::move(out));
}

PotentialField poisson_solve(const PotentialField& rhs,
                             const HermitianMatrix& omega) {
    const TorusGrid& g = rhs.grid();
    if (omega.n() != g.n)
        throw std::invalid_argument("poisson_solve: omega dimension mismatch");
    const double scale =
        std::max({1.0, std::abs(rhs.max()), std::abs(rhs.min())});
    if (std::abs(rhs.mean()) > 1e-10 * scale)
        throw std::invalid_argument("poisson_solve: right-hand side must have zero mean");
    const std::vector<double> sym = laplacian_symbol(g, omega);
    const std::size_t npts = g.npoints();
    const ComplexVec hat = fft(g, to_complex(rhs.values()), FFTW_FORWARD);
    ComplexVec spec(npts);
    const double norm = 1.0 / static_cast<double>(npts);
    for (std::size_t m = 0; m < npts; ++m)
        spec[m] = (sym[m] != 0.0) ? hat[m] * norm / sym[m]
                                  : std::complex<double>(0.0, 0.0);
    const ComplexVec field = fft(g, spec, FFTW_BACKWARD);
    std::vector<double> out(npts);
    for (std::size_t p = 0; p < npts; ++p) out[p] = field[p].real();
    return PotentialField(g, std::move(out));
}

} // namespace gmalab
