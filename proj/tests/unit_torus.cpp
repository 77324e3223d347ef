#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "gmalab/errors.hpp"
#include "gmalab/torus.hpp"

using namespace gmalab;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

TEST_SUITE("torus") {

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(TorusGrid(0, 8), std::domain_error);
    CHECK_THROWS_AS(TorusGrid(4, 8), std::domain_error);
    CHECK_THROWS_AS(TorusGrid(2, 7), std::domain_error);
    CHECK_THROWS_AS(TorusGrid(2, 6), std::domain_error);
    const TorusGrid g(2, 8);
    CHECK(g.axes() == 4);
    CHECK(g.npoints() == 4096);
}

TEST_CASE("make_potential passes fractional coordinates") {
    const TorusGrid g(1, 8);
    const PotentialField f =
        make_potential(g, [](std::span<const double> x) { return x[0]; });
    // First point sits at the origin; all coordinates live in [0, 1).
    CHECK(f[0] == 0.0);
    for (std::size_t p = 0; p < f.size(); ++p) {
        CHECK(f[p] >= 0.0);
        CHECK(f[p] < 1.0);
    }
}

TEST_CASE("complex hessian of a single mode") {
    const TorusGrid g(2, 12);
    const double amp = 0.3;
    const PotentialField phi = make_potential(g, [&](std::span<const double> x) {
        return amp * std::cos(kTwoPi * x[0]);
    });
    const FormField h = i_ddbar(phi);
    // Pointwise Hermitian with zero grid mean.
    const Eigen::MatrixXcd mean = h.hessian_mean();
    CHECK(mean.cwiseAbs().maxCoeff() < 1e-13);
    for (std::size_t p = 0; p < 40; ++p) {
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                CHECK(std::abs(h.hess(p, j, k) - std::conj(h.hess(p, k, j))) <
                      1e-13);
    }
    // The trace against the identity recovers (1/4) * (flat Laplacian):
    // for a unit-frequency mode that is -pi^2 * phi, exactly in band.
    const PotentialField lap = metric_laplacian(phi, HermitianMatrix::identity(2));
    double worst = 0.0;
    for (std::size_t p = 0; p < lap.size(); ++p)
        worst = std::max(worst, std::abs(lap[p] + kPi * kPi * phi[p]));
    CHECK(worst < 1e-12);
}

TEST_CASE("poisson solve inverts the metric laplacian") {
    const TorusGrid g(2, 12);
    const HermitianMatrix omega = HermitianMatrix::real_diagonal({2.0, 1.0});
    const PotentialField phi = make_potential(g, [](std::span<const double> x) {
        return 0.2 * std::cos(kTwoPi * x[0]) + 0.1 * std::sin(kTwoPi * (x[1] + x[2]));
    });
    const PotentialField rhs = metric_laplacian(phi, omega);
    CHECK(std::abs(integrate(rhs)) < 1e-13);
    const PotentialField back = poisson_solve(rhs, omega);
    const double mean = integrate(phi);
    double worst = 0.0;
    for (std::size_t p = 0; p < phi.size(); ++p)
        worst = std::max(worst, std::abs(back[p] - (phi[p] - mean)));
    CHECK(worst < 1e-12);
    // Non-zero-mean right-hand sides are rejected.
    const PotentialField biased = make_potential(
        g, [](std::span<const double>) { return 1.0; });
    CHECK_THROWS_AS(poisson_solve(biased, omega), std::invalid_argument);
}

TEST_CASE("wedge ratios of a constant field") {
    const TorusGrid g(2, 8);
    const FormField field(g, HermitianMatrix::scaled_identity(2, 2.0));
    const HermitianMatrix omega = HermitianMatrix::identity(2);
    const PotentialField k1 = wedge_ratio(field, omega, 1);
    const PotentialField k2 = wedge_ratio(field, omega, 2);
    CHECK(k1[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(k2[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(wedge_ratio(field, omega, 0)[0] == doctest::Approx(1.0));
}

TEST_CASE("top-density mass is conserved under exact corrections") {
    const TorusGrid g(2, 12);
    const HermitianMatrix chi = HermitianMatrix::scaled_identity(2, 2.0);
    const HermitianMatrix omega = HermitianMatrix::identity(2);
    const PotentialField phi = make_potential(g, [](std::span<const double> x) {
        return 0.05 * std::cos(kTwoPi * x[0]) + 0.04 * std::sin(kTwoPi * x[3]);
    });
    const FormField chi_phi = chi_from_potential(chi, phi);
    const double mass = integrate(wedge_ratio(chi_phi, omega, 2));
    CHECK(mass == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("relative spectrum field of commuting constants") {
    const TorusGrid g(2, 8);
    const FormField field(g, HermitianMatrix::real_diagonal({3.0, 1.0}));
    const RelativeSpectrumField spec =
        relative_spectrum_field(field, HermitianMatrix::identity(2));
    REQUIRE(spec.npoints() == g.npoints());
    const auto lam = spec.at(17);
    CHECK(lam[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(lam[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("integration and volume") {
    const TorusGrid g(2, 8);
    const PotentialField mode = make_potential(g, [](std::span<const double> x) {
        return std::cos(kTwoPi * x[0]);
    });
    CHECK(std::abs(integrate(mode)) < 1e-14);
    // integrate(f, density) is the mean of the product.
    CHECK(integrate(mode, mode) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(omega_volume_absolute(g, HermitianMatrix::real_diagonal({2.0, 1.0})) ==
          doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("mollifier basics") {
    const TorusGrid g(2, 12);
    const PotentialField mode = make_potential(g, [](std::span<const double> x) {
        return 1.0 + 0.5 * std::cos(kTwoPi * x[0]);
    });
    const PotentialField smooth = mollify(mode, MollifierSpec{2.0 / 12.0});
    // Mean preserved, oscillation strictly damped.
    CHECK(integrate(smooth) == doctest::Approx(integrate(mode)).epsilon(1e-12));
    double sup_in = 0.0, sup_out = 0.0;
    for (std::size_t p = 0; p < mode.size(); ++p) {
        sup_in = std::max(sup_in, std::abs(mode[p] - 1.0));
        sup_out = std::max(sup_out, std::abs(smooth[p] - 1.0));
    }
    CHECK(sup_out < sup_in);
    CHECK(sup_out > 0.0);
    CHECK_THROWS_AS(mollify(mode, MollifierSpec{0.5 / 12.0}), ResolutionError);
}

TEST_CASE("distances and normalization") {
    const TorusGrid g(1, 8);
    const PotentialField a =
        make_potential(g, [](std::span<const double>) { return 2.0; });
    const PotentialField b =
        make_potential(g, [](std::span<const double>) { return -1.0; });
    CHECK(l1_distance(a, b) == doctest::Approx(3.0).epsilon(1e-14));
    const PotentialField shifted = normalize_sup(a);
    for (std::size_t p = 0; p < shifted.size(); ++p) CHECK(shifted[p] == 0.0);
    const PotentialField mode = make_potential(g, [](std::span<const double> x) {
        return std::sin(kTwoPi * x[0]);
    });
    const PotentialField norm = normalize_sup(mode);
    double sup = -1e300;
    for (std::size_t p = 0; p < norm.size(); ++p) sup = std::max(sup, norm[p]);
    CHECK(sup == doctest::Approx(0.0).epsilon(1e-14));
}

} // TEST_SUITE
