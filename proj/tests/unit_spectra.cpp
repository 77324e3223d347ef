#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <doctest.h>

#include "gmalab/errors.hpp"
#include "gmalab/spectra.hpp"
#include "support/rational_oracle.hpp"

using namespace gmalab;
using gmalab::testing::Rational;
using gmalab::testing::oracle_elementary_all;

TEST_SUITE("spectra") {

TEST_CASE("elementary symmetric values on a frozen spectrum") {
    const std::vector<double> lam{1.0, 2.0, 3.0};
    const auto e = elementary_symmetric_all(std::span<const double>(lam), 3);
    REQUIRE(e.size() == 4);
    CHECK(e[0] == 1.0);
    CHECK(e[1] == 6.0);
    CHECK(e[2] == 11.0);
    CHECK(e[3] == 6.0);
    CHECK(elementary_symmetric(Spectrum(lam), 2) == 11.0);
    CHECK(elementary_symmetric(std::span<const double>(lam), -1) == 0.0);
    CHECK_THROWS_AS(elementary_symmetric_all(std::span<const double>(lam), 4),
                    std::domain_error);
}

TEST_CASE("recurrence agrees with subset enumeration in exact arithmetic") {
    const std::vector<Rational> lam{Rational(3, 2), Rational(-7, 4),
                                    Rational(5), Rational(0), Rational(9, 8)};
    const auto fast =
        elementary_symmetric_all(std::span<const Rational>(lam), 5);
    const auto slow = oracle_elementary_all(lam, 5);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t k = 0; k < fast.size(); ++k) CHECK(fast[k] == slow[k]);
}

TEST_CASE("restricted symmetric zeroes the excluded entries") {
    const std::vector<double> lam{1.0, 2.0, 3.0};
    const std::vector<int> drop0{0};
    // S_1 with entry 0 zeroed: 0 + 2 + 3.
    CHECK(restricted_symmetric(std::span<const double>(lam), 1,
                               std::span<const int>(drop0)) == 5.0);
    // S_3 vanishes once any entry is zeroed.
    CHECK(restricted_symmetric(std::span<const double>(lam), 3,
                               std::span<const int>(drop0)) == 0.0);
    const std::vector<int> repeated{1, 1};
    CHECK(restricted_symmetric(std::span<const double>(lam), 1,
                               std::span<const int>(repeated)) == 0.0);
    const std::vector<int> out_of_range{3};
    CHECK_THROWS_AS(restricted_symmetric(std::span<const double>(lam), 1,
                                         std::span<const int>(out_of_range)),
                    std::domain_error);
}

TEST_CASE("spectrum validation") {
    CHECK_THROWS_AS(Spectrum(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(Spectrum({1.0, std::nan("")}), std::invalid_argument);
    const Spectrum s({3.0, 1.0});
    CHECK(s.n() == 2);
    CHECK(s.min() == 1.0);
}

TEST_CASE("hermitian ingestion rejects non-hermitian input") {
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, std::complex<double>(0.0, 1.0), std::complex<double>(0.0, 1.0),
        2.0;
    // m(1,0) should be -i for Hermiticity; defect is 2.
    CHECK_THROWS_AS(HermitianMatrix::from_matrix(m), std::invalid_argument);
    m(1, 0) = std::complex<double>(0.0, -1.0);
    const HermitianMatrix h = HermitianMatrix::from_matrix(m);
    CHECK(h.n() == 2);
}

TEST_CASE("relative eigenvalues of commuting diagonal backgrounds") {
    const HermitianMatrix a = HermitianMatrix::real_diagonal({3.0, 2.0});
    const HermitianMatrix omega = HermitianMatrix::scaled_identity(2, 2.0);
    const Spectrum s = relative_eigenvalues(a, omega);
    CHECK(s.values()[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.values()[1] == doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("relative eigenvalues solve the pencil, not the raw matrix") {
    // a = [[2, 1], [1, 2]], omega = [[2, 0], [0, 1]]: the pencil eigenvalues
    // solve det(a - t omega) = 0, i.e. 2t^2 - 6t + 3 = 0.
    Eigen::MatrixXcd am(2, 2);
    am << 2.0, 1.0, 1.0, 2.0;
    const HermitianMatrix a = HermitianMatrix::from_matrix(am);
    const HermitianMatrix omega = HermitianMatrix::real_diagonal({2.0, 1.0});
    const Spectrum s = relative_eigenvalues(a, omega);
    const double disc = std::sqrt(36.0 - 24.0);
    CHECK(s.values()[0] == doctest::Approx((6.0 - disc) / 4.0).epsilon(1e-12));
    CHECK(s.values()[1] == doctest::Approx((6.0 + disc) / 4.0).epsilon(1e-12));
    // Congruence invariant: products and traces against omega match.
    CHECK(s.values()[0] * s.values()[1] == doctest::Approx(3.0 / 2.0).epsilon(1e-12));
}

TEST_CASE("pencil reduction rejects indefinite metrics") {
    const HermitianMatrix omega = HermitianMatrix::real_diagonal({1.0, -1.0});
    const HermitianMatrix a = HermitianMatrix::identity(2);
    CHECK_THROWS_AS(relative_eigenvalues(a, omega), PencilError);
}

TEST_CASE("majorization on frozen pairs") {
    CHECK(majorizes(Spectrum({2.0, 0.0}), Spectrum({1.0, 1.0})));
    CHECK_FALSE(majorizes(Spectrum({1.0, 1.0}), Spectrum({2.0, 0.0})));
    // Totals must agree.
    CHECK_FALSE(majorizes(Spectrum({3.0, 0.0}), Spectrum({1.0, 1.0})));
    CHECK(majorizes(Spectrum({1.0, 1.0}), Spectrum({1.0, 1.0})));
}

TEST_CASE("newton-maclaurin margins") {
    // Equal spectra sit exactly on the degenerate locus: margins vanish.
    const auto flat = newton_maclaurin_margin(Spectrum({2.0, 2.0, 2.0}));
    REQUIRE(flat.size() == 2);
    CHECK(flat[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(flat[1] == doctest::Approx(0.0).epsilon(1e-14));
    // n = 2: m_1 = (1+2)/2 - sqrt(2).
    const auto m = newton_maclaurin_margin(Spectrum({1.0, 2.0}));
    REQUIRE(m.size() == 1);
    CHECK(m[0] == doctest::Approx(1.5 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(newton_maclaurin_margin(Spectrum({1.0, 0.0})),
                    std::domain_error);
}

} // TEST_SUITE
