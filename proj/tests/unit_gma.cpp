#include <span>
#include <vector>

#include <doctest.h>

#include "gmalab/errors.hpp"
#include "gmalab/gma.hpp"
#include "support/rational_oracle.hpp"

using namespace gmalab;
using gmalab::testing::Rational;

TEST_SUITE("gma") {

TEST_CASE("coefficient validation") {
    CHECK_THROWS_AS(GmaCoefficients(2, {-1.0}, 1.0), std::domain_error);
    CHECK_THROWS_AS(GmaCoefficients(2, {1.0, 2.0}, 1.0), std::domain_error);
    // Pure top degree needs a positive constant term.
    CHECK_THROWS_AS(GmaCoefficients(2, {0.0}, 0.0), std::domain_error);
    // The floor widens the admissible range downward: c0 >= -c0_floor.
    CHECK_THROWS_AS(GmaCoefficients(2, {1.0}, -1.5, 1.0), std::domain_error);
    CHECK_NOTHROW(GmaCoefficients(2, {1.0}, -0.5, 1.0));
    const GmaCoefficients ok(3, {1.0, 0.5}, 2.0, 0.25);
    CHECK(ok.n() == 3);
    CHECK(ok.c(1) == 1.0);
    CHECK(ok.c(2) == 0.5);
    CHECK(ok.c0() == 2.0);
    CHECK(ok.c0_floor() == 0.25);
    const GmaCoefficients top(2, {0.0}, 3.0);
    CHECK(top.pure_top_degree());
}

TEST_CASE("operator values on the frozen desk spectrum") {
    const GmaCoefficients coeffs(2, {1.0}, 2.0);
    const Spectrum two({2.0, 2.0});
    CHECK(gma_q(two, coeffs) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gma_p(two, coeffs, 1) == doctest::Approx(0.25).epsilon(1e-15));
    const Spectrum three({3.0, 3.0});
    CHECK(gma_p(three, coeffs, 1) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    // P^1 decays along the ray, Q decays too.
    CHECK(gma_q(three, coeffs) < gma_q(two, coeffs));
}

TEST_CASE("pointwise constant-term override changes Q") {
    const GmaCoefficients coeffs(2, {1.0}, 2.0);
    const Spectrum two({2.0, 2.0});
    const double base = gma_q(two, coeffs);
    const double shifted = gma_q(two, coeffs, 3.0);
    CHECK(shifted == doctest::Approx(base + 1.0 / 4.0).epsilon(1e-14));
}

TEST_CASE("cone membership and its boundary") {
    const GmaCoefficients coeffs(2, {1.0}, 2.0);
    const ConeReport inside = gamma_bar_membership(Spectrum({2.0, 2.0}), coeffs);
    CHECK(inside.is_member);
    CHECK(inside.margin == doctest::Approx(0.75).epsilon(1e-14));
    const ConeReport outside =
        gamma_bar_membership(Spectrum({-1.0, 4.0}), coeffs);
    CHECK_FALSE(outside.is_member);
    CHECK(outside.margin < 0.0);
    REQUIRE(outside.witness.has_value());
    CHECK((*outside.witness)[0] == -1.0);
}

TEST_CASE("subset positivity coefficients match the exact template") {
    const std::vector<double> lam{2.0, 3.0, 5.0};
    const std::vector<double> c{1.0, 0.5};
    const GmaCoefficients coeffs(3, c, 2.0);
    const Spectrum s(lam);
    const std::vector<Rational> rl{Rational(2), Rational(3), Rational(5)};
    const std::vector<Rational> rc{Rational(1), Rational(1, 2)};
    for (int p = 1; p <= 2; ++p) {
        const auto doubles = tp_subset_coefficients(s, coeffs, p);
        const auto exact = tp_subset_values<Rational>(
            std::span<const Rational>(rl), std::span<const Rational>(rc),
            Rational(2), p);
        REQUIRE(doubles.size() == exact.size());
        for (std::size_t i = 0; i < doubles.size(); ++i) {
            CHECK(doubles[i].mask == exact[i].first);
            CHECK(doubles[i].value ==
                  doctest::Approx(static_cast<double>(exact[i].second))
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("subset positivity equivalence on spot rational inputs") {
    // tp_positive at level p agrees with P^{n-p} <= 1 pointwise.
    const std::vector<Rational> rc{Rational(1)};
    const GmaCoefficients coeffs(2, {1.0}, 2.0);
    for (const auto& pair :
         {std::pair<double, double>{2.0, 2.0}, {0.5, 4.0}, {0.25, 4.0},
          {8.0, 0.125}, {1.0, 1.0}}) {
        const std::vector<Rational> rl{
            Rational(static_cast<long>(pair.first * 8), 8),
            Rational(static_cast<long>(pair.second * 8), 8)};
        const Spectrum s({pair.first, pair.second});
        const bool via_tp = tp_positive(s, coeffs, 1);
        const bool via_p = gma_p_le_one<Rational>(
            std::span<const Rational>(rl), std::span<const Rational>(rc), 1);
        CHECK(via_tp == via_p);
    }
}

TEST_CASE("mass lower bound at the quadratic reference point") {
    const GmaCoefficients coeffs(2, {1.0}, 2.0);
    CHECK(mass_lower_bound(coeffs) == doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("subset iteration helpers") {
    std::vector<std::uint32_t> masks;
    detail::for_each_subset(4, 2, [&](std::uint32_t m) { masks.push_back(m); });
    REQUIRE(masks.size() == 6);
    CHECK(masks.front() == 0b0011u);
    CHECK(masks.back() == 0b1100u);
    const std::vector<double> vals{10.0, 20.0, 30.0, 40.0};
    const auto rest =
        detail::complement_entries(std::span<const double>(vals), 0b0101u);
    REQUIRE(rest.size() == 2);
    CHECK(rest[0] == 20.0);
    CHECK(rest[1] == 40.0);
}

TEST_CASE("structure probe is clean on admissible coefficients") {
    const GmaCoefficients coeffs(2, {1.0}, 2.0);
    const ConeReport p_report = convexity_monotonicity_probe(
        GmaProbeOperator::p_ell, 1, coeffs, 200, 5);
    CHECK(p_report.is_member);
    CHECK(p_report.margin >= 0.0);
    const ConeReport q_report =
        convexity_monotonicity_probe(GmaProbeOperator::q, 0, coeffs, 200, 5);
    CHECK(q_report.is_member);
    CHECK(q_report.margin >= 0.0);
    // Deterministic in the seed.
    const ConeReport again = convexity_monotonicity_probe(
        GmaProbeOperator::p_ell, 1, coeffs, 200, 5);
    CHECK(again.margin == p_report.margin);
    CHECK_THROWS_AS(convexity_monotonicity_probe(GmaProbeOperator::p_ell, 2,
                                                 coeffs, 10, 0),
                    std::domain_error);
}

TEST_CASE("subsolution margin sign tracks the cone") {
    const GmaCoefficients coeffs(2, {1.0}, 2.0);
    CHECK(c_subsolution_margin(Spectrum({2.0, 2.0}), coeffs) > 0.0);
    CHECK(c_subsolution_margin(Spectrum({0.1, 0.1}), coeffs) < 0.0);
}

} // TEST_SUITE
