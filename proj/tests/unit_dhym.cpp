#include <cmath>
#include <numbers>

#include <doctest.h>

#include "gmalab/dhym.hpp"
#include "gmalab/errors.hpp"
#include "gmalab/rng.hpp"

using namespace gmalab;
constexpr double kPi = std::numbers::pi;

TEST_SUITE("dhym") {

TEST_CASE("arccot reference values") {
    CHECK(arccot(1.0) == doctest::Approx(kPi / 4.0).epsilon(1e-15));
    CHECK(arccot(0.0) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(arccot(-1.0) == doctest::Approx(3.0 * kPi / 4.0).epsilon(1e-15));
    // Continuous and decreasing across the 0 split.
    CHECK(arccot(1e-12) < arccot(0.0));
    CHECK(arccot(-1e-12) > arccot(0.0));
    CHECK(arccot(1e-12) == doctest::Approx(arccot(-1e-12)).epsilon(1e-10));
}

TEST_CASE("lagrangian phase and slope on the diagonal point") {
    const Spectrum s({1.0, 1.0});
    CHECK(lagrangian_phase(s) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    const ComplexSlope slope = complex_slope(s);
    // (1 + i)^2 = 2i.
    CHECK(slope.re == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(slope.im == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("phase-slope compatibility at a generic point") {
    const Spectrum s({0.5, -2.0, 3.0});
    const double theta = lagrangian_phase(s);
    const ComplexSlope slope = complex_slope(s);
    // theta is the argument of Prod(lambda_j + i) lifted by arccot branches.
    CHECK(std::cos(theta) * slope.im == doctest::Approx(std::sin(theta) * slope.re)
                                            .epsilon(1e-12));
}

TEST_CASE("truncated phases keep the largest arccot contributions") {
    const Spectrum s({1.0, 2.0, 3.0});
    // Level 1 keeps the two smallest eigenvalues, level 2 the smallest one.
    CHECK(truncated_phase(s, 1) ==
          doctest::Approx(arccot(1.0) + arccot(2.0)).epsilon(1e-15));
    CHECK(truncated_phase(s, 2) == doctest::Approx(kPi / 4.0).epsilon(1e-15));
    CHECK_THROWS_AS(truncated_phase(s, 0), std::domain_error);
    CHECK_THROWS_AS(truncated_phase(s, 3), std::domain_error);
}

TEST_CASE("cotangent operator values") {
    const Spectrum s({1.0, 1.0});
    CHECK(dhym_p(s, 1) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(dhym_q(s, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    // The constant term divides by Im Prod = 2 here.
    CHECK(dhym_q(s, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("phase singularity guard") {
    // A single hugely negative eigenvalue pushes the phase onto pi.
    CHECK_THROWS_AS(dhym_q(Spectrum({-1e15}), 0.0), PhaseSingularity);
}

TEST_CASE("phase window validation") {
    CHECK_THROWS_AS(DhymPhaseSpec(0.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(DhymPhaseSpec(1.0, kPi), std::domain_error);
    CHECK_THROWS_AS(DhymPhaseSpec(2.0, 1.0), std::domain_error);
    const DhymPhaseSpec ok(0.8, 2.5);
    CHECK(ok.theta == 0.8);
    CHECK(ok.Theta == 2.5);
}

TEST_CASE("window membership margins") {
    const DhymPhaseSpec spec(0.8, 2.5);
    const Spectrum inside({1.0, 1.0}); // total pi/2, truncation pi/4
    const ConeReport r = gamma_theta_membership(inside, spec, true);
    CHECK(r.is_member);
    // margin = min(theta - trunc, Theta - total, trunc, total).
    CHECK(r.margin == doctest::Approx(0.8 - kPi / 4.0).epsilon(1e-12));
    const Spectrum outside({-3.0, -3.0}); // phases too large
    const ConeReport bad = gamma_theta_membership(outside, spec, true);
    CHECK_FALSE(bad.is_member);
    CHECK(bad.margin < 0.0);
    CHECK(bad.witness.has_value());
}

TEST_CASE("window samples are members") {
    const DhymPhaseSpec spec(0.9, 2.8);
    RandomStream rng = RandomStream::for_sample(77, 0);
    for (int i = 0; i < 200; ++i) {
        const Spectrum s = sample_gamma_theta(spec, 3, rng);
        const ConeReport r = gamma_theta_membership(s, spec, false);
        CHECK(r.is_member);
    }
}

TEST_CASE("imaginary-part lower bound probe is positive on a valid window") {
    const DhymPhaseSpec spec(1.0, 2.0);
    CHECK(im_lower_bound_probe(spec, 2, 500, 11) > 0.0);
}

} // TEST_SUITE
