#include <algorithm>
#include <stdexcept>

#include <doctest.h>

#include "gmalab/props.hpp"

using namespace gmalab;

TEST_SUITE("props") {

TEST_CASE("registry lists the expected suites") {
    const auto names = property_suite_names();
    CHECK(names.size() == 15);
    CHECK(std::is_sorted(names.begin(), names.end()));
    for (const char* expected :
         {"gma-monotonicity", "gma-convexity", "gma-sublevel",
          "p-level-nesting", "tp-equivalence", "dhym-monotonicity",
          "dhym-convexity", "dhym-closure", "ky-fan", "phase-slope",
          "newton-maclaurin", "mass-bound", "mollifier-stability",
          "energy-derivatives", "fixture-negative-c1"}) {
        CHECK(has_property_suite(expected));
    }
    CHECK_FALSE(has_property_suite("no-such-suite"));
    CHECK_THROWS_AS(run_property_suite("no-such-suite", 10, 0),
                    std::out_of_range);
    CHECK_THROWS_AS(run_property_suite("ky-fan", 0, 0), std::domain_error);
}

TEST_CASE("reports are deterministic in the seed") {
    const PropertyReport a = run_property_suite("ky-fan", 300, 9);
    const PropertyReport b = run_property_suite("ky-fan", 300, 9);
    CHECK(a.samples == b.samples);
    CHECK(a.violations == b.violations);
    CHECK(a.worst_margin == b.worst_margin);
    // A different sample count reaches different states.
    const PropertyReport c = run_property_suite("ky-fan", 150, 9);
    CHECK(c.samples == 150);
}

TEST_CASE("clean suites hold on quick samples") {
    for (const char* suite :
         {"gma-monotonicity", "gma-convexity", "gma-sublevel",
          "p-level-nesting", "tp-equivalence", "dhym-monotonicity",
          "dhym-convexity", "dhym-closure", "ky-fan", "phase-slope",
          "newton-maclaurin", "mass-bound"}) {
        const PropertyReport r = run_property_suite(suite, 400, 2024);
        INFO("suite: ", suite);
        CHECK(r.violations == 0);
        CHECK(r.witness.empty());
        CHECK(r.samples == 400);
    }
}

TEST_CASE("the deliberate violation fixture reports its witness") {
    const PropertyReport r = run_property_suite("fixture-negative-c1", 50, 0);
    CHECK(r.violations == 1);
    CHECK(r.worst_margin < 0.0);
    CHECK_FALSE(r.witness.empty());
    CHECK(r.witness.find("c1=-1") != std::string::npos);
}

} // TEST_SUITE
