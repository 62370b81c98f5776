#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "qkdsim/polarization.hpp"

using namespace qkdsim;
using std::numbers::pi;

TEST_CASE("angles fold into [0, pi)") {
    CHECK(normalize_polarization_angle(0.0) == doctest::Approx(0.0));
    CHECK(normalize_polarization_angle(pi) == doctest::Approx(0.0));
    CHECK(normalize_polarization_angle(-pi / 4) == doctest::Approx(3 * pi / 4));
    CHECK(normalize_polarization_angle(3 * pi / 2) == doctest::Approx(pi / 2));
    CHECK(normalize_polarization_angle(10 * pi + 0.3) == doctest::Approx(0.3));
}

TEST_CASE("make_linear_state validates the amplitude") {
    CHECK_THROWS_AS(make_linear_state(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_linear_state(0.0, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_linear_state(0.0, 1.0001), std::invalid_argument);
    auto s = make_linear_state(-pi / 4, 0.5);
    CHECK(s.angle == doctest::Approx(3 * pi / 4));
    CHECK(s.relative_amplitude == doctest::Approx(0.5));
}

TEST_CASE("projection follows the cosine-squared law") {
    auto h = make_linear_state(0.0);
    CHECK(projection_probability(h, 0.0) == doctest::Approx(1.0));
    CHECK(projection_probability(h, pi / 2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(projection_probability(h, pi / 4) == doctest::Approx(0.5));
    CHECK(projection_probability(h, pi / 3) == doctest::Approx(0.25));

    auto dim = make_linear_state(0.0, 0.8);
    CHECK(projection_probability(dim, 0.0) == doctest::Approx(0.64));
    CHECK(projection_probability(dim, pi / 4) == doctest::Approx(0.32));
}

TEST_CASE("default signal pair sits 45 degrees apart") {
    auto pair = StatePair::b92_default();
    CHECK(pair.state0.angle == doctest::Approx(0.0));
    CHECK(pair.state1.angle == doctest::Approx(pi / 4));
    CHECK(pair.state0.relative_amplitude == doctest::Approx(1.0));
    CHECK(pair.state1.relative_amplitude == doctest::Approx(1.0));
    CHECK(pair.relative_angle() == doctest::Approx(pi / 4));
}

TEST_CASE("relative angle folds into the first quadrant") {
    StatePair pair;
    pair.state0 = make_linear_state(0.1);
    pair.state1 = make_linear_state(0.1 + 3 * pi / 4);
    CHECK(pair.relative_angle() == doctest::Approx(pi / 4));
}

TEST_CASE("polarization dependent loss rotates toward the axis") {
    auto diag = make_linear_state(pi / 4);

    SUBCASE("zero loss is the identity") {
        auto out = apply_pdl(diag, 0.0, 0.0);
        CHECK(out.angle == doctest::Approx(pi / 4));
        CHECK(out.relative_amplitude == doctest::Approx(1.0));
    }

    SUBCASE("1.1 dB on the horizontal axis") {
        auto out = apply_pdl(diag, 1.1, 0.0);
        CHECK(out.angle == doctest::Approx(0.7222456576537818));
        double t = out.relative_amplitude * out.relative_amplitude;
        CHECK(t == doctest::Approx(0.8881235583143459));
    }

    SUBCASE("a state on the low-loss axis is untouched") {
        auto out = apply_pdl(make_linear_state(0.0), 3.0, 0.0);
        CHECK(out.angle == doctest::Approx(0.0));
        CHECK(out.relative_amplitude == doctest::Approx(1.0));
    }

    SUBCASE("a state orthogonal to the axis keeps its angle, loses power") {
        auto out = apply_pdl(make_linear_state(pi / 2), 3.0, 0.0);
        CHECK(out.angle == doctest::Approx(pi / 2));
        double t = out.relative_amplitude * out.relative_amplitude;
        CHECK(t == doctest::Approx(std::pow(10.0, -0.3)));
    }

    SUBCASE("axis choice only shifts the frame") {
        auto a = apply_pdl(make_linear_state(pi / 4), 1.1, 0.0);
        auto b = apply_pdl(make_linear_state(pi / 4 + 0.2), 1.1, 0.2);
        CHECK(b.angle - 0.2 == doctest::Approx(a.angle));
        CHECK(b.relative_amplitude == doctest::Approx(a.relative_amplitude));
    }
}

TEST_CASE("eavesdropper bound is one minus cosine") {
    CHECK(eve_information_bound(0.0) == doctest::Approx(0.0));
    CHECK(eve_information_bound(pi / 2) == doctest::Approx(1.0));
    CHECK(eve_information_bound(pi / 4) == doctest::Approx(0.2928932188134524));
    CHECK(eve_information_bound(50.0 * pi / 180.0) ==
          doctest::Approx(0.35721239031346064));
}
