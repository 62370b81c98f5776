#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "qkdsim/source.hpp"

using namespace qkdsim;

TEST_CASE("photon number pmf is a distribution") {
    double total = 0.0;
    for (std::uint64_t n = 0; n <= 20; ++n)
        total += photon_number_pmf(0.1, n);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(photon_number_pmf(0.1, 0) == doctest::Approx(0.9048374180359595));
    CHECK(photon_number_pmf(0.1, 1) == doctest::Approx(0.09048374180359595));
}

TEST_CASE("multi-photon exposure of a mu=0.1 source") {
    CHECK(multi_photon_probability(0.1) == doctest::Approx(0.004678840160444397));
    CHECK(multi_photon_probability(0.1) < 0.005);

    double via_pmf = 1.0 - photon_number_pmf(0.1, 0) - photon_number_pmf(0.1, 1);
    CHECK(multi_photon_probability(0.1) == doctest::Approx(via_pmf).epsilon(1e-13));

    CHECK_THROWS_AS(multi_photon_probability(0.0), std::invalid_argument);
}

TEST_CASE("sampled photon numbers track the mean") {
    RandomStream rng(21);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += double(sample_photon_number(0.1, rng));
    double sigma = std::sqrt(0.1 / n);
    CHECK(std::abs(sum / n - 0.1) < 3.0 * sigma);
}

TEST_CASE("bitstream is balanced and binary") {
    RandomStream rng(22);
    auto bits = generate_bitstream(100000, rng);
    REQUIRE(bits.size() == 100000);
    long ones = 0;
    for (auto b : bits) {
        REQUIRE(b <= 1);
        ones += b;
    }
    CHECK(std::abs(ones - 50000.0) < 3.0 * std::sqrt(100000 * 0.25));
}

TEST_CASE("emitted pulse carries the state selected by its bit") {
    SourceConfig cfg;
    auto pair = StatePair::b92_default();
    RandomStream rng(23);
    int seen[2] = {0, 0};
    for (int i = 0; i < 200; ++i) {
        auto pulse = emit_pulse(cfg, pair, 17, rng);
        CHECK(pulse.slot == 17);
        REQUIRE(pulse.bit <= 1);
        ++seen[pulse.bit];
        double expected = pulse.bit ? pair.state1.angle : pair.state0.angle;
        CHECK(pulse.state.angle == doctest::Approx(expected));
    }
    CHECK(seen[0] > 0);
    CHECK(seen[1] > 0);
}

TEST_CASE("source validation rejects nonphysical settings") {
    SourceConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    SourceConfig bad = cfg;
    bad.mu = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.clock_hz = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.pulse_fwhm_s = -1e-12;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.wavelength_nm = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = cfg;
    bad.linewidth_nm = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
