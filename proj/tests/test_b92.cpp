#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "qkdsim/b92.hpp"

using namespace qkdsim;
using std::numbers::pi;

namespace {

DetectionRecord click(std::int64_t slot, int channel) {
    DetectionRecord r;
    r.slot = slot;
    r.true_slot = slot;
    r.channel = channel;
    return r;
}

} // namespace

TEST_CASE("receiver geometry defaults") {
    ReceiverSetup setup;
    CHECK_NOTHROW(setup.validate());
    CHECK(analyzer_angle(setup, 1) == doctest::Approx(pi / 2));
    CHECK(analyzer_angle(setup, 0) == doctest::Approx(3 * pi / 4));
    CHECK(channel_routing_probability(setup, 0) == doctest::Approx(0.5));
    CHECK(channel_routing_probability(setup, 1) == doctest::Approx(0.5));
    CHECK_THROWS_AS(analyzer_angle(setup, 2), std::invalid_argument);
}

TEST_CASE("receiver validation") {
    ReceiverSetup setup;
    setup.splitting_ratio = 0.0;
    CHECK_THROWS_AS(setup.validate(), std::invalid_argument);
    setup = ReceiverSetup{};
    setup.extinction_ratio_db = -1.0;
    CHECK_THROWS_AS(setup.validate(), std::invalid_argument);
    setup = ReceiverSetup{};
    setup.window_fraction = 0.0;
    CHECK_THROWS_AS(setup.validate(), std::invalid_argument);
    setup = ReceiverSetup{};
    setup.window_fraction = 1.1;
    CHECK_THROWS_AS(setup.validate(), std::invalid_argument);
}

TEST_CASE("extinction leak conversion") {
    CHECK(extinction_linear(25.0) == doctest::Approx(0.0031622776601683794));
    CHECK(extinction_linear(0.0) == doctest::Approx(1.0));
    CHECK(extinction_linear(200.0) == doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("analyzer pass probabilities implement the leaky malus law") {
    ReceiverSetup setup;
    auto pair = StatePair::b92_default();
    double eps = extinction_linear(setup.extinction_ratio_db);

    // State 0 is orthogonal to analyzer 1: only the leak passes.
    CHECK(analyzer_pass_probability(pair.state0, setup, 1) ==
          doctest::Approx(eps).epsilon(1e-12));
    // State 1 is orthogonal to analyzer 0.
    CHECK(analyzer_pass_probability(pair.state1, setup, 0) ==
          doctest::Approx(eps).epsilon(1e-12));

    // The conclusive arms sit 45 degrees away: cos^2 = 1/2.
    CHECK(analyzer_pass_probability(pair.state0, setup, 0) ==
          doctest::Approx((1.0 - eps) * 0.5 + eps));
    CHECK(analyzer_pass_probability(pair.state1, setup, 1) ==
          doctest::Approx((1.0 - eps) * 0.5 + eps));
}

TEST_CASE("single-photon measurement statistics") {
    ReceiverSetup setup;
    setup.extinction_ratio_db = 200.0;
    auto pair = StatePair::b92_default();
    RandomStream rng(41);

    const int n = 100000;
    int conclusive0 = 0, conclusive1 = 0, ambiguous = 0, lost = 0;
    for (int i = 0; i < n; ++i) {
        switch (measure_pulse(pair.state0, setup, rng)) {
            case MeasurementOutcome::conclusive_0: ++conclusive0; break;
            case MeasurementOutcome::conclusive_1: ++conclusive1; break;
            case MeasurementOutcome::ambiguous: ++ambiguous; break;
            case MeasurementOutcome::no_click: ++lost; break;
        }
    }

    CHECK(lost == 0);
    // Perfect extinction: state 0 can never click the bit-1 channel.
    CHECK(conclusive1 == 0);
    double sigma = std::sqrt(0.25 * 0.75 * n);
    CHECK(std::abs(conclusive0 - 0.25 * n) < 3.0 * sigma);
    CHECK(std::abs(ambiguous - 0.75 * n) < 3.0 * sigma);
}

TEST_CASE("measurement honors survival amplitude and efficiency") {
    ReceiverSetup setup;
    auto dim = make_linear_state(0.0, 0.5); // survival 0.25
    RandomStream rng(42);

    const int n = 50000;
    int clicks = 0, lost = 0;
    for (int i = 0; i < n; ++i) {
        auto outcome = measure_pulse(dim, setup, rng, 0.5, 0.5);
        if (outcome == MeasurementOutcome::conclusive_0 ||
            outcome == MeasurementOutcome::conclusive_1)
            ++clicks;
        else if (outcome == MeasurementOutcome::no_click)
            ++lost;
    }
    // survival 0.25, conclusive ~0.2524 given arrival, efficiency 0.5
    double expected = 0.25 * 0.2523720824 * 0.5;
    CHECK(std::abs(clicks - expected * n) < 3.0 * std::sqrt(expected * n) + 1);
    CHECK(lost > n / 2);
}

TEST_CASE("sifting keeps lone in-range clicks") {
    Bits alice{1, 0, 1, 1, 0, 0, 1, 0};
    std::vector<DetectionRecord> clicks{
        click(-2, 0),          // out of range
        click(1, 1),           // kept
        click(3, 0),           // kept
        click(5, 0), click(5, 1), // multi-click slot, dropped
        click(7, 1),           // kept
        click(12, 0),          // out of range
    };

    auto result = sift(alice, clicks);
    REQUIRE(result.alice.bits.size() == 3);
    REQUIRE(result.bob.bits.size() == 3);
    CHECK(result.multi_click_slots == 1);
    CHECK(result.out_of_range_clicks == 2);

    CHECK(result.alice.bits == Bits{0, 1, 0});
    CHECK(result.bob.bits == Bits{1, 0, 1});
    CHECK(result.alice.source_slots == std::vector<std::int64_t>{1, 3, 7});
    CHECK(result.bob.source_slots == std::vector<std::int64_t>{1, 3, 7});
    CHECK(result.retained_clicks == std::vector<std::size_t>{1, 2, 5});
}

TEST_CASE("sifting rejects unsorted clicks") {
    Bits alice{0, 1, 0};
    std::vector<DetectionRecord> clicks{click(2, 0), click(1, 0)};
    CHECK_THROWS_AS(sift(alice, clicks), std::invalid_argument);
}

TEST_CASE("sifting three clicks in one slot counts one discarded slot") {
    Bits alice{0, 1};
    std::vector<DetectionRecord> clicks{click(0, 0), click(0, 1), click(0, 0)};
    auto result = sift(alice, clicks);
    CHECK(result.alice.bits.empty());
    CHECK(result.multi_click_slots == 1);
}

TEST_CASE("error estimation bookkeeping") {
    RandomStream rng(43);

    SUBCASE("identical keys") {
        Bits key{1, 0, 0, 1, 1, 0, 1, 0, 0, 1};
        auto sample = measure_qber(key, key, 0.5, rng);
        CHECK(sample.compared_bits == 5);
        CHECK(sample.errors == 0);
        CHECK(sample.qber == doctest::Approx(0.0));
        CHECK(sample.alice_remaining.size() == 5);
        CHECK(sample.alice_remaining == sample.bob_remaining);
    }

    SUBCASE("full comparison counts every mismatch") {
        Bits alice(1000, 0);
        Bits bob = alice;
        for (std::size_t i = 0; i < bob.size(); i += 10) bob[i] = 1;
        auto sample = measure_qber(alice, bob, 1.0, rng);
        CHECK(sample.compared_bits == 1000);
        CHECK(sample.errors == 100);
        CHECK(sample.qber == doctest::Approx(0.1));
        CHECK(sample.alice_remaining.empty());
        CHECK(sample.bob_remaining.empty());
    }

    SUBCASE("zero fraction compares nothing") {
        Bits alice{1, 0, 1};
        Bits bob{0, 1, 0};
        auto sample = measure_qber(alice, bob, 0.0, rng);
        CHECK(sample.compared_bits == 0);
        CHECK(sample.qber == doctest::Approx(0.0));
        CHECK(sample.alice_remaining == alice);
        CHECK(sample.bob_remaining == bob);
    }

    SUBCASE("sampled and remaining bits partition the key") {
        Bits alice(200, 1);
        Bits bob(200, 1);
        auto sample = measure_qber(alice, bob, 0.3, rng);
        CHECK(sample.compared_bits == 60);
        CHECK(sample.alice_remaining.size() == 140);
    }

    SUBCASE("mismatched lengths are rejected") {
        Bits alice{1, 0};
        Bits bob{1};
        CHECK_THROWS_AS(measure_qber(alice, bob, 0.5, rng), std::invalid_argument);
    }
}
