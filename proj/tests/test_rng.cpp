#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "qkdsim/rng.hpp"

using namespace qkdsim;

TEST_CASE("same seed reproduces the same stream") {
    RandomStream a(12345);
    RandomStream b(12345);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
    RandomStream a(1);
    RandomStream b(2);
    int equal = 0;
    for (int i = 0; i < 100; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    CHECK(equal == 0);
}

TEST_CASE("substream derivation is deterministic and spreads tags") {
    CHECK(derive_substream_seed(7, 3) == derive_substream_seed(7, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t tag = 0; tag < 64; ++tag)
        seen.insert(derive_substream_seed(99, tag));
    CHECK(seen.size() == 64);
    CHECK(seen.count(99) == 0);
}

TEST_CASE("uniform stays in [0,1) and centers on one half") {
    RandomStream rng(7);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    double sigma = 1.0 / std::sqrt(12.0 * n);
    CHECK(std::abs(sum / n - 0.5) < 3.0 * sigma);
}

TEST_CASE("uniform(lo,hi) respects its bounds") {
    RandomStream rng(8);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.uniform(-2.0, 5.0);
        REQUIRE(u >= -2.0);
        REQUIRE(u < 5.0);
    }
}

TEST_CASE("bernoulli edge probabilities are exact") {
    RandomStream rng(9);
    for (int i = 0; i < 1000; ++i) {
        CHECK_FALSE(rng.bernoulli(0.0));
        CHECK(rng.bernoulli(1.0));
    }
}

TEST_CASE("fair bit is fair") {
    RandomStream rng(10);
    const int n = 100000;
    long ones = 0;
    for (int i = 0; i < n; ++i) {
        auto b = rng.bit();
        REQUIRE(b <= 1);
        ones += b;
    }
    double sigma = std::sqrt(0.25 * n);
    CHECK(std::abs(ones - n / 2.0) < 3.0 * sigma);
}

TEST_CASE("index stays in range and covers it") {
    RandomStream rng(11);
    CHECK(rng.index(1) == 0);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        auto k = rng.index(7);
        REQUIRE(k < 7);
        ++hits[k];
    }
    for (int h : hits)
        CHECK(h > 0);
}

TEST_CASE("normal moments match and zero sigma is exact") {
    RandomStream rng(12);
    CHECK(rng.normal(3.5, 0.0) == 3.5);
    const int n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal(1.0, 2.0);
        sum += x;
        sum2 += x * x;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - 1.0) < 3.0 * 2.0 / std::sqrt(double(n)));
    CHECK(std::abs(var - 4.0) < 0.1);
}

TEST_CASE("poisson matches its pmf at small mean") {
    RandomStream rng(13);
    CHECK(rng.poisson(0.0) == 0);
    const int n = 100000;
    const double mu = 0.1;
    std::vector<long> counts(4, 0);
    for (int i = 0; i < n; ++i) {
        auto k = rng.poisson(mu);
        if (k < 4) ++counts[k];
    }
    // P(0), P(1), P(2) for Poisson(0.1)
    const double p[3] = {0.9048374180359595, 0.09048374180359595, 0.004524187090179798};
    for (int k = 0; k < 3; ++k) {
        double sigma = std::sqrt(n * p[k] * (1 - p[k]));
        CHECK(std::abs(counts[k] - n * p[k]) < 3.0 * sigma);
    }
}

TEST_CASE("poisson matches its mean at large mean") {
    RandomStream rng(14);
    const int n = 20000;
    const double mu = 50.0;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += double(rng.poisson(mu));
    double sigma = std::sqrt(mu / n);
    CHECK(std::abs(sum / n - mu) < 3.0 * sigma);
}

TEST_CASE("shuffle permutes without losing elements") {
    RandomStream rng(15);
    std::vector<int> v{1, 2, 3, 4, 5, 6, 7, 8, 9};
    auto sorted = v;
    rng.shuffle(v);
    auto copy = v;
    std::sort(copy.begin(), copy.end());
    CHECK(copy == sorted);

    std::vector<int> tiny{42};
    rng.shuffle(tiny);
    CHECK(tiny == std::vector<int>{42});

    std::vector<int> empty;
    rng.shuffle(empty);
    CHECK(empty.empty());
}
