#include "qkdsim/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qkdsim {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t derive_substream_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t state = seed;
    std::uint64_t mixed = splitmix64(state);
    state = mixed ^ (0x9e3779b97f4a7c15ull * (tag + 1));
    return splitmix64(state);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

std::uint64_t RandomStream::next_u64() {
    return engine_();
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

bool RandomStream::bernoulli(double p) {
    // uniform() lies in [0, 1), so p <= 0 is never true and p >= 1 always is.
    return uniform() < p;
}

std::uint8_t RandomStream::bit() {
    return static_cast<std::uint8_t>(next_u64() >> 63);
}

std::size_t RandomStream::index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("RandomStream::index: n must be positive");
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double RandomStream::normal(double mean, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("RandomStream::normal: sigma must be >= 0");
    double u1 = uniform();
    double u2 = uniform();
    if (sigma == 0.0) return mean;
    // Box-Muller; 1 - u1 keeps the log argument in (0, 1].
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RandomStream::poisson_knuth(double mean) {
    double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform();
    } while (p > limit);
    return k - 1;
}

std::uint64_t RandomStream::poisson(double mean) {
    if (mean < 0.0 || !std::isfinite(mean))
        throw std::invalid_argument("RandomStream::poisson: mean must be finite and >= 0");
    std::uint64_t total = 0;
    while (mean > 16.0) {
        total += poisson_knuth(16.0);
        mean -= 16.0;
    }
    return total + poisson_knuth(mean);
}

} // namespace qkdsim
