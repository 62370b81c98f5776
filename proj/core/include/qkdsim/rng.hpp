#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qkdsim {

/// One step of the splitmix64 generator. Advances `state` and returns the output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives a decorrelated stream seed from a base seed and a tag (port id,
/// sweep index, ...). Same (seed, tag) always maps to the same sub-seed.
std::uint64_t derive_substream_seed(std::uint64_t seed, std::uint64_t tag);

/// Deterministic random stream with fixed sampling algorithms.
///
/// The engine is std::mt19937_64, which the standard pins bit-exactly; all
/// distributions on top of it are implemented here rather than taken from
/// <random>, whose distribution algorithms are implementation-defined and
/// would break reproducibility across standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    bool bernoulli(double p);

    /// One fair bit.
    std::uint8_t bit();

    /// Uniform index in [0, n). n must be positive.
    std::size_t index(std::size_t n);

    /// Gaussian via Box-Muller. sigma == 0 returns mean exactly.
    double normal(double mean, double sigma);

    /// Exact Poisson sample for any mean >= 0. Uses Knuth's product method on
    /// chunks of at most 16 so the expected cost stays bounded while the
    /// distribution stays exact (a sum of independent Poissons is Poisson).
    std::uint64_t poisson(double mean);

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t poisson_knuth(double mean);

    std::mt19937_64 engine_;
};

} // namespace qkdsim
