#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "qkdsim/rng.hpp"
#include "qkdsim/source.hpp"

namespace qkdsim {

/// Shannon entropy of a binary variable, in bits.
double binary_entropy(double p);

/// 64-bit FNV-1a style digest of a bit vector, used to verify that two keys
/// agree after reconciliation without revealing them.
std::uint64_t hash64(const Bits& bits);

struct CascadeParams {
    int passes = 4;
    /// First-pass block length is block_constant / qber_hint, rounded up.
    double block_constant = 0.73;

    void validate() const;
};

struct ReconciliationResult {
    /// Bob's key after parity-guided correction.
    Bits corrected;
    /// Parity bits announced over the public channel.
    std::uint64_t disclosed_bits = 0;
    std::uint64_t corrected_errors = 0;
    /// True when the post-correction digests of both keys agree.
    bool converged = false;
};

/// Interactive parity reconciliation.  Both keys are partitioned into blocks
/// whose announced parities locate errors by bisection; each later pass
/// doubles the block length under a fresh shuffle, and every correction
/// re-examines the blocks of earlier passes that contained the flipped bit.
/// Announced parities are counted against the key budget; the closing digest
/// comparison is not.
ReconciliationResult reconcile(const Bits& alice, const Bits& bob,
                               double qber_hint, const CascadeParams& params,
                               RandomStream& rng);

/// Compress a reconciled key with a random binary Toeplitz matrix.  The seed
/// supplies the matrix diagonals and must hold exactly
/// key.size() + output_length - 1 bits; entry (i, j) is
/// seed[key.size() - 1 + i - j].
Bits privacy_amplify(const Bits& key, const Bits& seed,
                     std::size_t output_length);

struct KeyRateInputs {
    double sifted_rate_hz = 0.0;
    double qber = 0.0;
    /// Information bound available to an eavesdropper, per sifted bit.
    double eve_fraction = 0.0;
    /// Multiplier on the Shannon limit paid to error correction.
    double reconciliation_efficiency = 1.2;
    /// Extra fraction removed during privacy amplification.
    double pa_margin = 0.0;
};

/// Secure bits per second left after error correction and privacy
/// amplification are charged against the sifted rate.  Never negative.
double net_bit_rate(const KeyRateInputs& inputs);

/// Write bits packed LSB-first, with a "<path>.len" sidecar holding the
/// decimal bit count.
void write_key_file(const std::filesystem::path& path, const Bits& bits);

Bits read_key_file(const std::filesystem::path& path);

} // namespace qkdsim
