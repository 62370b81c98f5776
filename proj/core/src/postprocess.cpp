#include "qkdsim/postprocess.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace qkdsim {

double binary_entropy(double p) {
    if (!(p >= 0.0) || p > 1.0)
        throw std::invalid_argument("binary_entropy: p must lie in [0, 1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

std::uint64_t hash64(const Bits& bits) {
    std::uint64_t h = 14695981039346656037ULL;
    for (std::uint8_t b : bits) {
        h ^= static_cast<std::uint64_t>(b & 1U);
        h *= 1099511628211ULL;
    }
    // Fold in the length so keys differing only by trailing zeros separate.
    h ^= static_cast<std::uint64_t>(bits.size());
    h *= 1099511628211ULL;
    return h;
}

void CascadeParams::validate() const {
    if (passes < 1 || passes > 30)
        throw std::invalid_argument("cascade.passes must lie in [1, 30]");
    if (!(block_constant > 0.0) || !std::isfinite(block_constant))
        throw std::invalid_argument("cascade.block_constant must be finite and > 0");
}

namespace {

struct PassState {
    std::vector<std::uint32_t> perm;    // permuted position -> original index
    std::vector<std::uint32_t> inverse; // original index -> permuted position
    std::size_t block_size = 0;
    std::vector<std::uint8_t> alice_parity;
    std::vector<std::uint8_t> bob_parity;
};

std::uint8_t range_parity(const Bits& key, const std::vector<std::uint32_t>& perm,
                          std::size_t lo, std::size_t hi) {
    std::uint8_t parity = 0;
    for (std::size_t pos = lo; pos < hi; ++pos) parity ^= key[perm[pos]] & 1U;
    return parity;
}

} // namespace

ReconciliationResult reconcile(const Bits& alice, const Bits& bob,
                               double qber_hint, const CascadeParams& params,
                               RandomStream& rng) {
    params.validate();
    if (alice.size() != bob.size())
        throw std::invalid_argument("reconcile: key lengths differ");
    if (!(qber_hint >= 0.0) || qber_hint > 1.0)
        throw std::invalid_argument("reconcile: qber_hint must lie in [0, 1]");
    if (alice.size() > 0xFFFFFFFFULL)
        throw std::invalid_argument("reconcile: key too long");

    ReconciliationResult result;
    result.corrected = bob;
    std::size_t n = alice.size();
    if (n == 0) {
        result.converged = true;
        return result;
    }

    // Blocks never exceed half the key: a pass whose single block spans the
    // whole key can expose at most one error (an even count has equal
    // parities), so doubling must stop at n/2 to keep every pass productive.
    std::size_t block_cap = std::max<std::size_t>(2, n / 4);
    std::size_t first_block = block_cap;
    if (qber_hint > 0.0) {
        double raw = std::ceil(params.block_constant / qber_hint);
        if (raw < static_cast<double>(block_cap))
            first_block = static_cast<std::size_t>(raw);
    }
    first_block = std::max<std::size_t>(2, std::min(block_cap, first_block));

    std::vector<PassState> states;
    states.reserve(static_cast<std::size_t>(params.passes));
    // Mismatched blocks ordered by (pass, block): corrections ripple back
    // through the shortest blocks first.
    std::set<std::pair<int, std::uint32_t>> pending;

    for (int pass = 0; pass < params.passes; ++pass) {
        PassState st;
        st.block_size = states.empty()
                            ? first_block
                            : std::min(block_cap, states.back().block_size * 2);
        st.perm.resize(n);
        for (std::size_t i = 0; i < n; ++i) st.perm[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = n - 1; i > 0; --i) {
            auto j = static_cast<std::size_t>(rng.index(i + 1));
            std::swap(st.perm[i], st.perm[j]);
        }
        st.inverse.resize(n);
        for (std::size_t pos = 0; pos < n; ++pos) st.inverse[st.perm[pos]] =
            static_cast<std::uint32_t>(pos);

        std::size_t blocks = (n + st.block_size - 1) / st.block_size;
        st.alice_parity.assign(blocks, 0);
        st.bob_parity.assign(blocks, 0);
        for (std::size_t pos = 0; pos < n; ++pos) {
            std::size_t blk = pos / st.block_size;
            st.alice_parity[blk] ^= alice[st.perm[pos]] & 1U;
            st.bob_parity[blk] ^= result.corrected[st.perm[pos]] & 1U;
        }
        result.disclosed_bits += blocks;

        states.push_back(std::move(st));
        const PassState& cur = states.back();
        for (std::size_t blk = 0; blk < blocks; ++blk)
            if (cur.alice_parity[blk] != cur.bob_parity[blk])
                pending.insert({pass, static_cast<std::uint32_t>(blk)});

        while (!pending.empty()) {
            auto [search_pass, search_block] = *pending.begin();
            const PassState& sp = states[static_cast<std::size_t>(search_pass)];
            std::size_t lo = search_block * sp.block_size;
            std::size_t hi = std::min(n, lo + sp.block_size);

            // Bisect: announcing the first half's parity locates one error,
            // the second half's parity being implied.
            while (hi - lo > 1) {
                std::size_t mid = lo + (hi - lo + 1) / 2;
                ++result.disclosed_bits;
                if (range_parity(alice, sp.perm, lo, mid) !=
                    range_parity(result.corrected, sp.perm, lo, mid))
                    hi = mid;
                else
                    lo = mid;
            }
            std::uint32_t original = sp.perm[lo];
            result.corrected[original] ^= 1U;
            ++result.corrected_errors;

            for (int q = 0; q < static_cast<int>(states.size()); ++q) {
                PassState& qs = states[static_cast<std::size_t>(q)];
                std::uint32_t blk = qs.inverse[original] /
                                    static_cast<std::uint32_t>(qs.block_size);
                qs.bob_parity[blk] ^= 1U;
                if (qs.alice_parity[blk] != qs.bob_parity[blk])
                    pending.insert({q, blk});
                else
                    pending.erase({q, blk});
            }
        }
    }

    result.converged = hash64(alice) == hash64(result.corrected);
    return result;
}

namespace {

std::vector<std::uint64_t> pack_bits(const Bits& bits) {
    std::vector<std::uint64_t> words(bits.size() / 64 + 2, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] & 1U) words[i >> 6] |= 1ULL << (i & 63U);
    return words;
}

} // namespace

Bits privacy_amplify(const Bits& key, const Bits& seed,
                     std::size_t output_length) {
    if (output_length == 0) return {};
    std::size_t n = key.size();
    if (seed.size() != n + output_length - 1)
        throw std::invalid_argument(
            "privacy_amplify: seed must hold key bits + output bits - 1 entries");

    // Row i of the matrix reads seed[n-1+i], seed[n-2+i], ..., seed[i].
    // Against the reversed seed that becomes a contiguous ascending window,
    // so each output bit is a word-wise AND followed by a parity.
    Bits reversed(seed.rbegin(), seed.rend());
    auto key_words = pack_bits(key);
    auto seed_words = pack_bits(reversed);
    std::size_t word_count = n / 64 + 1;

    Bits out(output_length, 0);
    for (std::size_t i = 0; i < output_length; ++i) {
        std::size_t offset = output_length - 1 - i;
        std::size_t word = offset >> 6;
        unsigned shift = static_cast<unsigned>(offset & 63U);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < word_count; ++w) {
            std::uint64_t window = seed_words[word + w] >> shift;
            if (shift != 0) window |= seed_words[word + w + 1] << (64U - shift);
            acc ^= window & key_words[w];
        }
        out[i] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
    }
    return out;
}

double net_bit_rate(const KeyRateInputs& inputs) {
    if (!(inputs.sifted_rate_hz >= 0.0) || !std::isfinite(inputs.sifted_rate_hz))
        throw std::invalid_argument("net_bit_rate: sifted_rate_hz must be finite and >= 0");
    if (!(inputs.qber >= 0.0) || inputs.qber > 1.0)
        throw std::invalid_argument("net_bit_rate: qber must lie in [0, 1]");
    if (!(inputs.eve_fraction >= 0.0) || inputs.eve_fraction > 1.0)
        throw std::invalid_argument("net_bit_rate: eve_fraction must lie in [0, 1]");
    if (!(inputs.reconciliation_efficiency >= 0.0))
        throw std::invalid_argument("net_bit_rate: reconciliation_efficiency must be >= 0");
    if (!(inputs.pa_margin >= 0.0) || inputs.pa_margin >= 1.0)
        throw std::invalid_argument("net_bit_rate: pa_margin must lie in [0, 1)");

    double correction_cost =
        inputs.reconciliation_efficiency * binary_entropy(std::min(inputs.qber, 0.5));
    double secure = 1.0 - correction_cost - inputs.eve_fraction - inputs.pa_margin;
    return inputs.sifted_rate_hz * std::max(0.0, secure);
}

void write_key_file(const std::filesystem::path& path, const Bits& bits) {
    std::vector<unsigned char> packed((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] & 1U) packed[i >> 3] |= static_cast<unsigned char>(1U << (i & 7U));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open key file for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(packed.data()),
              static_cast<std::streamsize>(packed.size()));
    out.close();
    if (!out) throw std::runtime_error("failed writing key file: " + path.string());

    std::filesystem::path len_path = path;
    len_path += ".len";
    std::ofstream len(len_path, std::ios::trunc);
    if (!len)
        throw std::runtime_error("cannot open key length file for writing: " +
                                 len_path.string());
    len << bits.size() << '\n';
    len.close();
    if (!len)
        throw std::runtime_error("failed writing key length file: " + len_path.string());
}

Bits read_key_file(const std::filesystem::path& path) {
    std::filesystem::path len_path = path;
    len_path += ".len";
    std::ifstream len(len_path);
    if (!len)
        throw std::runtime_error("cannot open key length file: " + len_path.string());
    std::uint64_t count = 0;
    if (!(len >> count))
        throw std::runtime_error("malformed key length file: " + len_path.string());

    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open key file: " + path.string());
    std::vector<char> packed((count + 7) / 8);
    in.read(packed.data(), static_cast<std::streamsize>(packed.size()));
    if (static_cast<std::size_t>(in.gcount()) != packed.size())
        throw std::runtime_error("key file shorter than its recorded length: " +
                                 path.string());

    Bits bits(count, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        bits[i] = static_cast<std::uint8_t>(
            (static_cast<unsigned char>(packed[i >> 3]) >> (i & 7U)) & 1U);
    return bits;
}

} // namespace qkdsim
