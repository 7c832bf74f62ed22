#include "neb/bitvec.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>

namespace neb {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(master_seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

RandomStream::RandomStream(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
        s += 0x9E3779B97F4A7C15ULL;
        word = mix64(s);
    }
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

std::uint64_t RandomStream::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

std::uint32_t RandomStream::below(std::uint32_t bound) {
    if (bound == 0) throw std::invalid_argument("RandomStream::below: bound must be positive");
    // Lemire multiply-shift with rejection of the biased region.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - std::uint64_t{bound}) % bound;
        while (low < threshold) {
            x = next_u64();
            m = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint32_t>(m >> 64);
}

BitString::BitString(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {
    if (n == 0) throw std::invalid_argument("BitString: length must be positive");
}

BitString BitString::from_string(std::string_view bits) {
    BitString out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1')
            throw std::invalid_argument("BitString::from_string: expected only '0'/'1'");
        out.set(i, bits[i] == '1');
    }
    return out;
}

std::size_t BitString::ones_count() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
    return total;
}

std::size_t BitString::hamming_distance(const BitString& other) const {
    if (other.n_ != n_) throw std::invalid_argument("hamming_distance: length mismatch");
    std::size_t total = 0;
    for (std::size_t w = 0; w < words_.size(); ++w)
        total += static_cast<std::size_t>(std::popcount(words_[w] ^ other.words_[w]));
    return total;
}

std::string BitString::to_string() const {
    std::string out(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
        if (test(i)) out[i] = '1';
    return out;
}

BitString random_bitstring(std::size_t n, RandomStream& rng) {
    if (n == 0) throw std::invalid_argument("random_bitstring: n must be >= 1");
    BitString out(n);
    for (std::size_t i = 0; i < n; ++i) out.set(i, rng.bernoulli(0.5));
    return out;
}

BitString flip_bits(const BitString& x, std::span<const std::size_t> indices) {
    BitString out = x;
    for (std::size_t i : indices) {
        if (i >= x.size()) throw std::invalid_argument("flip_bits: index out of range");
        out.flip(i);
        // A second flip of the same position restores the original bit.
        if (out.test(i) == x.test(i)) throw std::invalid_argument("flip_bits: duplicate index");
    }
    return out;
}

std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t count, RandomStream& rng) {
    if (count > n) throw std::invalid_argument("sample_distinct: count exceeds n");
    std::vector<std::size_t> positions(n);
    std::iota(positions.begin(), positions.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.below(static_cast<std::uint32_t>(n - i));
        std::swap(positions[i], positions[j]);
    }
    positions.resize(count);
    return positions;
}

std::uint32_t sample_binomial(std::uint32_t trials, double p, RandomStream& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_binomial: p outside [0,1]");
    const std::uint64_t threshold = RandomStream::bernoulli_threshold(p);
    std::uint32_t successes = 0;
    for (std::uint32_t i = 0; i < trials; ++i)
        if (rng.bernoulli_with(threshold)) ++successes;
    return successes;
}

}  // namespace neb
