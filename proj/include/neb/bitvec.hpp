#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace neb {

// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

// Seed for trial `index` of a batch keyed by `master_seed` (splitmix-style
// hash of the pair). Each trial owns its derived stream exclusively.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

// Deterministic random stream: xoshiro256++ with state expanded from the
// seed by splitmix64. The same seed replays the same draw sequence.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Consumes exactly one draw regardless of p.
    bool bernoulli(double p) { return next_unit() < p; }

    // Integer-threshold form of bernoulli(p): same draws, same outcomes.
    // p * 2^53 is exact for p in [0, 1], so (u >> 11) < ceil(p * 2^53)
    // reproduces (u >> 11) * 2^-53 < p bit-for-bit.
    static std::uint64_t bernoulli_threshold(double p) {
        return static_cast<std::uint64_t>(std::ceil(p * 0x1p53));
    }
    bool bernoulli_with(std::uint64_t threshold) { return (next_u64() >> 11) < threshold; }

    // Unbiased uniform integer in [0, bound), bound >= 1.
    std::uint32_t below(std::uint32_t bound);

  private:
    std::array<std::uint64_t, 4> state_;
};

// Fixed-length bit string, the search-space point. Length is immutable
// after construction; values are safe to share across threads.
class BitString {
  public:
    explicit BitString(std::size_t n);

    // "1011" -> bits 1,0,1,1 at indices 0..3. Test/demo convenience.
    static BitString from_string(std::string_view bits);

    std::size_t size() const { return n_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void set(std::size_t i, bool value) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::size_t ones_count() const;
    std::size_t hamming_distance(const BitString& other) const;
    std::string to_string() const;

    friend bool operator==(const BitString&, const BitString&) = default;

  private:
    std::size_t n_;
    std::vector<std::uint64_t> words_;
};

// Each bit independently 1 with probability 1/2; consumes exactly n draws
// in index order. n must be >= 1.
BitString random_bitstring(std::size_t n, RandomStream& rng);

// Copy of x with exactly the given positions flipped. Indices must be
// in range and distinct.
BitString flip_bits(const BitString& x, std::span<const std::size_t> indices);

// Uniform subset of `count` distinct positions from [0, n), via partial
// Fisher-Yates; consumes exactly `count` draws.
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t count, RandomStream& rng);

// Bin(trials, p) realized as `trials` Bernoulli draws in fixed order, so
// replay is platform-independent.
std::uint32_t sample_binomial(std::uint32_t trials, double p, RandomStream& rng);

}  // namespace neb
