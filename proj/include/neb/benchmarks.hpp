#pragma once

#include <cstdint>

#include "neb/bitvec.hpp"

namespace neb {

enum class ProblemKind { one_max, leading_ones, jump };

// Benchmark identity plus problem size; supplies the true (noise-free)
// fitness and the optimum test. Fitness values are integers so ties are
// detected exactly.
struct ProblemSpec {
    ProblemKind kind = ProblemKind::one_max;
    std::size_t n = 1;
    std::size_t k = 0;  // gap size, jump only

    static ProblemSpec one_max(std::size_t n);
    static ProblemSpec leading_ones(std::size_t n);
    static ProblemSpec jump(std::size_t n, std::size_t k);

    std::int64_t max_fitness() const;
    std::int64_t true_fitness(const BitString& x) const;
    bool is_optimum(const BitString& x) const;

    friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

std::int64_t onemax(const BitString& x);

// Length of the longest all-ones prefix.
std::int64_t leadingones(const BitString& x);

// OneMax plus a fitness valley of radius k-1 around the all-ones optimum:
// with m one-bits, fitness is m+k when m <= n-k or m = n, else n-m.
std::int64_t jump(const BitString& x, std::size_t k);

}  // namespace neb
