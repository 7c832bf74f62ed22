#pragma once

#include <cstdint>
#include <vector>

#include "neb/benchmarks.hpp"
#include "neb/noise.hpp"

namespace neb {

// Exact expected-runtime computation for the (1+1) EA on ones-count
// symmetric benchmarks (OneMax, Jump). Both the fitness and the standard
// bit mutation law depend on the individual only through its ones-count m,
// so the run is an absorbing Markov chain on m in {0..n} with m = n
// absorbing.
struct ChainSpec {
    ProblemSpec problem;           // one_max or jump only
    NoiseModel noise;              // none or bitwise only
    bool count_parent_reeval = false;
};

// Distribution of the offspring ones-count after standard bit mutation at
// rate 1/n of a parent with j one-bits. Rows sum to 1 within 1e-12.
std::vector<double> mutation_kernel(std::size_t n, std::size_t j);

// Distribution of the observed noisy fitness of an individual with true
// ones-count m under bitwise noise with rate q: the observed ones-count is
// m - D + U with D ~ Bin(m, q/n) and U ~ Bin(n-m, q/n) independent, mapped
// through the benchmark's fitness. Indexed by fitness value 0..max_fitness.
std::vector<double> noisy_fitness_law(const ProblemSpec& problem, std::size_t m, double q);

struct OracleResult {
    double expected_evaluations = 0.0;
    bool diverged = false;  // singular system / unreachable optimum
};

// Expected counted evaluations of the (1+1) EA from a uniformly random
// initial individual, to the first acceptance of the true optimum as the
// current individual. Acceptance uses fresh independent noisy values of
// offspring and parent each iteration ("not worse" accepts). Requires
// n <= 64 (dense solve).
OracleResult expected_runtime_1p1(const ChainSpec& chain);

}  // namespace neb
