#pragma once

#include <cstdint>
#include <span>

#include "neb/benchmarks.hpp"
#include "neb/bitvec.hpp"
#include "neb/noise.hpp"

namespace neb {

enum class AlgorithmKind { one_plus_one_ea, one_plus_lambda_ea, one_ll_ga };

// Algorithm identity plus parameters. p (mutation rate) and c (crossover
// bias) apply to the GA only; the EAs mutate each bit with probability 1/n.
struct AlgorithmSpec {
    AlgorithmKind kind = AlgorithmKind::one_plus_one_ea;
    std::uint32_t lambda = 1;
    double p = 0.0;
    double c = 0.0;

    static AlgorithmSpec one_plus_one();
    static AlgorithmSpec one_plus_lambda(std::uint32_t lambda);
    static AlgorithmSpec ga(std::uint32_t lambda, double p, double c);
    // Standard parametrization p = lambda/n, c = 1/lambda.
    static AlgorithmSpec standard_ga(std::uint32_t lambda, std::size_t n);
    // Heavy-mutation regime for jump functions: p = c = sqrt(k/n).
    static AlgorithmSpec jump_ga(std::uint32_t lambda, std::size_t n, std::size_t k);

    void validate() const;

    friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

struct RunState {
    BitString x;
    std::uint64_t iterations = 0;
    bool done = false;
    bool censored = false;
};

// Uniform choice among the indices attaining the maximum value; consumes a
// draw only when two or more are tied.
std::size_t select_argmax(std::span<const std::int64_t> values, RandomStream& rng);

// One generation of the (1+lambda) EA: lambda offspring by standard bit
// mutation at rate 1/n (created in index order, then evaluated in index
// order, then the parent is re-evaluated, then ties are broken). The best
// offspring replaces the parent when its noisy fitness is not worse.
void ea_iteration(RunState& state, const AlgorithmSpec& algo, NoisyEvaluator& eval,
                  RandomStream& rng);

// One generation of the (1+(lambda,lambda)) GA. A single flip count
// ell ~ Bin(n, p) is shared by all lambda mutation offspring; the noisy-best
// of them seeds a biased crossover producing lambda more offspring, whose
// noisy-best competes against the freshly re-evaluated parent. The mutation
// winner itself is not a candidate in the final selection.
void ga_iteration(RunState& state, const AlgorithmSpec& algo, NoisyEvaluator& eval,
                  RandomStream& rng);

struct TrialResult {
    std::uint64_t evaluations = 0;
    std::uint64_t iterations = 0;
    bool done = false;
    bool censored = false;
};

// Full run: random initial individual, iterate until the true optimum is
// accepted as the current individual or the counted evaluations reach
// `budget` (censored). An initial individual that is already optimal costs
// zero evaluations. The full cost of the final iteration is charged.
TrialResult run(const ProblemSpec& problem, const AlgorithmSpec& algo, const NoiseModel& noise,
                std::uint64_t seed, std::uint64_t budget, bool count_parent_reeval = false);

}  // namespace neb
