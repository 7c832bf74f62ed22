#include "neb/algorithms.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace neb {

AlgorithmSpec AlgorithmSpec::one_plus_one() { return {AlgorithmKind::one_plus_one_ea, 1, 0.0, 0.0}; }

AlgorithmSpec AlgorithmSpec::one_plus_lambda(std::uint32_t lambda) {
    AlgorithmSpec spec{AlgorithmKind::one_plus_lambda_ea, lambda, 0.0, 0.0};
    spec.validate();
    return spec;
}

AlgorithmSpec AlgorithmSpec::ga(std::uint32_t lambda, double p, double c) {
    AlgorithmSpec spec{AlgorithmKind::one_ll_ga, lambda, p, c};
    spec.validate();
    return spec;
}

AlgorithmSpec AlgorithmSpec::standard_ga(std::uint32_t lambda, std::size_t n) {
    return ga(lambda, static_cast<double>(lambda) / static_cast<double>(n),
              1.0 / static_cast<double>(lambda));
}

AlgorithmSpec AlgorithmSpec::jump_ga(std::uint32_t lambda, std::size_t n, std::size_t k) {
    const double rate = std::sqrt(static_cast<double>(k) / static_cast<double>(n));
    return ga(lambda, rate, rate);
}

void AlgorithmSpec::validate() const {
    if (lambda < 1) throw std::invalid_argument("AlgorithmSpec: lambda must be >= 1");
    if (kind == AlgorithmKind::one_plus_one_ea && lambda != 1)
        throw std::invalid_argument("AlgorithmSpec: (1+1) EA requires lambda = 1");
    if (kind == AlgorithmKind::one_ll_ga) {
        if (!(p > 0.0 && p <= 1.0))
            throw std::invalid_argument("AlgorithmSpec: GA mutation rate p must be in (0,1]");
        if (!(c >= 0.0 && c <= 1.0))
            throw std::invalid_argument("AlgorithmSpec: GA crossover bias c must be in [0,1]");
    }
}

std::size_t select_argmax(std::span<const std::int64_t> values, RandomStream& rng) {
    if (values.empty()) throw std::invalid_argument("select_argmax: empty range");
    std::int64_t best = values[0];
    std::size_t ties = 0;
    for (std::int64_t v : values) {
        if (v > best) {
            best = v;
            ties = 1;
        } else if (v == best) {
            ++ties;
        }
    }
    std::size_t pick = ties == 1 ? 0 : rng.below(static_cast<std::uint32_t>(ties));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != best) continue;
        if (pick == 0) return i;
        --pick;
    }
    throw std::logic_error("select_argmax: unreachable");
}

namespace {

// per-run scratch; runs are single-threaded and trials never share a thread
// mid-run, so thread_local reuse is safe and avoids per-iteration allocation
struct IterationScratch {
    std::vector<BitString> offspring;
    std::vector<BitString> crossed;
    std::vector<std::int64_t> values;
    std::vector<std::size_t> positions;

    void shape(const BitString& parent, std::uint32_t lambda, bool with_crossover) {
        reshape(offspring, parent, lambda);
        if (with_crossover) reshape(crossed, parent, lambda);
        values.assign(lambda, 0);
    }

  private:
    static void reshape(std::vector<BitString>& pool, const BitString& parent,
                        std::uint32_t lambda) {
        if (pool.size() != lambda || pool.front().size() != parent.size()) {
            pool.clear();
            pool.reserve(lambda);
            for (std::uint32_t i = 0; i < lambda; ++i) pool.push_back(parent);
        } else {
            for (BitString& slot : pool) slot = parent;  // same length: no allocation
        }
    }
};

thread_local IterationScratch scratch;

void standard_bit_mutation_in_place(BitString& offspring, RandomStream& rng) {
    const std::size_t n = offspring.size();
    const std::uint64_t threshold =
        RandomStream::bernoulli_threshold(1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        if (rng.bernoulli_with(threshold)) offspring.flip(i);
}

// partial Fisher-Yates into scratch.positions; exactly `count` draws
void sample_distinct_in_place(std::size_t n, std::size_t count, RandomStream& rng,
                              std::vector<std::size_t>& positions) {
    positions.resize(n);
    for (std::size_t i = 0; i < n; ++i) positions[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + rng.below(static_cast<std::uint32_t>(n - i));
        std::swap(positions[i], positions[j]);
    }
    positions.resize(count);
}

}  // namespace

void ea_iteration(RunState& state, const AlgorithmSpec& algo, NoisyEvaluator& eval,
                  RandomStream& rng) {
    if (state.done || state.censored) throw std::logic_error("ea_iteration: run already finished");
    const std::uint32_t lambda = algo.lambda;
    scratch.shape(state.x, lambda, false);

    for (std::uint32_t i = 0; i < lambda; ++i)
        standard_bit_mutation_in_place(scratch.offspring[i], rng);
    for (std::uint32_t i = 0; i < lambda; ++i)
        scratch.values[i] = eval.evaluate(scratch.offspring[i], rng);
    const std::int64_t parent_value = eval.evaluate_parent(state.x, rng);

    const std::size_t best = select_argmax(scratch.values, rng);
    if (scratch.values[best] >= parent_value) state.x = scratch.offspring[best];

    ++state.iterations;
    state.done = eval.problem().is_optimum(state.x);
}

void ga_iteration(RunState& state, const AlgorithmSpec& algo, NoisyEvaluator& eval,
                  RandomStream& rng) {
    if (state.done || state.censored) throw std::logic_error("ga_iteration: run already finished");
    const std::size_t n = state.x.size();
    const std::uint32_t lambda = algo.lambda;
    scratch.shape(state.x, lambda, true);

    // Mutation phase: one flip count for the whole generation, no resampling
    // of ell = 0 or ell = n.
    const std::uint32_t ell = sample_binomial(static_cast<std::uint32_t>(n), algo.p, rng);
    for (std::uint32_t i = 0; i < lambda; ++i) {
        sample_distinct_in_place(n, ell, rng, scratch.positions);
        for (std::size_t pos : scratch.positions) scratch.offspring[i].flip(pos);
    }
    for (std::uint32_t i = 0; i < lambda; ++i)
        scratch.values[i] = eval.evaluate(scratch.offspring[i], rng);
    const BitString& mutation_winner = scratch.offspring[select_argmax(scratch.values, rng)];

    // Crossover phase: each bit from the mutation winner with probability c.
    const std::uint64_t cross_threshold = RandomStream::bernoulli_threshold(algo.c);
    for (std::uint32_t i = 0; i < lambda; ++i) {
        BitString& child = scratch.crossed[i];
        for (std::size_t bit = 0; bit < n; ++bit)
            if (rng.bernoulli_with(cross_threshold)) child.set(bit, mutation_winner.test(bit));
    }
    for (std::uint32_t i = 0; i < lambda; ++i)
        scratch.values[i] = eval.evaluate(scratch.crossed[i], rng);
    const std::int64_t parent_value = eval.evaluate_parent(state.x, rng);

    const std::size_t best = select_argmax(scratch.values, rng);
    if (scratch.values[best] >= parent_value) state.x = scratch.crossed[best];

    ++state.iterations;
    state.done = eval.problem().is_optimum(state.x);
}

TrialResult run(const ProblemSpec& problem, const AlgorithmSpec& algo, const NoiseModel& noise,
                std::uint64_t seed, std::uint64_t budget, bool count_parent_reeval) {
    algo.validate();
    if (budget < 1) throw std::invalid_argument("run: budget must be >= 1");

    RandomStream rng(seed);
    NoisyEvaluator eval(problem, noise, count_parent_reeval);
    RunState state{random_bitstring(problem.n, rng)};

    if (problem.is_optimum(state.x))
        return {0, 0, true, false};

    while (true) {
        if (algo.kind == AlgorithmKind::one_ll_ga)
            ga_iteration(state, algo, eval, rng);
        else
            ea_iteration(state, algo, eval, rng);
        if (state.done) break;
        if (eval.evaluations() >= budget) {
            state.censored = true;
            break;
        }
    }
    return {eval.evaluations(), state.iterations, state.done, state.censored};
}

}  // namespace neb
