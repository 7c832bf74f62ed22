#pragma once

#include <cstdint>

#include "neb/benchmarks.hpp"
#include "neb/bitvec.hpp"

namespace neb {

enum class NoiseKind { none, bitwise, one_bit };

// Prior noise applied to a copy of the individual before each evaluation.
// `bitwise` flips every bit independently with probability q/n; `one_bit`
// flips a single uniformly chosen bit with probability q. q = 1 under
// bitwise means per-bit probability 1/n, not certain corruption.
struct NoiseModel {
    NoiseKind kind = NoiseKind::none;
    double q = 0.0;

    static NoiseModel none() { return {NoiseKind::none, 0.0}; }
    static NoiseModel bitwise(double q);
    static NoiseModel one_bit(double q);

    void validate(std::size_t n) const;

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

// Corrupts x in place. With q = 0 no draws are consumed, so a run under
// `none` replays bit-identically under `bitwise(0)` with the same seeds.
void apply_noise(BitString& x, const NoiseModel& noise, RandomStream& rng);

// Perturbed copy of x; x itself is never modified.
BitString perturb(const BitString& x, const NoiseModel& noise, RandomStream& rng);

// Counts fitness evaluations; runtime is the number of counted evaluations.
// The parent's per-iteration re-evaluation is counted only when
// `count_parent_reeval` is set. One evaluator per trial; not shared.
class NoisyEvaluator {
  public:
    NoisyEvaluator(ProblemSpec problem, NoiseModel noise, bool count_parent_reeval = false)
        : problem_(problem), noise_(noise), count_parent_reeval_(count_parent_reeval),
          scratch_(problem.n) {
        noise_.validate(problem_.n);
    }

    std::int64_t evaluate(const BitString& x, RandomStream& rng, bool counted = true) {
        if (counted) ++evaluations_;
        if (noise_.kind == NoiseKind::none || noise_.q == 0.0) return problem_.true_fitness(x);
        scratch_ = x;
        apply_noise(scratch_, noise_, rng);
        return problem_.true_fitness(scratch_);
    }

    std::int64_t evaluate_parent(const BitString& x, RandomStream& rng) {
        return evaluate(x, rng, count_parent_reeval_);
    }

    const ProblemSpec& problem() const { return problem_; }
    const NoiseModel& noise() const { return noise_; }
    std::uint64_t evaluations() const { return evaluations_; }
    bool counts_parent_reeval() const { return count_parent_reeval_; }

  private:
    ProblemSpec problem_;
    NoiseModel noise_;
    bool count_parent_reeval_;
    BitString scratch_;
    std::uint64_t evaluations_ = 0;
};

}  // namespace neb
