#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "neb/noise.hpp"
#include "support/testutil.hpp"

using namespace neb;

TEST_CASE("noise model validation") {
    CHECK_THROWS_AS(NoiseModel::bitwise(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::one_bit(1.5), std::invalid_argument);
    CHECK_THROWS_AS(NoiseModel::bitwise(9.0).validate(8), std::invalid_argument);  // q/n > 1
    CHECK_NOTHROW(NoiseModel::bitwise(8.0).validate(8));
}

TEST_CASE("perturb identity cases consume no randomness") {
    const BitString x = BitString::from_string("10110");
    RandomStream rng(1), twin(1);
    CHECK(perturb(x, NoiseModel::bitwise(0.0), rng) == x);
    CHECK(perturb(x, NoiseModel::none(), rng) == x);
    CHECK(perturb(x, NoiseModel::one_bit(0.0), rng) == x);
    CHECK(rng.next_u64() == twin.next_u64());
}

TEST_CASE("one-bit noise with q=1 on a single bit flips it") {
    RandomStream rng(2);
    const BitString x = BitString::from_string("0");
    CHECK(perturb(x, NoiseModel::one_bit(1.0), rng).to_string() == "1");
}

TEST_CASE("perturb keeps the length and the input untouched") {
    RandomStream rng(3);
    const BitString x = random_bitstring(64, rng);
    const BitString copy = x;
    for (int i = 0; i < 100; ++i) {
        const BitString y = perturb(x, NoiseModel::bitwise(2.0), rng);
        CHECK(y.size() == x.size());
    }
    CHECK(x == copy);
}

TEST_CASE("bitwise q=1 hamming distances fit Bin(n, 1/n)") {
    const std::size_t n = 128;
    RandomStream rng(77);
    const BitString x = random_bitstring(n, rng);
    const NoiseModel noise = NoiseModel::bitwise(1.0);
    const int samples = 100000;
    std::vector<std::uint64_t> observed(n + 1, 0);
    for (int s = 0; s < samples; ++s)
        ++observed[x.hamming_distance(perturb(x, noise, rng))];
    auto expected = testutil::binomial_pmf(n, 1.0 / static_cast<double>(n));
    for (double& e : expected) e *= samples;
    CHECK(testutil::chi_square_gof_p(observed, expected) > 0.01);
}

TEST_CASE("noisy evaluator counting") {
    NoisyEvaluator eval(ProblemSpec::one_max(3), NoiseModel::none(), false);
    RandomStream rng(5);
    const BitString x = BitString::from_string("101");
    CHECK(eval.evaluate(x, rng) == 2);
    CHECK(eval.evaluations() == 1);
    CHECK(eval.evaluate(x, rng) == 2);  // no noise: deterministic
    CHECK(eval.evaluate(x, rng, false) == 2);
    CHECK(eval.evaluations() == 2);
    CHECK(eval.evaluate_parent(x, rng) == 2);  // uncounted by default
    CHECK(eval.evaluations() == 2);

    NoisyEvaluator counting(ProblemSpec::one_max(3), NoiseModel::none(), true);
    CHECK(counting.evaluate_parent(x, rng) == 2);
    CHECK(counting.evaluations() == 1);
}

TEST_CASE("noisy onemax mean under bitwise noise") {
    const std::size_t n = 1024;
    const double q = 1.0 / (6.0 * std::exp(1.0));
    NoisyEvaluator eval(ProblemSpec::one_max(n), NoiseModel::bitwise(q), false);
    RandomStream rng(9);
    BitString ones(n);
    for (std::size_t i = 0; i < n; ++i) ones.set(i, true);

    const int samples = 10000;
    double total = 0.0;
    for (int s = 0; s < samples; ++s) total += static_cast<double>(eval.evaluate(ones, rng));
    const double mean = total / samples;
    // from all-ones, observed fitness is n - Bin(n, q/n): mean n - q
    const double expected = static_cast<double>(n) - q;
    const double sigma = std::sqrt(q * (1.0 - q / static_cast<double>(n)) / samples);
    CHECK(std::fabs(mean - expected) < 3.0 * sigma);
    CHECK(eval.evaluations() == static_cast<std::uint64_t>(samples));
}

TEST_CASE("expected flipped bits under bitwise(q) is q") {
    const std::size_t n = 200;
    const double q = 3.5;
    RandomStream rng(13);
    const BitString x = random_bitstring(n, rng);
    const NoiseModel noise = NoiseModel::bitwise(q);
    const int samples = 20000;
    double total = 0.0;
    for (int s = 0; s < samples; ++s)
        total += static_cast<double>(x.hamming_distance(perturb(x, noise, rng)));
    const double sigma = std::sqrt(q / samples);  // Var Bin(n, q/n) <= q
    CHECK(std::fabs(total / samples - q) < 4.0 * sigma);
}
