#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "neb/benchmarks.hpp"

using namespace neb;

TEST_CASE("onemax counts one-bits") {
    CHECK(onemax(BitString::from_string("1111")) == 4);
    CHECK(onemax(BitString::from_string("0000")) == 0);
    CHECK(onemax(BitString::from_string("1011")) == 3);
}

TEST_CASE("leadingones counts the all-ones prefix") {
    CHECK(leadingones(BitString::from_string("1101")) == 2);
    CHECK(leadingones(BitString::from_string("0111")) == 0);
    CHECK(leadingones(BitString::from_string("1111")) == 4);
}

TEST_CASE("jump formula with open gap interval") {
    // n=8, k=3
    CHECK(jump(BitString::from_string("11111111"), 3) == 11);  // optimum: n+k
    CHECK(jump(BitString::from_string("11111100"), 3) == 2);   // m=6 in the gap
    CHECK(jump(BitString::from_string("11111000"), 3) == 8);   // m=5 = n-k takes +k
    CHECK(jump(BitString::from_string("11111110"), 3) == 1);   // m=7: lowest point
    CHECK(jump(BitString::from_string("00000000"), 3) == 3);
    CHECK_THROWS_AS(jump(BitString::from_string("1111"), 0), std::invalid_argument);
    CHECK_THROWS_AS(jump(BitString::from_string("1111"), 4), std::invalid_argument);
}

TEST_CASE("problem spec validation and max fitness") {
    CHECK(ProblemSpec::one_max(4).max_fitness() == 4);
    CHECK(ProblemSpec::leading_ones(4).max_fitness() == 4);
    CHECK(ProblemSpec::jump(8, 3).max_fitness() == 11);
    CHECK_THROWS_AS(ProblemSpec::one_max(0), std::invalid_argument);
    CHECK_THROWS_AS(ProblemSpec::jump(8, 0), std::invalid_argument);
    CHECK_THROWS_AS(ProblemSpec::jump(8, 8), std::invalid_argument);
}

TEST_CASE("is_optimum on the named examples") {
    CHECK(ProblemSpec::one_max(4).is_optimum(BitString::from_string("1111")));
    CHECK_FALSE(ProblemSpec::jump(8, 3).is_optimum(BitString::from_string("11111000")));
    CHECK_FALSE(ProblemSpec::leading_ones(4).is_optimum(BitString::from_string("1110")));
}

namespace {

// exhaustive scan of {0,1}^n
template <class Fn>
void for_each_bitstring(std::size_t n, Fn&& fn) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        BitString x(n);
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) x.set(i, true);
        fn(x);
    }
}

}  // namespace

TEST_CASE("fitness ranges and relations, exhaustively for n=10") {
    const std::size_t n = 10;
    const std::size_t k = 3;
    for_each_bitstring(n, [&](const BitString& x) {
        const auto om = onemax(x);
        const auto lo = leadingones(x);
        const auto jp = jump(x, k);
        CHECK(om >= 0);
        CHECK(om <= static_cast<std::int64_t>(n));
        CHECK(lo >= 0);
        CHECK(lo <= om);
        CHECK(jp >= 1);
        CHECK(jp <= static_cast<std::int64_t>(n + k));
        if (om <= static_cast<std::int64_t>(n - k)) CHECK(jp == om + static_cast<std::int64_t>(k));
    });
}

TEST_CASE("exactly the all-ones string is optimal, exhaustively for n=12") {
    const std::size_t n = 12;
    for (const ProblemSpec& spec :
         {ProblemSpec::one_max(n), ProblemSpec::leading_ones(n), ProblemSpec::jump(n, 3)}) {
        std::size_t optima = 0;
        for_each_bitstring(n, [&](const BitString& x) {
            CHECK(spec.true_fitness(x) <= spec.max_fitness());
            if (spec.is_optimum(x)) {
                ++optima;
                CHECK(x.ones_count() == n);
            }
        });
        CHECK(optima == 1);
    }
}
