#include "neb/benchmarks.hpp"

#include <bit>
#include <stdexcept>

namespace neb {

ProblemSpec ProblemSpec::one_max(std::size_t n) {
    if (n == 0) throw std::invalid_argument("ProblemSpec: n must be >= 1");
    return {ProblemKind::one_max, n, 0};
}

ProblemSpec ProblemSpec::leading_ones(std::size_t n) {
    if (n == 0) throw std::invalid_argument("ProblemSpec: n must be >= 1");
    return {ProblemKind::leading_ones, n, 0};
}

ProblemSpec ProblemSpec::jump(std::size_t n, std::size_t k) {
    if (n == 0) throw std::invalid_argument("ProblemSpec: n must be >= 1");
    if (k < 1 || k >= n) throw std::invalid_argument("ProblemSpec: jump requires 1 <= k < n");
    return {ProblemKind::jump, n, k};
}

std::int64_t ProblemSpec::max_fitness() const {
    const auto sn = static_cast<std::int64_t>(n);
    return kind == ProblemKind::jump ? sn + static_cast<std::int64_t>(k) : sn;
}

std::int64_t ProblemSpec::true_fitness(const BitString& x) const {
    switch (kind) {
    case ProblemKind::one_max: return onemax(x);
    case ProblemKind::leading_ones: return leadingones(x);
    case ProblemKind::jump: return neb::jump(x, k);
    }
    throw std::logic_error("ProblemSpec: unknown kind");
}

bool ProblemSpec::is_optimum(const BitString& x) const {
    return true_fitness(x) == max_fitness();
}

std::int64_t onemax(const BitString& x) { return static_cast<std::int64_t>(x.ones_count()); }

std::int64_t leadingones(const BitString& x) {
    std::int64_t prefix = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x.test(i)) break;
        ++prefix;
    }
    return prefix;
}

std::int64_t jump(const BitString& x, std::size_t k) {
    const auto n = static_cast<std::int64_t>(x.size());
    const auto gap = static_cast<std::int64_t>(k);
    if (gap < 1 || gap >= n) throw std::invalid_argument("jump: requires 1 <= k < n");
    const auto m = static_cast<std::int64_t>(x.ones_count());
    // The gap interval (n-k, n) is open on both sides; m = n-k keeps m+k.
    if (m <= n - gap || m == n) return m + gap;
    return n - m;
}

}  // namespace neb
