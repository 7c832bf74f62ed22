#include "neb/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace neb {

namespace {

// Bin(n, r) probability mass function, full table 0..n.
std::vector<double> binomial_pmf(std::size_t n, double r) {
    std::vector<double> pmf(n + 1, 0.0);
    if (r <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (r >= 1.0) {
        pmf[n] = 1.0;
        return pmf;
    }
    // log-space for stability at larger n
    const double lr = std::log(r);
    const double l1r = std::log1p(-r);
    double lchoose = 0.0;  // log C(n, 0)
    for (std::size_t a = 0; a <= n; ++a) {
        pmf[a] = std::exp(lchoose + static_cast<double>(a) * lr +
                          static_cast<double>(n - a) * l1r);
        if (a < n)
            lchoose += std::log(static_cast<double>(n - a)) - std::log(static_cast<double>(a + 1));
    }
    return pmf;
}

std::int64_t fitness_of_count(const ProblemSpec& problem, std::size_t m) {
    const auto n = static_cast<std::int64_t>(problem.n);
    const auto sm = static_cast<std::int64_t>(m);
    if (problem.kind == ProblemKind::one_max) return sm;
    const auto k = static_cast<std::int64_t>(problem.k);
    if (sm <= n - k || sm == n) return sm + k;
    return n - sm;
}

// Gaussian elimination with partial pivoting; returns false on a (near)
// singular system.
bool solve_dense(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
        if (std::fabs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[row][j] -= factor * a[col][j];
            b[row] -= factor * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= a[i][j] * b[j];
        b[i] = acc / a[i][i];
    }
    return true;
}

}  // namespace

std::vector<double> mutation_kernel(std::size_t n, std::size_t j) {
    if (j > n) throw std::invalid_argument("mutation_kernel: j must be in [0, n]");
    const double rate = 1.0 / static_cast<double>(n);
    // D one-bits flip down, U zero-bits flip up, independently.
    const auto down = binomial_pmf(j, rate);
    const auto up = binomial_pmf(n - j, rate);
    std::vector<double> kernel(n + 1, 0.0);
    for (std::size_t d = 0; d <= j; ++d)
        for (std::size_t u = 0; u <= n - j; ++u) kernel[j - d + u] += down[d] * up[u];
    return kernel;
}

std::vector<double> noisy_fitness_law(const ProblemSpec& problem, std::size_t m, double q) {
    const std::size_t n = problem.n;
    if (m > n) throw std::invalid_argument("noisy_fitness_law: m must be in [0, n]");
    if (problem.kind == ProblemKind::leading_ones)
        throw std::invalid_argument("noisy_fitness_law: ones-count state needs one_max or jump");
    const double rate = q / static_cast<double>(n);
    if (rate < 0.0 || rate > 1.0)
        throw std::invalid_argument("noisy_fitness_law: q/n outside [0,1]");

    const auto down = binomial_pmf(m, rate);
    const auto up = binomial_pmf(n - m, rate);
    std::vector<double> law(static_cast<std::size_t>(problem.max_fitness()) + 1, 0.0);
    for (std::size_t d = 0; d <= m; ++d)
        for (std::size_t u = 0; u <= n - m; ++u) {
            const std::size_t observed = m - d + u;
            law[static_cast<std::size_t>(fitness_of_count(problem, observed))] += down[d] * up[u];
        }
    return law;
}

OracleResult expected_runtime_1p1(const ChainSpec& chain) {
    const ProblemSpec& problem = chain.problem;
    const std::size_t n = problem.n;
    if (problem.kind == ProblemKind::leading_ones)
        throw std::invalid_argument("expected_runtime_1p1: supports one_max and jump only");
    if (chain.noise.kind == NoiseKind::one_bit)
        throw std::invalid_argument("expected_runtime_1p1: supports none and bitwise noise only");
    if (n > 64) throw std::invalid_argument("expected_runtime_1p1: n must be <= 64");

    const double q = chain.noise.kind == NoiseKind::none ? 0.0 : chain.noise.q;

    // Observed-fitness law and its CDF per ones-count.
    std::vector<std::vector<double>> law(n + 1), cdf(n + 1);
    for (std::size_t m = 0; m <= n; ++m) {
        law[m] = noisy_fitness_law(problem, m, q);
        cdf[m].assign(law[m].size(), 0.0);
        double acc = 0.0;
        for (std::size_t f = 0; f < law[m].size(); ++f) {
            acc += law[m][f];
            cdf[m][f] = acc;
        }
    }

    // accept[j][j'] = P(noisy f(offspring at j') >= noisy f(parent at j)),
    // offspring and parent perturbed independently.
    std::vector<std::vector<double>> accept(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t jp = 0; jp <= n; ++jp) {
            double a = 0.0;
            for (std::size_t f = 0; f < law[jp].size(); ++f)
                if (law[jp][f] > 0.0) a += law[jp][f] * cdf[j][f];
            accept[j][jp] = a;
        }

    // Transient system over j = 0..n-1: t[j] = 1 + sum_j' Q[j][j'] t[j'].
    std::vector<std::vector<double>> system(n, std::vector<double>(n, 0.0));
    std::vector<double> t(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto kernel = mutation_kernel(n, j);
        double stay = kernel[j];  // same-count offspring keep the state either way
        for (std::size_t jp = 0; jp <= n; ++jp) {
            if (jp == j) continue;
            stay += kernel[jp] * (1.0 - accept[j][jp]);
        }
        for (std::size_t jp = 0; jp < n; ++jp) {
            double prob = jp == j ? stay : kernel[jp] * accept[j][jp];
            system[j][jp] = (jp == j ? 1.0 : 0.0) - prob;
        }
    }

    auto coeffs = system;  // keep a copy for the residual check
    if (!solve_dense(system, t)) return {0.0, true};

    double max_residual = 0.0, max_t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double acc = -1.0;
        for (std::size_t j = 0; j < n; ++j) acc += coeffs[i][j] * t[j];
        max_residual = std::max(max_residual, std::fabs(acc));
        max_t = std::max(max_t, std::fabs(t[i]));
    }
    if (max_residual > 1e-9 * std::max(1.0, max_t)) return {0.0, true};

    // Expectation under the Bin(n, 1/2) initial law; an optimal start costs 0.
    const auto initial = binomial_pmf(n, 0.5);
    double iterations = 0.0;
    for (std::size_t j = 0; j < n; ++j) iterations += initial[j] * t[j];

    const double per_iteration = chain.count_parent_reeval ? 2.0 : 1.0;
    return {iterations * per_iteration, false};
}

}  // namespace neb
