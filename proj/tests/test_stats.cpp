#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "neb/stats.hpp"
#include "support/testutil.hpp"

using namespace neb;

TEST_CASE("t distribution tail against a numeric-integration oracle") {
    for (double t : {0.5, 1.0, 2.0, 3.5}) {
        for (double df : {1.0, 4.0, 8.0, 30.5}) {
            const double mine = student_t_two_sided_p(t, df);
            const double reference = testutil::t_two_sided_p_numeric(t, df);
            CHECK(mine == doctest::Approx(reference).epsilon(1e-7));
        }
    }
    CHECK(student_t_two_sided_p(0.0, 8.0) == doctest::Approx(1.0));
}

TEST_CASE("welch on identical samples is maximally insignificant") {
    const double a[] = {1.0, 2.0, 3.0};
    const WelchResult r = welch_t(a, a);
    CHECK(r.t == doctest::Approx(0.0));
    CHECK(r.p == doctest::Approx(1.0));
}

TEST_CASE("welch hand-computed example") {
    const double a[] = {1, 2, 3, 4, 5};
    const double b[] = {2, 3, 4, 5, 6};
    const WelchResult r = welch_t(a, b);
    CHECK(r.t == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.df == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(std::fabs(r.p - 0.3466) < 1e-4);
}

TEST_CASE("welch degenerate zero-variance conventions") {
    const double a[] = {0.0, 0.0};
    const double b[] = {10.0, 10.0};
    CHECK(welch_t(a, b).p == doctest::Approx(0.0));
    CHECK(welch_t(a, a).p == doctest::Approx(1.0));
    const double single[] = {1.0};
    CHECK_THROWS_AS(welch_t(single, b), std::invalid_argument);
}

TEST_CASE("welch is symmetric up to the sign of t") {
    const double a[] = {3.0, 8.0, 1.0, 9.0};
    const double b[] = {2.0, 2.5, 7.0};
    const WelchResult ab = welch_t(a, b);
    const WelchResult ba = welch_t(b, a);
    CHECK(ab.t == doctest::Approx(-ba.t));
    CHECK(ab.p == doctest::Approx(ba.p));
}

TEST_CASE("wilcoxon exact small examples") {
    const double a[] = {1.0, 2.0};
    const double b[] = {3.0, 4.0};
    const WilcoxonResult r = wilcoxon_rank_sum(a, b);
    CHECK(r.exact);
    CHECK(r.p == doctest::Approx(2.0 / 6.0).epsilon(1e-12));

    std::vector<double> lo, hi;
    for (int i = 1; i <= 10; ++i) lo.push_back(i);
    for (int i = 11; i <= 20; ++i) hi.push_back(i);
    const WilcoxonResult extreme = wilcoxon_rank_sum(lo, hi);
    CHECK(extreme.exact);
    CHECK(extreme.p == doctest::Approx(2.0 / 184756.0).epsilon(1e-9));
}

TEST_CASE("wilcoxon on identical samples gives p = 1") {
    const double a[] = {5.0, 5.0, 5.0};
    CHECK(wilcoxon_rank_sum(a, a).p == doctest::Approx(1.0));
    const double mixed[] = {1.0, 2.0, 3.0};
    CHECK(wilcoxon_rank_sum(mixed, mixed).p == doctest::Approx(1.0));
}

TEST_CASE("exact wilcoxon equals brute-force enumeration for all sizes up to 12 total") {
    RandomStream rng(7);
    for (std::size_t na = 2; na <= 10; ++na) {
        for (std::size_t nb = 2; na + nb <= 12; ++nb) {
            for (int repeat = 0; repeat < 3; ++repeat) {
                // distinct values so the exact path is taken
                std::vector<double> pool;
                for (std::size_t i = 0; i < na + nb; ++i)
                    pool.push_back(static_cast<double>(i) + rng.next_unit() * 0.5);
                for (std::size_t i = pool.size(); i-- > 1;)
                    std::swap(pool[i], pool[rng.below(static_cast<std::uint32_t>(i + 1))]);
                const std::vector<double> a(pool.begin(), pool.begin() + static_cast<long>(na));
                const std::vector<double> b(pool.begin() + static_cast<long>(na), pool.end());
                const WilcoxonResult mine = wilcoxon_rank_sum(a, b);
                REQUIRE(mine.exact);
                const double reference = testutil::wilcoxon_two_sided_bruteforce(a, b);
                CHECK(mine.p == doctest::Approx(reference).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("wilcoxon symmetry and shift invariance") {
    RandomStream rng(15);
    for (int repeat = 0; repeat < 20; ++repeat) {
        std::vector<double> a, b;
        for (int i = 0; i < 14; ++i) a.push_back(std::floor(rng.next_unit() * 20.0));
        for (int i = 0; i < 17; ++i) b.push_back(std::floor(rng.next_unit() * 20.0));
        const WilcoxonResult ab = wilcoxon_rank_sum(a, b);
        const WilcoxonResult ba = wilcoxon_rank_sum(b, a);
        CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));
        CHECK(ab.p >= 0.0);
        CHECK(ab.p <= 1.0);

        std::vector<double> a_shift = a, b_shift = b;
        for (double& v : a_shift) v += 1000.0;
        for (double& v : b_shift) v += 1000.0;
        CHECK(wilcoxon_rank_sum(a_shift, b_shift).p == doctest::Approx(ab.p).epsilon(1e-12));

        const WelchResult w = welch_t(a, b);
        const WelchResult w_shift = welch_t(a_shift, b_shift);
        if (std::isfinite(w.t)) CHECK(w.t == doctest::Approx(w_shift.t).epsilon(1e-9));
    }
}

TEST_CASE("wilcoxon normal approximation detects separation and respects ties") {
    std::vector<double> a, b;
    for (int i = 0; i < 40; ++i) a.push_back(i % 4);          // heavy ties
    for (int i = 0; i < 40; ++i) b.push_back(i % 4 + 2.0);
    const WilcoxonResult r = wilcoxon_rank_sum(a, b);
    CHECK_FALSE(r.exact);
    CHECK(r.p < 1e-6);

    const double one_sided = wilcoxon_one_sided_less(a, b);
    CHECK(one_sided < 1e-6);
    CHECK(wilcoxon_one_sided_less(b, a) > 0.99);
}

TEST_CASE("one-sided wilcoxon on the exact path") {
    const double a[] = {1.0, 2.0};
    const double b[] = {3.0, 4.0};
    CHECK(wilcoxon_one_sided_less(a, b) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("bonferroni decisions") {
    CHECK_FALSE(bonferroni_significant(0.02, 3, 0.05));  // 0.02 > 0.05/3
    CHECK(bonferroni_significant(0.01, 3, 0.05));
    CHECK(bonferroni_significant(0.04, 1, 0.05));
    CHECK_THROWS_AS(bonferroni_significant(0.01, 0, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(bonferroni_significant(0.01, 3, 1.5), std::invalid_argument);
}

namespace {

TrialRecord record_with(double q, std::uint64_t evaluations, std::size_t trial, bool done = true,
                        bool censored = false) {
    TrialRecord r;
    r.plan_id = "t";
    r.problem = ProblemKind::jump;
    r.n = 8;
    r.k = 3;
    r.algorithm = AlgorithmKind::one_plus_one_ea;
    r.lambda = 1;
    r.q = q;
    r.trial = trial;
    r.evaluations = evaluations;
    r.done = done;
    r.censored = censored && !done;
    return r;
}

}  // namespace

TEST_CASE("pvalue table: identical samples give p = 1 rows") {
    std::vector<TrialRecord> records;
    std::size_t trial = 0;
    for (std::uint64_t v : {10, 20, 30, 40}) records.push_back(record_with(0.0, v, trial++));
    for (std::uint64_t v : {10, 20, 30, 40}) records.push_back(record_with(0.5, v, trial++));
    const auto rows = pvalue_table(records, 0.0);
    REQUIRE(rows.size() == 2);
    for (const PvalueRow& row : rows) {
        REQUIRE(row.p.has_value());
        CHECK(*row.p == doctest::Approx(1.0));
        CHECK(row.n == 8);
        CHECK(row.q == 0.5);
        CHECK(row.algorithm == "one_plus_one_ea");
        CHECK(row.lambda_rule == "1");
    }
    CHECK(rows[0].test == 'T');
    CHECK(rows[1].test == 'W');
}

TEST_CASE("pvalue table: missing or censored-only groups yield absent p") {
    std::vector<TrialRecord> records;
    std::size_t trial = 0;
    // no q=0 baseline at all
    for (std::uint64_t v : {10, 20, 30}) records.push_back(record_with(1.0, v, trial++));
    auto rows = pvalue_table(records, 0.0);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].p.has_value());

    // baseline fine, comparison censored-only
    records.clear();
    trial = 0;
    for (std::uint64_t v : {10, 20, 30}) records.push_back(record_with(0.0, v, trial++));
    records.push_back(record_with(1.0, 999, trial++, false, true));
    records.push_back(record_with(1.0, 999, trial++, false, true));
    rows = pvalue_table(records, 0.0);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].p.has_value());
    CHECK_FALSE(rows[1].p.has_value());
}

TEST_CASE("pvalue table separates settings by lambda") {
    std::vector<TrialRecord> records;
    std::size_t trial = 0;
    for (std::uint64_t v : {10, 20, 30}) records.push_back(record_with(0.0, v, trial++));
    for (std::uint64_t v : {12, 22, 32}) records.push_back(record_with(0.5, v, trial++));
    for (std::uint64_t v : {10, 20, 30}) {
        TrialRecord r = record_with(0.0, v, trial++);
        r.algorithm = AlgorithmKind::one_plus_lambda_ea;
        r.lambda = 4;
        records.push_back(r);
    }
    // the lambda=4 setting has no non-baseline levels: no rows for it
    const auto rows = pvalue_table(records, 0.0);
    CHECK(rows.size() == 2);
    for (const PvalueRow& row : rows) CHECK(row.p.has_value());
}
