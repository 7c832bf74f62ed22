#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neb/harness.hpp"

namespace neb {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// P(|T_df| >= |t|) for Student's t.
double student_t_two_sided_p(double t, double df);

// P(Z >= z) for a standard normal.
double normal_sf(double z);

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

// Welch's unequal-variance t-test, two-sided, with Welch-Satterthwaite
// degrees of freedom. Both samples need >= 2 values. When both variances
// are zero the p-value degenerates to 1 (equal means) or 0 (different).
WelchResult welch_t(std::span<const double> a, std::span<const double> b);

struct WilcoxonResult {
    double p = 1.0;
    bool exact = false;
    double w = 0.0;  // rank sum of the first sample, mid-ranks
    double z = 0.0;  // normal approximation statistic (continuity-corrected)
};

// Two-sided Wilcoxon rank-sum test. Exact distribution (dynamic program
// over rank subsets) when min(|a|,|b|) <= 12 and there are no ties;
// otherwise normal approximation with tie and continuity corrections.
WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

// One-sided variant for the alternative "a tends smaller than b".
double wilcoxon_one_sided_less(std::span<const double> a, std::span<const double> b);

// True iff p < alpha/m.
bool bonferroni_significant(double p, unsigned comparisons, double alpha);

struct PvalueRow {
    std::string problem;
    std::size_t n = 0;
    std::string algorithm;
    std::string lambda_rule;
    char test = 'T';  // 'T' Welch, 'W' Wilcoxon
    double q = 0.0;
    std::optional<double> p;  // absent when either group has < 2 completed trials
};

inline constexpr std::string_view kPvalueCsvHeader = "n,algorithm,lambda_rule,test,q,p";

// Per-setting comparison of each non-baseline noise level against the
// baseline (default q = 0), one row per test. Settings are keyed by
// (problem, n, k, algorithm, lambda, p, c); censored trials are excluded
// from the samples. `lambda_rule_label`, when given, overrides the
// best-effort label inference.
std::vector<PvalueRow> pvalue_table(
    std::span<const TrialRecord> records, double baseline_q = 0.0,
    const std::function<std::string(const TrialRecord&)>& lambda_rule_label = {});

}  // namespace neb
