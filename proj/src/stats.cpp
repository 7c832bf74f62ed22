#include "neb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

namespace neb {

namespace {

// Lentz continued fraction for the incomplete beta (Numerical Recipes form).
double betacf(double a, double b, double x) {
    constexpr int max_iterations = 300;
    constexpr double eps = 1e-15;
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iterations; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps) break;
    }
    return h;
}

double sample_mean(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(v.size() - 1);
}

struct RankedData {
    std::vector<double> ranks_a;  // mid-ranks of sample a
    double w = 0.0;               // rank sum of a
    double tie_term = 0.0;        // sum over tie groups of t^3 - t
    bool has_ties = false;
};

RankedData rank_samples(std::span<const double> a, std::span<const double> b) {
    struct Tagged {
        double value;
        bool from_a;
    };
    std::vector<Tagged> merged;
    merged.reserve(a.size() + b.size());
    for (double v : a) merged.push_back({v, true});
    for (double v : b) merged.push_back({v, false});
    std::sort(merged.begin(), merged.end(),
              [](const Tagged& lhs, const Tagged& rhs) { return lhs.value < rhs.value; });

    RankedData out;
    std::size_t i = 0;
    while (i < merged.size()) {
        std::size_t j = i;
        while (j < merged.size() && merged[j].value == merged[i].value) ++j;
        const auto group = static_cast<double>(j - i);
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        if (group > 1.0) {
            out.has_ties = true;
            out.tie_term += group * group * group - group;
        }
        for (std::size_t g = i; g < j; ++g)
            if (merged[g].from_a) {
                out.w += mid_rank;
                out.ranks_a.push_back(mid_rank);
            }
        i = j;
    }
    return out;
}

// Number of size-k subsets of {1..total} with each rank sum; counts stay
// exact in doubles for the sizes gated below.
std::vector<std::vector<double>> rank_sum_counts(std::size_t total, std::size_t k) {
    const std::size_t max_sum = k * total;
    std::vector<std::vector<double>> ways(k + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t item = 1; item <= total; ++item)
        for (std::size_t chosen = std::min(k, item); chosen >= 1; --chosen)
            for (std::size_t sum = max_sum; sum >= item; --sum)
                ways[chosen][sum] += ways[chosen - 1][sum - item];
    return ways;
}

struct ExactTail {
    double p_le = 0.0;
    double p_ge = 0.0;
};

ExactTail exact_tails(std::size_t na, std::size_t nb, double w) {
    const std::size_t total = na + nb;
    const auto ways = rank_sum_counts(total, na);
    double denom = 0.0;
    for (double count : ways[na]) denom += count;
    const auto w_int = static_cast<std::size_t>(std::llround(w));
    ExactTail tails;
    for (std::size_t sum = 0; sum < ways[na].size(); ++sum) {
        if (sum <= w_int) tails.p_le += ways[na][sum];
        if (sum >= w_int) tails.p_ge += ways[na][sum];
    }
    tails.p_le /= denom;
    tails.p_ge /= denom;
    return tails;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("regularized_incomplete_beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("student_t_two_sided_p: df must be positive");
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch_t: both samples need >= 2 values");
    const double mean_a = sample_mean(a);
    const double mean_b = sample_mean(b);
    const double var_a = sample_variance(a, mean_a);
    const double var_b = sample_variance(b, mean_b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());

    if (var_a == 0.0 && var_b == 0.0) {
        // documented degenerate convention
        const double df = na + nb - 2.0;
        if (mean_a == mean_b) return {0.0, df, 1.0};
        const double inf = std::numeric_limits<double>::infinity();
        return {mean_a > mean_b ? inf : -inf, df, 0.0};
    }

    const double se_a = var_a / na;
    const double se_b = var_b / nb;
    const double t = (mean_a - mean_b) / std::sqrt(se_a + se_b);
    const double df = (se_a + se_b) * (se_a + se_b) /
                      (se_a * se_a / (na - 1.0) + se_b * se_b / (nb - 1.0));
    return {t, df, student_t_two_sided_p(t, df)};
}

WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("wilcoxon_rank_sum: both samples need >= 2 values");
    const RankedData ranked = rank_samples(a, b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double total = na + nb;

    WilcoxonResult result;
    result.w = ranked.w;

    const double mean_w = na * (total + 1.0) / 2.0;
    const double variance =
        na * nb / 12.0 * ((total + 1.0) - ranked.tie_term / (total * (total - 1.0)));
    if (variance > 0.0) {
        const double diff = ranked.w - mean_w;
        const double shrunk = std::max(0.0, std::fabs(diff) - 0.5);
        result.z = (diff < 0.0 ? -shrunk : shrunk) / std::sqrt(variance);
    }

    if (!ranked.has_ties && std::min(a.size(), b.size()) <= 12) {
        const ExactTail tails = exact_tails(a.size(), b.size(), ranked.w);
        result.exact = true;
        result.p = std::min(1.0, 2.0 * std::min(tails.p_le, tails.p_ge));
        return result;
    }

    result.p = variance > 0.0 ? std::min(1.0, 2.0 * normal_sf(std::fabs(result.z))) : 1.0;
    return result;
}

double wilcoxon_one_sided_less(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("wilcoxon_one_sided_less: both samples need >= 2 values");
    const RankedData ranked = rank_samples(a, b);
    if (!ranked.has_ties && std::min(a.size(), b.size()) <= 12)
        return exact_tails(a.size(), b.size(), ranked.w).p_le;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double total = na + nb;
    const double mean_w = na * (total + 1.0) / 2.0;
    const double variance =
        na * nb / 12.0 * ((total + 1.0) - ranked.tie_term / (total * (total - 1.0)));
    if (variance <= 0.0) return 1.0;
    const double z = (ranked.w - mean_w + 0.5) / std::sqrt(variance);
    return 1.0 - normal_sf(z);
}

bool bonferroni_significant(double p, unsigned comparisons, double alpha) {
    if (comparisons < 1) throw std::invalid_argument("bonferroni_significant: m must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("bonferroni_significant: alpha must be in (0,1)");
    return p < alpha / static_cast<double>(comparisons);
}

std::vector<PvalueRow> pvalue_table(
    std::span<const TrialRecord> records, double baseline_q,
    const std::function<std::string(const TrialRecord&)>& lambda_rule_label) {
    using SettingKey = std::tuple<std::string, std::size_t, std::size_t, std::string,
                                  std::uint32_t, std::string, std::string>;
    struct Setting {
        std::string lambda_rule;
        std::map<double, std::vector<double>> samples;  // q -> completed runtimes
    };
    std::map<SettingKey, Setting> settings;

    for (const TrialRecord& r : records) {
        SettingKey key{std::string(to_string(r.problem)),
                       r.n,
                       r.k.value_or(0),
                       std::string(to_string(r.algorithm)),
                       r.lambda,
                       r.p ? format_double(*r.p) : "",
                       r.c ? format_double(*r.c) : ""};
        auto& setting = settings[key];
        if (setting.lambda_rule.empty())
            setting.lambda_rule = lambda_rule_label
                                      ? lambda_rule_label(r)
                                      : infer_lambda_rule_label(r.algorithm, r.lambda, r.n,
                                                                r.k.value_or(0));
        if (r.done) setting.samples[r.q].push_back(static_cast<double>(r.evaluations));
        else setting.samples[r.q];  // group exists even if all censored
    }

    std::vector<PvalueRow> rows;
    for (const auto& [key, setting] : settings) {
        const auto baseline_it = setting.samples.find(baseline_q);
        const bool baseline_ok =
            baseline_it != setting.samples.end() && baseline_it->second.size() >= 2;
        for (const auto& [q, sample] : setting.samples) {
            if (q == baseline_q) continue;
            PvalueRow row;
            row.problem = std::get<0>(key);
            row.n = std::get<1>(key);
            row.algorithm = std::get<3>(key);
            row.lambda_rule = setting.lambda_rule;
            row.q = q;
            if (baseline_ok && sample.size() >= 2) {
                row.test = 'T';
                row.p = welch_t(sample, baseline_it->second).p;
                rows.push_back(row);
                row.test = 'W';
                row.p = wilcoxon_rank_sum(sample, baseline_it->second).p;
                rows.push_back(row);
            } else {
                row.p = std::nullopt;
                row.test = 'T';
                rows.push_back(row);
                row.test = 'W';
                rows.push_back(row);
            }
        }
    }
    return rows;
}

}  // namespace neb
