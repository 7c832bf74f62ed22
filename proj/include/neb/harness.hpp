#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neb/algorithms.hpp"
#include "neb/benchmarks.hpp"
#include "neb/noise.hpp"

namespace neb {

enum class Normalization { none, n_ln_n, n_squared };

// Offspring population size as a function of the problem size. Non-integer
// expressions are rounded to nearest with a floor of 1; the resolved value
// is recorded in every trial record.
struct LambdaRule {
    enum class Kind { constant, ln_n, half_ln_n, sqrt_n, half_n, jump_heavy };
    Kind kind = Kind::constant;
    std::uint32_t value = 1;  // constant only

    static LambdaRule constant(std::uint32_t v) { return {Kind::constant, v}; }
    static LambdaRule named(Kind kind) { return {kind, 1}; }

    // jump_heavy = sqrt(n)^(k-1) / sqrt(k)^k and needs k >= 1.
    std::uint32_t resolve(std::size_t n, std::size_t k, bool* clamped = nullptr) const;
    std::string label() const;

    friend bool operator==(const LambdaRule&, const LambdaRule&) = default;
};

// Noise rate, possibly symbolic since q = ln(n)/n depends on the problem
// size; resolved at expansion time.
struct NoiseRate {
    enum class Kind { numeric, ln_n_over_n, one_over_6e };
    Kind kind = Kind::numeric;
    double value = 0.0;  // numeric only

    static NoiseRate numeric(double v) { return {Kind::numeric, v}; }
    static NoiseRate ln_n_over_n() { return {Kind::ln_n_over_n, 0.0}; }
    static NoiseRate one_over_6e() { return {Kind::one_over_6e, 0.0}; }

    double resolve(std::size_t n) const;
    std::string label() const;

    friend bool operator==(const NoiseRate&, const NoiseRate&) = default;
};

struct NoiseSetting {
    NoiseKind kind = NoiseKind::bitwise;
    NoiseRate rate;

    NoiseModel resolve(std::size_t n) const;

    friend bool operator==(const NoiseSetting&, const NoiseSetting&) = default;
};

// Algorithm grid entry: the kind plus rules for lambda and (GA only) the
// mutation rate and crossover bias.
struct AlgorithmTemplate {
    enum class RateRule { standard, sqrt_k_over_n };

    AlgorithmKind kind = AlgorithmKind::one_plus_one_ea;
    LambdaRule lambda_rule = LambdaRule::constant(1);
    RateRule p_rule = RateRule::standard;  // standard: p = lambda/n
    RateRule c_rule = RateRule::standard;  // standard: c = 1/lambda

    AlgorithmSpec instantiate(const ProblemSpec& problem, bool* clamped = nullptr) const;

    friend bool operator==(const AlgorithmTemplate&, const AlgorithmTemplate&) = default;
};

struct ExperimentPlan {
    std::string id;
    std::vector<ProblemSpec> problems;
    std::vector<AlgorithmTemplate> algorithms;
    std::vector<NoiseSetting> noise;
    std::uint32_t replications = 1;
    std::uint64_t master_seed = 0;
    std::uint64_t budget = 1'000'000'000;
    Normalization normalization = Normalization::none;
    bool count_parent_reeval = false;

    void validate() const;

    friend bool operator==(const ExperimentPlan&, const ExperimentPlan&) = default;
};

struct TrialConfig {
    std::size_t trial_index = 0;
    std::size_t problem_index = 0;
    std::size_t algorithm_index = 0;
    std::size_t noise_index = 0;
    std::uint32_t replication = 0;
    ProblemSpec problem;
    AlgorithmSpec algorithm;
    NoiseModel noise;
    std::uint64_t seed = 0;
};

struct Expansion {
    std::vector<TrialConfig> trials;
    std::vector<std::string> warnings;
};

// Cartesian product problems x algorithms x noise x replications, in that
// nesting order; trial seeds derive from (master_seed, flat index). Pure
// function of the plan.
Expansion expand(const ExperimentPlan& plan);

// One run's outcome. `k`, `p`, `c` are absent where not applicable.
struct TrialRecord {
    std::string plan_id;
    ProblemKind problem = ProblemKind::one_max;
    std::size_t n = 0;
    std::optional<std::size_t> k;
    AlgorithmKind algorithm = AlgorithmKind::one_plus_one_ea;
    std::uint32_t lambda = 1;
    std::optional<double> p;
    std::optional<double> c;
    double q = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t evaluations = 0;
    std::uint64_t iterations = 0;
    bool done = false;
    bool censored = false;
    std::uint64_t wall_ms = 0;
};

inline constexpr std::string_view kTrialCsvHeader =
    "plan_id,problem,n,k,algorithm,lambda,p,c,q,trial,seed,evaluations,iterations,done,"
    "censored,wall_ms";

// Runs every trial of the plan on `workers` threads. The result is sorted
// by trial index and is identical for any worker count; `on_record`, when
// given, fires once per finished trial under a lock (completion order).
// Trials whose index satisfies `skip` are left as default records.
std::vector<TrialRecord> execute(const ExperimentPlan& plan, unsigned workers,
                                 const std::function<void(const TrialRecord&)>& on_record = {},
                                 const std::function<bool(std::size_t)>& skip = {});

// Like execute, but appends each finished trial to `<out>.partial` and
// finally writes the sorted CSV to `out`. Completed trials already present
// in `out` or the partial file (matched by plan id, trial index, and seed)
// are not rerun.
std::vector<TrialRecord> execute_to_csv(const ExperimentPlan& plan, unsigned workers,
                                        const std::filesystem::path& out);

void write_records_csv(std::ostream& os, std::span<const TrialRecord> records);
std::vector<TrialRecord> read_records_csv(std::istream& is);
std::vector<TrialRecord> read_records_csv_file(const std::filesystem::path& path);

// Shortest round-trip decimal form.
std::string format_double(double v);

struct GroupStats {
    std::size_t completed = 0;
    std::size_t censored = 0;
    std::optional<double> mean;    // absent for all-censored groups
    std::optional<double> stddev;  // sample std (n-1); absent below 2 values
};

// Censored trials are excluded from mean/std and reported separately.
GroupStats aggregate_runtimes(std::span<const double> completed_runtimes, std::size_t censored);

double normalization_factor(Normalization norm, std::size_t n);

std::string_view to_string(ProblemKind kind);
std::string_view to_string(AlgorithmKind kind);
std::string_view to_string(NoiseKind kind);
std::string_view to_string(Normalization norm);
ProblemKind problem_kind_from(std::string_view name);
AlgorithmKind algorithm_kind_from(std::string_view name);
NoiseKind noise_kind_from(std::string_view name);
Normalization normalization_from(std::string_view name);

// Best-effort labels for records whose plan is not at hand: the first named
// rule (or known symbolic rate) consistent with the value, else the value
// itself.
std::string infer_lambda_rule_label(AlgorithmKind algo, std::uint32_t lambda, std::size_t n,
                                    std::size_t k);
std::string infer_q_label(double q, std::size_t n);

}  // namespace neb
