#include "neb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace neb {

std::uint32_t LambdaRule::resolve(std::size_t n, std::size_t k, bool* clamped) const {
    if (clamped) *clamped = false;
    if (kind == Kind::constant) return value;
    const double dn = static_cast<double>(n);
    double v = 0.0;
    switch (kind) {
    case Kind::ln_n: v = std::log(dn); break;
    case Kind::half_ln_n: v = std::log(dn) / 2.0; break;
    case Kind::sqrt_n: v = std::sqrt(dn); break;
    case Kind::half_n: v = dn / 2.0; break;
    case Kind::jump_heavy:
        if (k < 1) throw std::invalid_argument("LambdaRule: jump_heavy needs a gap size");
        v = std::pow(std::sqrt(dn), static_cast<double>(k - 1)) /
            std::pow(std::sqrt(static_cast<double>(k)), static_cast<double>(k));
        break;
    case Kind::constant: break;
    }
    auto rounded = static_cast<std::int64_t>(std::llround(v));
    if (rounded < 1) {
        if (clamped) *clamped = true;
        rounded = 1;
    }
    return static_cast<std::uint32_t>(rounded);
}

std::string LambdaRule::label() const {
    switch (kind) {
    case Kind::constant: return std::to_string(value);
    case Kind::ln_n: return "ln_n";
    case Kind::half_ln_n: return "half_ln_n";
    case Kind::sqrt_n: return "sqrt_n";
    case Kind::half_n: return "half_n";
    case Kind::jump_heavy: return "jump_heavy";
    }
    throw std::logic_error("LambdaRule: unknown kind");
}

double NoiseRate::resolve(std::size_t n) const {
    switch (kind) {
    case Kind::numeric: return value;
    case Kind::ln_n_over_n: return std::log(static_cast<double>(n)) / static_cast<double>(n);
    case Kind::one_over_6e: return 1.0 / (6.0 * std::exp(1.0));
    }
    throw std::logic_error("NoiseRate: unknown kind");
}

std::string NoiseRate::label() const {
    switch (kind) {
    case Kind::numeric: return format_double(value);
    case Kind::ln_n_over_n: return "ln_n_over_n";
    case Kind::one_over_6e: return "one_over_6e";
    }
    throw std::logic_error("NoiseRate: unknown kind");
}

NoiseModel NoiseSetting::resolve(std::size_t n) const {
    const double q = rate.resolve(n);
    switch (kind) {
    case NoiseKind::none: return NoiseModel::none();
    case NoiseKind::bitwise: return NoiseModel::bitwise(q);
    case NoiseKind::one_bit: return NoiseModel::one_bit(q);
    }
    throw std::logic_error("NoiseSetting: unknown kind");
}

AlgorithmSpec AlgorithmTemplate::instantiate(const ProblemSpec& problem, bool* clamped) const {
    const std::uint32_t lambda = lambda_rule.resolve(problem.n, problem.k, clamped);
    switch (kind) {
    case AlgorithmKind::one_plus_one_ea: return AlgorithmSpec::one_plus_one();
    case AlgorithmKind::one_plus_lambda_ea: return AlgorithmSpec::one_plus_lambda(lambda);
    case AlgorithmKind::one_ll_ga: {
        const double sqrt_rate =
            std::sqrt(static_cast<double>(problem.k) / static_cast<double>(problem.n));
        const double p = p_rule == RateRule::standard
                             ? static_cast<double>(lambda) / static_cast<double>(problem.n)
                             : sqrt_rate;
        const double c = c_rule == RateRule::standard ? 1.0 / static_cast<double>(lambda)
                                                      : sqrt_rate;
        return AlgorithmSpec::ga(lambda, p, c);
    }
    }
    throw std::logic_error("AlgorithmTemplate: unknown kind");
}

void ExperimentPlan::validate() const {
    if (id.empty()) throw std::invalid_argument("plan: id must be non-empty");
    if (id.find_first_of(",\n\r") != std::string::npos)
        throw std::invalid_argument("plan: id must not contain commas or newlines");
    if (problems.empty() || algorithms.empty() || noise.empty())
        throw std::invalid_argument("plan: every grid must be non-empty");
    if (replications < 1) throw std::invalid_argument("plan: replications must be >= 1");
    if (budget < 1) throw std::invalid_argument("plan: budget must be >= 1");
    for (const auto& problem : problems) {
        if (problem.kind == ProblemKind::jump && (problem.k < 1 || problem.k >= problem.n))
            throw std::invalid_argument("plan: jump requires 1 <= k < n");
        if (normalization == Normalization::n_ln_n && problem.n < 2)
            throw std::invalid_argument("plan: n_ln_n normalization requires n >= 2");
        for (const auto& algo : algorithms) {
            if (algo.kind != AlgorithmKind::one_ll_ga &&
                (algo.p_rule != AlgorithmTemplate::RateRule::standard ||
                 algo.c_rule != AlgorithmTemplate::RateRule::standard))
                throw std::invalid_argument("plan: p_rule/c_rule apply to the GA only");
            const bool needs_k = algo.lambda_rule.kind == LambdaRule::Kind::jump_heavy ||
                                 algo.p_rule == AlgorithmTemplate::RateRule::sqrt_k_over_n ||
                                 algo.c_rule == AlgorithmTemplate::RateRule::sqrt_k_over_n;
            if (needs_k && problem.kind != ProblemKind::jump)
                throw std::invalid_argument(
                    "plan: jump_heavy / sqrt_k_over_n rules need a jump problem");
        }
        for (const auto& setting : noise) setting.resolve(problem.n).validate(problem.n);
    }
}

Expansion expand(const ExperimentPlan& plan) {
    plan.validate();
    Expansion expansion;
    expansion.trials.reserve(plan.problems.size() * plan.algorithms.size() * plan.noise.size() *
                             plan.replications);
    std::size_t index = 0;
    for (std::size_t pi = 0; pi < plan.problems.size(); ++pi) {
        for (std::size_t ai = 0; ai < plan.algorithms.size(); ++ai) {
            bool clamped = false;
            const AlgorithmSpec algo =
                plan.algorithms[ai].instantiate(plan.problems[pi], &clamped);
            algo.validate();
            if (plan.algorithms[ai].kind == AlgorithmKind::one_ll_ga && algo.p > 1.0)
                throw std::invalid_argument("plan: GA mutation rate lambda/n exceeds 1");
            if (clamped)
                expansion.warnings.push_back(
                    "lambda rule '" + plan.algorithms[ai].lambda_rule.label() +
                    "' resolved below 1 for n=" + std::to_string(plan.problems[pi].n) +
                    "; clamped to 1");
            for (std::size_t qi = 0; qi < plan.noise.size(); ++qi) {
                const NoiseModel noise = plan.noise[qi].resolve(plan.problems[pi].n);
                for (std::uint32_t rep = 0; rep < plan.replications; ++rep, ++index) {
                    expansion.trials.push_back(TrialConfig{
                        index, pi, ai, qi, rep, plan.problems[pi], algo, noise,
                        derive_seed(plan.master_seed, index)});
                }
            }
        }
    }
    return expansion;
}

namespace {

TrialRecord record_for(const ExperimentPlan& plan, const TrialConfig& config) {
    TrialRecord record;
    record.plan_id = plan.id;
    record.problem = config.problem.kind;
    record.n = config.problem.n;
    if (config.problem.kind == ProblemKind::jump) record.k = config.problem.k;
    record.algorithm = config.algorithm.kind;
    record.lambda = config.algorithm.lambda;
    if (config.algorithm.kind == AlgorithmKind::one_ll_ga) {
        record.p = config.algorithm.p;
        record.c = config.algorithm.c;
    }
    record.q = config.noise.kind == NoiseKind::none ? 0.0 : config.noise.q;
    record.trial = config.trial_index;
    record.seed = config.seed;
    return record;
}

}  // namespace

std::vector<TrialRecord> execute(const ExperimentPlan& plan, unsigned workers,
                                 const std::function<void(const TrialRecord&)>& on_record,
                                 const std::function<bool(std::size_t)>& skip) {
    const Expansion expansion = expand(plan);
    std::vector<TrialRecord> records(expansion.trials.size());
    std::atomic<std::size_t> next{0};
    std::mutex record_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= expansion.trials.size()) break;
            if (skip && skip(i)) continue;
            const TrialConfig& config = expansion.trials[i];
            TrialRecord record = record_for(plan, config);
            const auto started = std::chrono::steady_clock::now();
            try {
                const TrialResult result =
                    run(config.problem, config.algorithm, config.noise, config.seed, plan.budget,
                        plan.count_parent_reeval);
                record.evaluations = result.evaluations;
                record.iterations = result.iterations;
                record.done = result.done;
                record.censored = result.censored;
            } catch (const std::exception&) {
                // failed trial: neither done nor censored, kept as a row
            }
            record.wall_ms = static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - started)
                    .count());
            records[i] = record;
            if (on_record) {
                std::lock_guard lock(record_mutex);
                on_record(records[i]);
            }
        }
    };

    const unsigned thread_count = std::max(1u, std::min<unsigned>(
        workers, static_cast<unsigned>(expansion.trials.size())));
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (unsigned i = 0; i < thread_count; ++i) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }
    return records;
}

namespace {

void write_record_row(std::ostream& os, const TrialRecord& r) {
    os << r.plan_id << ',' << to_string(r.problem) << ',' << r.n << ',';
    if (r.k) os << *r.k;
    os << ',' << to_string(r.algorithm) << ',' << r.lambda << ',';
    if (r.p) os << format_double(*r.p);
    os << ',';
    if (r.c) os << format_double(*r.c);
    os << ',' << format_double(r.q) << ',' << r.trial << ',' << r.seed << ',' << r.evaluations
       << ',' << r.iterations << ',' << (r.done ? "true" : "false") << ','
       << (r.censored ? "true" : "false") << ',' << r.wall_ms << '\n';
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

template <class T>
T parse_number(const std::string& field, const char* what) {
    T out{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw std::invalid_argument(std::string("results csv: bad ") + what + " value '" +
                                    field + "'");
    return out;
}

double parse_real(const std::string& field, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("results csv: bad ") + what + " value '" +
                                    field + "'");
    }
}

bool parse_bool(const std::string& field, const char* what) {
    if (field == "true") return true;
    if (field == "false") return false;
    throw std::invalid_argument(std::string("results csv: bad ") + what + " value '" + field +
                                "'");
}

}  // namespace

void write_records_csv(std::ostream& os, std::span<const TrialRecord> records) {
    os << kTrialCsvHeader << '\n';
    for (const TrialRecord& r : records) write_record_row(os, r);
}

std::vector<TrialRecord> read_records_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("results csv: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTrialCsvHeader) throw std::invalid_argument("results csv: unexpected header");
    std::vector<TrialRecord> records;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 16)
            throw std::invalid_argument("results csv: expected 16 fields, got " +
                                        std::to_string(fields.size()));
        TrialRecord r;
        r.plan_id = fields[0];
        r.problem = problem_kind_from(fields[1]);
        r.n = parse_number<std::size_t>(fields[2], "n");
        if (!fields[3].empty()) r.k = parse_number<std::size_t>(fields[3], "k");
        r.algorithm = algorithm_kind_from(fields[4]);
        r.lambda = parse_number<std::uint32_t>(fields[5], "lambda");
        if (!fields[6].empty()) r.p = parse_real(fields[6], "p");
        if (!fields[7].empty()) r.c = parse_real(fields[7], "c");
        r.q = parse_real(fields[8], "q");
        r.trial = parse_number<std::size_t>(fields[9], "trial");
        r.seed = parse_number<std::uint64_t>(fields[10], "seed");
        r.evaluations = parse_number<std::uint64_t>(fields[11], "evaluations");
        r.iterations = parse_number<std::uint64_t>(fields[12], "iterations");
        r.done = parse_bool(fields[13], "done");
        r.censored = parse_bool(fields[14], "censored");
        r.wall_ms = parse_number<std::uint64_t>(fields[15], "wall_ms");
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<TrialRecord> read_records_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open results file: " + path.string());
    return read_records_csv(in);
}

std::vector<TrialRecord> execute_to_csv(const ExperimentPlan& plan, unsigned workers,
                                        const std::filesystem::path& out) {
    const Expansion expansion = expand(plan);
    const std::filesystem::path partial = out.string() + ".partial";

    // Recover finished trials from a previous run of the same plan.
    std::unordered_map<std::size_t, TrialRecord> finished;
    for (const auto& path : {out, partial}) {
        if (!std::filesystem::exists(path)) continue;
        std::vector<TrialRecord> previous;
        try {
            previous = read_records_csv_file(path);
        } catch (const std::exception&) {
            continue;  // unreadable leftovers are rerun
        }
        for (auto& record : previous) {
            if (record.plan_id != plan.id || record.trial >= expansion.trials.size()) continue;
            if (record.seed != expansion.trials[record.trial].seed) continue;
            if (!record.done && !record.censored) continue;  // failed row: rerun
            finished.emplace(record.trial, std::move(record));
        }
    }

    std::ofstream append(partial, std::ios::app);
    if (!append) throw std::runtime_error("cannot open partial file: " + partial.string());
    if (std::filesystem::file_size(partial) == 0) append << kTrialCsvHeader << '\n';

    std::vector<TrialRecord> records;
    if (finished.size() == expansion.trials.size()) {
        for (std::size_t i = 0; i < expansion.trials.size(); ++i)
            records.push_back(finished.at(i));
    } else {
        records = execute(
            plan, workers,
            [&](const TrialRecord& record) {
                write_record_row(append, record);
                append.flush();
            },
            [&](std::size_t index) { return finished.contains(index); });
        for (auto& [index, record] : finished) records[index] = record;
    }

    append.close();
    std::ofstream final_out(out, std::ios::trunc);
    if (!final_out) throw std::runtime_error("cannot open output file: " + out.string());
    write_records_csv(final_out, records);
    final_out.close();
    std::filesystem::remove(partial);
    return records;
}

std::string format_double(double v) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buffer, ptr);
}

GroupStats aggregate_runtimes(std::span<const double> completed_runtimes, std::size_t censored) {
    GroupStats stats;
    stats.completed = completed_runtimes.size();
    stats.censored = censored;
    if (completed_runtimes.empty()) return stats;
    double sum = 0.0;
    for (double v : completed_runtimes) sum += v;
    const double mean = sum / static_cast<double>(completed_runtimes.size());
    stats.mean = mean;
    if (completed_runtimes.size() >= 2) {
        double ss = 0.0;
        for (double v : completed_runtimes) ss += (v - mean) * (v - mean);
        stats.stddev = std::sqrt(ss / static_cast<double>(completed_runtimes.size() - 1));
    }
    return stats;
}

double normalization_factor(Normalization norm, std::size_t n) {
    const double dn = static_cast<double>(n);
    switch (norm) {
    case Normalization::none: return 1.0;
    case Normalization::n_ln_n: return dn * std::log(dn);
    case Normalization::n_squared: return dn * dn;
    }
    throw std::logic_error("normalization_factor: unknown kind");
}

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::one_max: return "one_max";
    case ProblemKind::leading_ones: return "leading_ones";
    case ProblemKind::jump: return "jump";
    }
    throw std::logic_error("unknown ProblemKind");
}

std::string_view to_string(AlgorithmKind kind) {
    switch (kind) {
    case AlgorithmKind::one_plus_one_ea: return "one_plus_one_ea";
    case AlgorithmKind::one_plus_lambda_ea: return "one_plus_lambda_ea";
    case AlgorithmKind::one_ll_ga: return "one_ll_ga";
    }
    throw std::logic_error("unknown AlgorithmKind");
}

std::string_view to_string(NoiseKind kind) {
    switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::bitwise: return "bitwise";
    case NoiseKind::one_bit: return "one_bit";
    }
    throw std::logic_error("unknown NoiseKind");
}

std::string_view to_string(Normalization norm) {
    switch (norm) {
    case Normalization::none: return "none";
    case Normalization::n_ln_n: return "n_ln_n";
    case Normalization::n_squared: return "n_squared";
    }
    throw std::logic_error("unknown Normalization");
}

ProblemKind problem_kind_from(std::string_view name) {
    if (name == "one_max") return ProblemKind::one_max;
    if (name == "leading_ones") return ProblemKind::leading_ones;
    if (name == "jump") return ProblemKind::jump;
    throw std::invalid_argument("unknown problem kind: " + std::string(name));
}

AlgorithmKind algorithm_kind_from(std::string_view name) {
    if (name == "one_plus_one_ea") return AlgorithmKind::one_plus_one_ea;
    if (name == "one_plus_lambda_ea") return AlgorithmKind::one_plus_lambda_ea;
    if (name == "one_ll_ga") return AlgorithmKind::one_ll_ga;
    throw std::invalid_argument("unknown algorithm kind: " + std::string(name));
}

NoiseKind noise_kind_from(std::string_view name) {
    if (name == "none") return NoiseKind::none;
    if (name == "bitwise") return NoiseKind::bitwise;
    if (name == "one_bit") return NoiseKind::one_bit;
    throw std::invalid_argument("unknown noise kind: " + std::string(name));
}

Normalization normalization_from(std::string_view name) {
    if (name == "none") return Normalization::none;
    if (name == "n_ln_n") return Normalization::n_ln_n;
    if (name == "n_squared") return Normalization::n_squared;
    throw std::invalid_argument("unknown normalization: " + std::string(name));
}

std::string infer_lambda_rule_label(AlgorithmKind algo, std::uint32_t lambda, std::size_t n,
                                    std::size_t k) {
    if (algo == AlgorithmKind::one_plus_one_ea) return "1";
    using Kind = LambdaRule::Kind;
    for (Kind kind : {Kind::ln_n, Kind::half_ln_n, Kind::sqrt_n, Kind::half_n, Kind::jump_heavy}) {
        if (kind == Kind::jump_heavy && k < 1) continue;
        const LambdaRule rule = LambdaRule::named(kind);
        if (rule.resolve(n, k) == lambda) return rule.label();
    }
    return std::to_string(lambda);
}

std::string infer_q_label(double q, std::size_t n) {
    if (q == NoiseRate::ln_n_over_n().resolve(n)) return "ln_n_over_n";
    if (q == NoiseRate::one_over_6e().resolve(n)) return "one_over_6e";
    return format_double(q);
}

}  // namespace neb
