#include "neb/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "neb/oracle.hpp"
#include "neb/plan_io.hpp"
#include "neb/stats.hpp"

namespace neb::cli {

namespace {

// lambda-rule and q labels per trial index, recovered by re-expanding the
// plan the results came from.
struct PlanLabels {
    std::string plan_id;
    std::vector<std::string> lambda_rule;  // indexed by trial
    std::vector<std::string> q;
    std::vector<std::uint64_t> seed;

    bool covers(const TrialRecord& r) const {
        return r.plan_id == plan_id && r.trial < seed.size() && r.seed == seed[r.trial];
    }
};

std::optional<PlanLabels> load_labels(const std::filesystem::path& plan_path,
                                      std::ostream& diag) {
    if (plan_path.empty()) return std::nullopt;
    const ExperimentPlan plan = load_plan(plan_path);
    const Expansion expansion = expand(plan);
    PlanLabels labels;
    labels.plan_id = plan.id;
    labels.lambda_rule.reserve(expansion.trials.size());
    for (const TrialConfig& config : expansion.trials) {
        labels.lambda_rule.push_back(plan.algorithms[config.algorithm_index].lambda_rule.label());
        labels.q.push_back(plan.noise[config.noise_index].rate.label());
        labels.seed.push_back(config.seed);
    }
    diag << "labels from plan '" << plan.id << "' (" << expansion.trials.size() << " trials)\n";
    return labels;
}

std::string lambda_rule_label(const std::optional<PlanLabels>& labels, const TrialRecord& r) {
    if (labels && labels->covers(r)) return labels->lambda_rule[r.trial];
    return infer_lambda_rule_label(r.algorithm, r.lambda, r.n, r.k.value_or(0));
}

std::string q_label(const std::optional<PlanLabels>& labels, const TrialRecord& r) {
    if (labels && labels->covers(r)) return labels->q[r.trial];
    return infer_q_label(r.q, r.n);
}

}  // namespace

ExperimentPlan desk_scale(const ExperimentPlan& plan) {
    ExperimentPlan scaled = plan;
    scaled.id += "_desk";
    scaled.replications = std::min(plan.replications, 30u);
    scaled.budget = std::min<std::uint64_t>(plan.budget, 100'000'000);
    scaled.problems.clear();
    for (const ProblemSpec& problem : plan.problems) {
        std::size_t cap = 512;
        if (problem.kind == ProblemKind::leading_ones) cap = 128;
        if (problem.kind == ProblemKind::jump) cap = 32;
        if (problem.n <= cap) scaled.problems.push_back(problem);
    }
    if (scaled.problems.empty())
        throw std::invalid_argument("desk scale removed every problem size from the plan");
    return scaled;
}

int cmd_run(const RunOptions& options, std::ostream& diag) {
    ExperimentPlan plan;
    try {
        plan = load_plan(options.plan_path);
        if (options.desk_scale) plan = desk_scale(plan);
    } catch (const std::invalid_argument& err) {
        diag << "error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& err) {
        diag << "error: " << err.what() << "\n";
        return kExitIo;
    }

    try {
        const Expansion expansion = expand(plan);
        for (const std::string& warning : expansion.warnings) diag << "warning: " << warning << "\n";
        diag << "plan '" << plan.id << "': " << expansion.trials.size() << " trials on "
             << options.workers << " worker(s)\n";
        const auto records = execute_to_csv(plan, options.workers, options.out);
        std::size_t done = 0, censored = 0;
        for (const TrialRecord& r : records) {
            done += r.done;
            censored += r.censored;
        }
        diag << "wrote " << records.size() << " records to " << options.out.string() << " ("
             << done << " done, " << censored << " censored)\n";
    } catch (const std::invalid_argument& err) {
        diag << "error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& err) {
        diag << "error: " << err.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_stats(const StatsOptions& options, std::ostream& out_stream, std::ostream& diag) {
    std::vector<TrialRecord> records;
    std::optional<PlanLabels> labels;
    try {
        records = read_records_csv_file(options.results);
        labels = load_labels(options.plan, diag);
    } catch (const std::invalid_argument& err) {
        diag << "error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& err) {
        diag << "error: " << err.what() << "\n";
        return kExitIo;
    }
    if (records.empty()) {
        diag << "error: results file has no records\n";
        return kExitValidation;
    }

    const auto rows = pvalue_table(records, options.baseline_q, [&](const TrialRecord& r) {
        return lambda_rule_label(labels, r);
    });

    std::ostringstream body;
    body << kPvalueCsvHeader << ",significant\n";
    for (const PvalueRow& row : rows) {
        body << row.n << ',' << row.algorithm << ',' << row.lambda_rule << ',' << row.test << ','
             << format_double(row.q) << ',';
        if (row.p) {
            body << format_double(*row.p) << ','
                 << (bonferroni_significant(*row.p, options.comparisons, options.alpha) ? "true"
                                                                                        : "false");
        } else {
            body << "-,-";
        }
        body << '\n';
    }

    if (options.out.empty()) {
        out_stream << body.str();
    } else {
        std::ofstream out(options.out, std::ios::trunc);
        if (!out) {
            diag << "error: cannot open " << options.out.string() << "\n";
            return kExitIo;
        }
        out << body.str();
    }
    return kExitOk;
}

int cmd_plotdata(const PlotdataOptions& options, std::ostream& out_stream, std::ostream& diag) {
    std::vector<TrialRecord> records;
    std::optional<PlanLabels> labels;
    try {
        records = read_records_csv_file(options.results);
        labels = load_labels(options.plan, diag);
    } catch (const std::invalid_argument& err) {
        diag << "error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& err) {
        diag << "error: " << err.what() << "\n";
        return kExitIo;
    }

    // setting = (problem, algorithm, lambda_rule, q); one output row per n.
    using Key = std::tuple<std::string, std::string, std::string, std::string, std::size_t>;
    struct Cell {
        std::vector<double> completed;
        std::size_t censored = 0;
    };
    std::map<Key, Cell> cells;
    for (const TrialRecord& r : records) {
        Key key{std::string(to_string(r.problem)), std::string(to_string(r.algorithm)),
                lambda_rule_label(labels, r), q_label(labels, r), r.n};
        Cell& cell = cells[key];
        if (r.done)
            cell.completed.push_back(static_cast<double>(r.evaluations));
        else if (r.censored)
            ++cell.censored;
    }

    std::ostringstream body;
    body << "problem,algorithm,lambda_rule,q,n,mean,std,mean_normalized,std_normalized,"
            "completed,censored\n";
    for (const auto& [key, cell] : cells) {
        const auto& [problem, algorithm, rule, q, n] = key;
        const GroupStats stats = aggregate_runtimes(cell.completed, cell.censored);
        const double factor = normalization_factor(options.normalize, n);
        body << problem << ',' << algorithm << ',' << rule << ',' << q << ',' << n << ',';
        if (stats.mean) body << format_double(*stats.mean);
        body << ',';
        if (stats.stddev) body << format_double(*stats.stddev);
        body << ',';
        if (stats.mean) body << format_double(*stats.mean / factor);
        body << ',';
        if (stats.stddev) body << format_double(*stats.stddev / factor);
        body << ',' << stats.completed << ',' << stats.censored << '\n';
    }

    if (options.out.empty()) {
        out_stream << body.str();
    } else {
        std::ofstream out(options.out, std::ios::trunc);
        if (!out) {
            diag << "error: cannot open " << options.out.string() << "\n";
            return kExitIo;
        }
        out << body.str();
    }
    return kExitOk;
}

int cmd_oracle(const OracleOptions& options, std::ostream& out_stream, std::ostream& diag) {
    try {
        ProblemSpec problem = options.problem == "jump"
                                  ? ProblemSpec::jump(options.n, options.k)
                                  : ProblemSpec::one_max(options.n);
        if (options.problem != "jump" && options.problem != "one_max")
            throw std::invalid_argument("oracle supports one_max and jump only");

        NoiseRate rate = NoiseRate::numeric(0.0);
        if (options.q == "ln_n_over_n") rate = NoiseRate::ln_n_over_n();
        else if (options.q == "one_over_6e") rate = NoiseRate::one_over_6e();
        else {
            std::size_t used = 0;
            const double v = std::stod(options.q, &used);
            if (used != options.q.size() || v < 0.0)
                throw std::invalid_argument("bad q rate '" + options.q + "'");
            rate = NoiseRate::numeric(v);
        }
        const double q = rate.resolve(options.n);
        const NoiseModel noise = q == 0.0 ? NoiseModel::none() : NoiseModel::bitwise(q);

        const OracleResult result =
            expected_runtime_1p1({problem, noise, options.count_parent_reeval});
        if (result.diverged) {
            diag << "error: expectation diverged (optimum unreachable)\n";
            return kExitValidation;
        }
        char buffer[64];
        std::snprintf(buffer, sizeof buffer, "%.12g", result.expected_evaluations);
        out_stream << buffer << "\n";
    } catch (const std::exception& err) {
        diag << "error: " << err.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace neb::cli
