#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "neb/cli.hpp"

namespace {

unsigned default_workers() {
    if (const char* env = std::getenv("NEB_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noisy evolutionary-benchmark runner"};
    app.require_subcommand(1);

    neb::cli::RunOptions run_options;
    run_options.workers = default_workers();
    std::string scale = "full";
    auto* run = app.add_subcommand("run", "execute an experiment plan");
    run->add_option("plan", run_options.plan_path, "plan JSON file")->required();
    run->add_option("--out", run_options.out, "output CSV path")->required();
    run->add_option("--workers", run_options.workers, "parallel trials");
    run->add_option("--scale", scale,
                    "full | desk (desk shrinks reps, problem sizes, and budget)")
        ->check(CLI::IsMember({"full", "desk"}));
    run->add_flag("--desk", run_options.desk_scale, "shorthand for --scale desk");

    neb::cli::StatsOptions stats_options;
    auto* stats = app.add_subcommand("stats", "p-value table against a baseline noise level");
    stats->add_option("results", stats_options.results, "results CSV")->required();
    stats->add_option("--plan", stats_options.plan, "plan file for exact rule labels");
    stats->add_option("--out", stats_options.out, "output CSV path (default stdout)");
    stats->add_option("--baseline-q", stats_options.baseline_q, "baseline noise rate");
    stats->add_option("--alpha", stats_options.alpha, "significance level");
    stats->add_option("--m", stats_options.comparisons, "Bonferroni comparison count");

    neb::cli::PlotdataOptions plot_options;
    std::string normalize = "none";
    auto* plot = app.add_subcommand("plotdata", "per-setting curve data from results");
    plot->add_option("results", plot_options.results, "results CSV")->required();
    plot->add_option("--plan", plot_options.plan, "plan file for exact rule labels");
    plot->add_option("--out", plot_options.out, "output CSV path (default stdout)");
    plot->add_option("--normalize", normalize, "none | n_ln_n | n_squared")
        ->check(CLI::IsMember({"none", "n_ln_n", "n_squared"}));

    neb::cli::OracleOptions oracle_options;
    auto* oracle = app.add_subcommand("oracle", "exact (1+1) EA expected runtime");
    oracle->add_option("--problem", oracle_options.problem, "one_max | jump")
        ->check(CLI::IsMember({"one_max", "jump"}));
    oracle->add_option("-n,--n", oracle_options.n, "problem size (<= 64)")->required();
    oracle->add_option("-k,--k", oracle_options.k, "jump gap size");
    oracle->add_option("-q,--q", oracle_options.q, "noise rate (number or ln_n_over_n/one_over_6e)");
    oracle->add_flag("--count-parent-reeval", oracle_options.count_parent_reeval,
                     "count the parent re-evaluation in each iteration");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        run_options.desk_scale = run_options.desk_scale || scale == "desk";
        return neb::cli::cmd_run(run_options, std::cerr);
    }
    if (stats->parsed()) return neb::cli::cmd_stats(stats_options, std::cout, std::cerr);
    if (plot->parsed()) {
        plot_options.normalize = neb::normalization_from(normalize);
        return neb::cli::cmd_plotdata(plot_options, std::cout, std::cerr);
    }
    if (oracle->parsed()) return neb::cli::cmd_oracle(oracle_options, std::cout, std::cerr);
    return 1;
}
