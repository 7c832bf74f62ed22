#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "neb/harness.hpp"

namespace neb::cli {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

struct RunOptions {
    std::filesystem::path plan_path;
    std::filesystem::path out;
    unsigned workers = 1;
    bool desk_scale = false;  // shrink replications, problem sizes, and budget
};

int cmd_run(const RunOptions& options, std::ostream& diag);

struct StatsOptions {
    std::filesystem::path results;
    std::filesystem::path plan;  // optional; enables exact rule labels
    std::filesystem::path out;   // empty: write the table to stdout
    double baseline_q = 0.0;
    double alpha = 0.05;
    unsigned comparisons = 3;
};

int cmd_stats(const StatsOptions& options, std::ostream& out_stream, std::ostream& diag);

struct PlotdataOptions {
    std::filesystem::path results;
    std::filesystem::path plan;  // optional; enables exact rule labels
    std::filesystem::path out;   // empty: write to stdout
    Normalization normalize = Normalization::none;
};

int cmd_plotdata(const PlotdataOptions& options, std::ostream& out_stream, std::ostream& diag);

struct OracleOptions {
    std::string problem = "one_max";  // one_max or jump
    std::size_t n = 1;
    std::size_t k = 0;     // jump only
    std::string q = "0";   // number or symbolic rate name
    bool count_parent_reeval = false;
};

int cmd_oracle(const OracleOptions& options, std::ostream& out_stream, std::ostream& diag);

// Desk-scale variant of a plan: replications capped at 30, per-benchmark
// problem-size caps (one_max 512, leading_ones 128, jump 32), budget capped
// at 1e8, id suffixed with "_desk".
ExperimentPlan desk_scale(const ExperimentPlan& plan);

}  // namespace neb::cli
