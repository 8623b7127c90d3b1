#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "cocopf/portfolio.hpp"

namespace cocopf {

/// Benchmark driver configuration. The solver is either a solo spec or a
/// portfolio plus a selection strategy.
struct ExperimentConfig {
    std::vector<int> functions = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<int> dims = {2, 3, 5, 10, 20};
    int instances = 5; // instance seeds 1..instances
    long maxfev = 10000;
    bool maxfev_per_dim = false; // budget = maxfev * dim when set

    std::optional<OptimizerSpec> solo;
    std::vector<OptimizerSpec> portfolio;
    StrategyConfig strategy;

    double final_delta = 1e-8;
    std::uint64_t master_seed = 1;
    std::filesystem::path output_dir = "results";
    std::string shortname; // defaults to the solver name / strategy label
    std::string comments;
    int jobs = 1;

    std::string solver_label() const;
    long budget_for_dim(int dim) const;
};

struct ExperimentSummary {
    long trials = 0;
    long successes = 0; // best_delta_final <= final_delta
};

/// Runs every (function, dim, instance) trial in deterministic lexicographic
/// order (parallelized across trials when jobs > 1; outputs do not depend on
/// the schedule). Writes one mlog file per trial, records.csv and meta.json
/// into output_dir, and prints one progress line per trial to `progress`.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 std::ostream* progress = nullptr);

/// `f{fid} d{dim} i{inst} {label} evals={n} delta={d:.3e} {t:.1f}s`
std::string progress_report(const TrialRecord& trial, double elapsed_seconds);

/// The per-trial seed, a pure function of the experiment master seed and the
/// trial coordinates (not of execution order).
std::uint64_t trial_seed(std::uint64_t master_seed, int function_id, int dim,
                         std::uint64_t instance_seed);

} // namespace cocopf
