#pragma once

#include <span>

#include "cocopf/records.hpp"
#include "cocopf/rng.hpp"

namespace cocopf {

struct ErtResult {
    double delta_f = 0.0;
    double ert = 0.0; // +inf when no trial succeeded
    long n_success = 0;
    long n_trials = 0;
};

/// Expected running time at the given precision: evaluations spent before
/// first attainment summed over all trials (unsuccessful trials contribute
/// their full budget), divided by the number of successful trials.
/// All trials must share (function, dim, solver).
ErtResult compute_ert(std::span<const TrialRecord> trials, double delta_f);

/// One simulated-restart run length: draws trials uniformly with
/// replacement, accumulating full budgets of unsuccessful draws until the
/// first successful one, whose attainment evaluations complete the sum.
/// Returns +inf when no trial succeeded.
double bootstrap_runlength(std::span<const TrialRecord> trials, double delta_f, Rng& rng);

struct EcdfCurve {
    std::vector<double> budgets;    // FEvals/D grid, ascending
    std::vector<double> proportion; // fraction of (sample, target) pairs attained
};

/// Bootstrapped run-length distribution over (function, target) pairs.
/// trials_by_function groups one function's trials per entry; all trials
/// must share one dimension. Curve value at budget b is the fraction of
/// drawn run lengths <= b * dim.
EcdfCurve compute_ecdf(const std::vector<std::vector<TrialRecord>>& trials_by_function,
                       std::span<const TargetSpec> targets, std::span<const double> budgets,
                       int samples_per_pair, Rng& rng);

/// Default 61-point log grid of FEvals/D budgets in [1, 1e4], exact endpoints.
std::vector<double> default_budget_grid();

} // namespace cocopf
