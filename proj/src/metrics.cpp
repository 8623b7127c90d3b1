#include "cocopf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cocopf {

ErtResult compute_ert(std::span<const TrialRecord> trials, double delta_f) {
    if (trials.empty())
        throw std::invalid_argument("compute_ert: empty trial list");
    for (const TrialRecord& t : trials) {
        if (t.function_id != trials.front().function_id || t.dim != trials.front().dim ||
            t.solver_label != trials.front().solver_label)
            throw std::invalid_argument("compute_ert: trials mix (function, dim, solver)");
    }

    ErtResult out;
    out.delta_f = delta_f;
    out.n_trials = static_cast<long>(trials.size());
    double spent = 0.0;
    for (const TrialRecord& t : trials) {
        const auto hit = t.hit_for(delta_f);
        if (hit) {
            ++out.n_success;
            spent += static_cast<double>(*hit);
        } else {
            spent += static_cast<double>(t.evals_total);
        }
    }
    out.ert = out.n_success > 0 ? spent / out.n_success
                                : std::numeric_limits<double>::infinity();
    return out;
}

double bootstrap_runlength(std::span<const TrialRecord> trials, double delta_f, Rng& rng) {
    if (trials.empty())
        throw std::invalid_argument("bootstrap_runlength: empty trial list");
    bool any_success = false;
    for (const TrialRecord& t : trials)
        if (t.succeeded_at(delta_f))
            any_success = true;
    if (!any_success)
        return std::numeric_limits<double>::infinity();

    double total = 0.0;
    for (;;) {
        const TrialRecord& draw = trials[rng.index(trials.size())];
        const auto hit = draw.hit_for(delta_f);
        if (hit)
            return total + static_cast<double>(*hit);
        total += static_cast<double>(draw.evals_total);
    }
}

EcdfCurve compute_ecdf(const std::vector<std::vector<TrialRecord>>& trials_by_function,
                       std::span<const TargetSpec> targets, std::span<const double> budgets,
                       int samples_per_pair, Rng& rng) {
    if (trials_by_function.empty())
        throw std::invalid_argument("compute_ecdf: no trial groups");
    if (targets.empty())
        throw std::invalid_argument("compute_ecdf: no targets");
    if (samples_per_pair < 1)
        throw std::invalid_argument("compute_ecdf: samples_per_pair must be positive");
    if (!std::is_sorted(budgets.begin(), budgets.end()))
        throw std::invalid_argument("compute_ecdf: budgets must ascend");

    int dim = 0;
    for (const auto& group : trials_by_function) {
        if (group.empty())
            throw std::invalid_argument("compute_ecdf: empty trial group");
        for (const TrialRecord& t : group) {
            if (dim == 0)
                dim = t.dim;
            if (t.dim != dim)
                throw std::invalid_argument("compute_ecdf: trials mix dimensions");
        }
    }

    // Count, per budget index, how many bootstrap run lengths land in
    // (budgets[i-1], budgets[i]]; prefix sums then give the curve.
    std::vector<long> bin_counts(budgets.size() + 1, 0);
    long total_samples = 0;
    for (const auto& group : trials_by_function) {
        for (const TargetSpec& target : targets) {
            for (int s = 0; s < samples_per_pair; ++s) {
                const double len = bootstrap_runlength(group, target.delta_f, rng);
                ++total_samples;
                const double normalized = len / dim;
                const auto it = std::lower_bound(budgets.begin(), budgets.end(), normalized);
                ++bin_counts[static_cast<std::size_t>(it - budgets.begin())];
            }
        }
    }

    EcdfCurve curve;
    curve.budgets.assign(budgets.begin(), budgets.end());
    curve.proportion.resize(budgets.size());
    long cumulative = 0;
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        cumulative += bin_counts[i];
        curve.proportion[i] = static_cast<double>(cumulative) / total_samples;
    }
    return curve;
}

std::vector<double> default_budget_grid() {
    constexpr int n = 61;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = std::pow(10.0, 4.0 * i / (n - 1));
    grid.front() = 1.0;
    grid.back() = 1e4;
    return grid;
}

} // namespace cocopf
