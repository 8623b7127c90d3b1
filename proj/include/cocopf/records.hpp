#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cocopf/problems.hpp"

namespace cocopf {

/// Outcome of one trial: one solver on one (function, dim, instance) triple.
/// hits[i] is the evaluation index at which ladder[i] was first attained.
struct TrialRecord {
    int function_id = 0;
    int dim = 0;
    std::uint64_t instance_seed = 0;
    std::string solver_label;
    long evals_total = 0;
    double best_delta_final = 0.0;
    std::vector<TargetSpec> ladder;
    std::vector<std::optional<long>> hits;

    /// Hit entry for a given precision; the delta must match a ladder rung
    /// (up to tiny relative error), otherwise std::invalid_argument.
    std::optional<long> hit_for(double delta_f) const;
    bool succeeded_at(double delta_f) const { return hit_for(delta_f).has_value(); }
};

/// One per-iteration trace row ("mlog"): which member ran, what it cost and
/// where the member/portfolio incumbents stood afterwards.
struct MLogRow {
    long round = 0;
    int member_index = 0;
    std::string member_name;
    long member_evals = 0; // cumulative evaluations by this member
    long total_evals = 0;  // cumulative evaluations across the population
    double member_best_delta = 0.0;
    double portfolio_best_delta = 0.0;
};

} // namespace cocopf
