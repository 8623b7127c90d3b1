#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "cocopf/basin_hopping.hpp"
#include "cocopf/optimizers.hpp"
#include "cocopf/records.hpp"

namespace cocopf {

/// Online selection policy choosing which population member steps next.
struct StrategyConfig {
    enum class Kind { Unif, EpsilonGreedy };

    Kind kind = Kind::Unif;
    double epsilon = 0.5; // EpsilonGreedy only

    static StrategyConfig unif() { return {Kind::Unif, 0.0}; }
    static StrategyConfig epsilon_greedy(double eps);

    /// "UNIF", or "EG" plus the percentage (eps 0.5 -> "EG50").
    std::string label() const;
};

/// How a member advances. Local methods hop (basin hopping); CMA runs bare
/// and starts over from a fresh uniform point whenever its own stop
/// condition fires, so members stay steppable for the whole trial.
class MemberRunner {
public:
    virtual ~MemberRunner() = default;
    virtual StepOutcome step(ProblemInstance& instance) = 0;
    virtual long init_evals() const = 0;
    virtual const BasinHopper* hopper() const { return nullptr; }
    virtual const Optimizer* bare() const { return nullptr; }
};

struct Member {
    std::string method_name;
    std::unique_ptr<MemberRunner> runner;
    std::vector<double> x; // best coordinates this member ever evaluated
    double y;              // matching best value (+inf before the first step)
    long iterations = 0;
    long evals = 0; // cumulative evaluations consumed by this member
};

/// The portfolio population: an ordered set of suspended runs over one
/// shared problem instance. The population is the instance's sole evaluator,
/// so total_evals() always equals instance.eval_count().
class Population {
public:
    Population(const std::vector<OptimizerSpec>& portfolio, ProblemInstance& instance,
               std::uint64_t seed);

    /// Appends a freshly initialized member; existing members are untouched.
    /// Returns the new index.
    std::size_t add_member(const OptimizerSpec& spec, ProblemInstance& instance,
                           std::uint64_t seed);

    /// Steps member idx once, updating its bookkeeping, the round counter
    /// and the mlog. On BudgetExhausted the evaluations actually consumed
    /// are still accounted before the exception continues.
    StepOutcome step_member(std::size_t idx, ProblemInstance& instance);

    std::size_t size() const { return members_.size(); }
    const Member& member(std::size_t idx) const { return members_.at(idx); }
    long round() const { return round_; }
    long total_evals() const { return total_evals_; }
    const std::vector<MLogRow>& mlog() const { return mlog_; }

    /// Index of the member with the lowest y (ties toward the lowest index).
    std::size_t best_index() const;
    double best_y() const;
    std::vector<double> member_values() const;

private:
    std::vector<Member> members_;
    long round_ = 0;
    long total_evals_ = 0;
    std::vector<MLogRow> mlog_;
};

/// Uniform member choice.
std::size_t select_unif(const Population& pop, Rng& rng);

/// Epsilon-greedy: with probability 1-eps the current best member (ties to
/// the lowest index), otherwise a uniform choice over all members, the best
/// included. Value-only overload for direct testing of the policy.
std::size_t select_epsilon_greedy(std::span<const double> member_values, Rng& rng, double epsilon);
std::size_t select_epsilon_greedy(const Population& pop, Rng& rng, double epsilon);

std::size_t select_member(const Population& pop, const StrategyConfig& strategy, Rng& rng);

struct TrialResult {
    TrialRecord record;
    std::vector<MLogRow> mlog;
};

/// Runs one trial: select member, step it, until the final target is hit or
/// the budget is spent. Budget exhaustion is a normal outcome recorded in
/// the trial. The ladder defaults to the standard 50 targets.
TrialResult run_portfolio_trial(const std::vector<OptimizerSpec>& portfolio,
                                const StrategyConfig& strategy, ProblemInstance& instance,
                                long budget, TargetSpec final_target, std::uint64_t seed,
                                std::string solver_label = "",
                                std::vector<TargetSpec> ladder = standard_ladder());

} // namespace cocopf
