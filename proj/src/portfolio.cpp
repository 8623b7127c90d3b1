#include "cocopf/portfolio.hpp"

#include <cmath>
#include <limits>

namespace cocopf {

namespace {

constexpr double kStartLo = -5.0;
constexpr double kStartHi = 5.0;

class HoppingRunner final : public MemberRunner {
public:
    HoppingRunner(const OptimizerSpec& spec, ProblemInstance& instance, std::uint64_t seed)
        : hopper_(spec, instance, seed) {}

    StepOutcome step(ProblemInstance& instance) override { return hopper_.step(instance); }
    long init_evals() const override { return hopper_.init_evals(); }
    const BasinHopper* hopper() const override { return &hopper_; }

private:
    BasinHopper hopper_;
};

/// Bare optimizer with restart-on-termination resume semantics: when the
/// wrapped run has converged or failed, the next step starts a new run from
/// a fresh uniform point and advances it.
class RestartingRunner final : public MemberRunner {
public:
    RestartingRunner(OptimizerSpec spec, ProblemInstance& instance, std::uint64_t seed)
        : spec_(std::move(spec)), seed_(seed),
          rng_(stream_seed("bare-start", {seed})),
          best_y_(std::numeric_limits<double>::infinity()) {
        opt_ = start_run(instance);
        init_evals_ = opt_->init_evals();
        track(*opt_);
    }

    StepOutcome step(ProblemInstance& instance) override {
        long extra = 0;
        if (opt_->status() != OptimizerStatus::Running) {
            opt_ = start_run(instance);
            extra = opt_->init_evals();
        }
        StepOutcome out = opt_->step(instance);
        out.evals_used += extra;
        track(*opt_);
        out.best_x = best_x_;
        out.best_y = best_y_;
        return out;
    }

    long init_evals() const override { return init_evals_; }
    const Optimizer* bare() const override { return opt_.get(); }

private:
    std::unique_ptr<Optimizer> start_run(ProblemInstance& instance) {
        ++runs_;
        OptimizerSpec spec = spec_;
        if (spec.method == Method::CMA && runs_ > 1) {
            // Population-doubling restarts: every fresh run searches more
            // globally than the one it replaces.
            const double base = spec_.param_or("lambda", cma_default_lambda(instance.dim()));
            spec.params["lambda"] =
                std::min(base * std::pow(2.0, static_cast<double>(runs_ - 1)), 16384.0);
        }
        std::vector<double> x0(instance.dim());
        for (double& v : x0)
            v = rng_.uniform(kStartLo, kStartHi);
        return init_optimizer(spec, instance, x0,
                              stream_seed("bare-run", {seed_, static_cast<std::uint64_t>(runs_)}));
    }

    void track(const Optimizer& opt) {
        if (opt.best_y() < best_y_) {
            best_y_ = opt.best_y();
            best_x_ = opt.best_x();
        }
    }

    OptimizerSpec spec_;
    std::uint64_t seed_;
    Rng rng_;
    std::unique_ptr<Optimizer> opt_;
    long runs_ = 0;
    long init_evals_ = 0;
    std::vector<double> best_x_;
    double best_y_;
};

std::unique_ptr<MemberRunner> make_runner(const OptimizerSpec& spec, ProblemInstance& instance,
                                          std::uint64_t seed) {
    if (spec.method == Method::CMA)
        return std::make_unique<RestartingRunner>(spec, instance, seed);
    return std::make_unique<HoppingRunner>(spec, instance, seed);
}

} // namespace

StrategyConfig StrategyConfig::epsilon_greedy(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("epsilon must be in [0,1]");
    return {Kind::EpsilonGreedy, eps};
}

std::string StrategyConfig::label() const {
    if (kind == Kind::Unif)
        return "UNIF";
    return "EG" + std::to_string(static_cast<int>(std::lround(epsilon * 100.0)));
}

Population::Population(const std::vector<OptimizerSpec>& portfolio, ProblemInstance& instance,
                       std::uint64_t seed) {
    if (portfolio.empty())
        throw std::invalid_argument("portfolio must not be empty");
    members_.reserve(portfolio.size());
    for (std::size_t i = 0; i < portfolio.size(); ++i)
        add_member(portfolio[i], instance,
                   stream_seed("member", {seed, static_cast<std::uint64_t>(i)}));
}

std::size_t Population::add_member(const OptimizerSpec& spec, ProblemInstance& instance,
                                   std::uint64_t seed) {
    Member m;
    m.method_name = std::string(spec.name());
    m.runner = make_runner(spec, instance, seed);
    m.y = std::numeric_limits<double>::infinity();
    m.evals = m.runner->init_evals();
    total_evals_ += m.evals;
    members_.push_back(std::move(m));
    return members_.size() - 1;
}

StepOutcome Population::step_member(std::size_t idx, ProblemInstance& instance) {
    if (idx >= members_.size())
        throw std::out_of_range("step_member: index out of range");
    Member& m = members_[idx];
    const long before = instance.eval_count();
    StepOutcome out;
    try {
        out = m.runner->step(instance);
    } catch (const BudgetExhausted&) {
        const long used = instance.eval_count() - before;
        m.evals += used;
        total_evals_ += used;
        throw;
    }
    m.evals += out.evals_used;
    total_evals_ += out.evals_used;
    ++m.iterations;
    ++round_;
    if (out.best_y < m.y) {
        m.y = out.best_y;
        m.x = out.best_x;
    }

    MLogRow row;
    row.round = round_;
    row.member_index = static_cast<int>(idx);
    row.member_name = m.method_name;
    row.member_evals = m.evals;
    row.total_evals = total_evals_;
    row.member_best_delta = m.y - instance.f_opt();
    row.portfolio_best_delta = best_y() - instance.f_opt();
    mlog_.push_back(std::move(row));
    return out;
}

std::size_t Population::best_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < members_.size(); ++i)
        if (members_[i].y < members_[best].y)
            best = i;
    return best;
}

double Population::best_y() const {
    return members_[best_index()].y;
}

std::vector<double> Population::member_values() const {
    std::vector<double> v(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i)
        v[i] = members_[i].y;
    return v;
}

std::size_t select_unif(const Population& pop, Rng& rng) {
    if (pop.size() == 0)
        throw std::invalid_argument("select_unif: empty population");
    return rng.index(pop.size());
}

std::size_t select_epsilon_greedy(std::span<const double> member_values, Rng& rng,
                                  double epsilon) {
    if (member_values.empty())
        throw std::invalid_argument("select_epsilon_greedy: empty population");
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must be in [0,1]");
    if (epsilon > 0.0 && rng.uniform01() < epsilon)
        return rng.index(member_values.size());
    std::size_t best = 0;
    for (std::size_t i = 1; i < member_values.size(); ++i)
        if (member_values[i] < member_values[best])
            best = i;
    return best;
}

std::size_t select_epsilon_greedy(const Population& pop, Rng& rng, double epsilon) {
    const std::vector<double> values = pop.member_values();
    return select_epsilon_greedy(values, rng, epsilon);
}

std::size_t select_member(const Population& pop, const StrategyConfig& strategy, Rng& rng) {
    if (strategy.kind == StrategyConfig::Kind::Unif)
        return select_unif(pop, rng);
    return select_epsilon_greedy(pop, rng, strategy.epsilon);
}

TrialResult run_portfolio_trial(const std::vector<OptimizerSpec>& portfolio,
                                const StrategyConfig& strategy, ProblemInstance& instance,
                                long budget, TargetSpec final_target, std::uint64_t seed,
                                std::string solver_label, std::vector<TargetSpec> ladder) {
    instance.attach_target_ladder(std::move(ladder));

    // Member initialization is not budget-capped; a budget below the init
    // cost just yields an immediate unsuccessful trial.
    Population pop(portfolio, instance, stream_seed("population", {seed}));
    Rng strategy_rng(stream_seed("strategy", {seed}));
    instance.set_budget(budget);

    while (instance.eval_count() < budget) {
        if (instance.eval_count() > 0 && instance.best_delta() <= final_target.delta_f)
            break;
        const std::size_t idx = select_member(pop, strategy, strategy_rng);
        try {
            pop.step_member(idx, instance);
        } catch (const BudgetExhausted&) {
            break;
        }
    }

    TrialResult result;
    result.record.function_id = instance.function_id();
    result.record.dim = instance.dim();
    result.record.instance_seed = instance.instance_seed();
    result.record.solver_label = solver_label.empty()
                                     ? (portfolio.size() == 1 ? std::string(portfolio[0].name())
                                                              : strategy.label())
                                     : std::move(solver_label);
    result.record.evals_total = instance.eval_count();
    result.record.best_delta_final = instance.eval_count() > 0
                                         ? instance.best_delta()
                                         : std::numeric_limits<double>::infinity();
    result.record.ladder = instance.target_ladder();
    result.record.hits = instance.target_hits();
    result.mlog = pop.mlog();
    return result;
}

} // namespace cocopf
