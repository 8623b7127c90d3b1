#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cocopf/problems.hpp"
#include "cocopf/rng.hpp"

namespace cocopf {

enum class Method { NelderMead, Powell, CG, BFGS, CMA };

std::string_view method_name(Method m);
Method method_from_name(std::string_view name);
std::vector<Method> all_methods();

/// Algorithm choice plus optional parameter overrides. Every parameter has a
/// default; unknown keys are rejected at construction.
struct OptimizerSpec {
    Method method = Method::NelderMead;
    std::map<std::string, double> params;

    OptimizerSpec() = default;
    explicit OptimizerSpec(Method m, std::map<std::string, double> p = {});
    static OptimizerSpec from_name(std::string_view name, std::map<std::string, double> p = {});

    std::string_view name() const { return method_name(method); }
    double param_or(const std::string& key, double fallback) const;
};

enum class OptimizerStatus { Running, Converged, Failed };

/// Result of advancing an optimizer by one iteration.
struct StepOutcome {
    long evals_used = 0;
    std::vector<double> best_x;
    double best_y = 0.0;
    bool converged = false;
};

/// A suspended optimizer run. One step() call advances exactly one native
/// iteration (simplex update, direction-set cycle, line-search step or CMA
/// generation) and reports the evaluations it consumed. States are
/// single-owner: movable between contexts, never stepped concurrently.
///
/// Stepping N times produces the identical evaluation sequence as an
/// uninterrupted loop; nothing leaks between states and all randomness comes
/// from the per-state seeded generator.
class Optimizer {
public:
    virtual ~Optimizer() = default;

    /// Advances one iteration. Throws std::logic_error when the state is no
    /// longer running and propagates BudgetExhausted from the instance (the
    /// state is marked Failed in that case; the incumbent stays queryable).
    /// Numerical failure (non-finite candidate or value) does not throw: the
    /// step returns normally with status() == Failed.
    StepOutcome step(ProblemInstance& instance);

    OptimizerStatus status() const { return status_; }
    long iteration_count() const { return iteration_count_; }
    const OptimizerSpec& spec() const { return spec_; }

    /// Best point evaluated by this state so far.
    const std::vector<double>& best_x() const { return best_x_; }
    double best_y() const { return best_y_; }

    /// Evaluations consumed while initializing the state.
    long init_evals() const { return init_evals_; }

protected:
    Optimizer(OptimizerSpec spec, int dim, std::uint64_t seed);

    /// Runs one iteration; implementations evaluate only through eval_point.
    virtual void do_step(ProblemInstance& instance) = 0;

    /// Evaluates f at x, counting and tracking the incumbent. Marks the
    /// state Failed and throws NumericalFailure on a non-finite candidate
    /// or a NaN value.
    double eval_point(ProblemInstance& instance, std::span<const double> x);

    void mark_converged() { status_ = OptimizerStatus::Converged; }
    void mark_failed() { status_ = OptimizerStatus::Failed; }
    void finish_init() { init_evals_ = phase_evals_; }

    struct NumericalFailure {};

    int dim_;
    Rng rng_;

private:
    OptimizerSpec spec_;
    OptimizerStatus status_ = OptimizerStatus::Running;
    long iteration_count_ = 0;
    long init_evals_ = 0;
    long phase_evals_ = 0;
    std::vector<double> best_x_;
    double best_y_;
};

/// Creates a ready-to-step state. Evaluates f(x0) (plus, for Nelder-Mead,
/// the remaining initial simplex vertices); CMA evaluates nothing until its
/// first generation.
std::unique_ptr<Optimizer> init_optimizer(const OptimizerSpec& spec, ProblemInstance& instance,
                                          std::span<const double> x0, std::uint64_t seed);

/// Forward-difference gradient with a shared f(x): consumes k+1 evaluations
/// against the instance. Throws std::invalid_argument for h <= 0 and
/// std::runtime_error when the result is not finite.
std::vector<double> fd_gradient(ProblemInstance& instance, std::span<const double> x, double h);

/// Default CMA population size, 4 + floor(3 ln k).
int cma_default_lambda(int dim);

} // namespace cocopf
