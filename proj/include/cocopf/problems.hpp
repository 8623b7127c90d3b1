#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cocopf {

/// Function-suite panels used when aggregating performance curves.
enum class FunctionGroup {
    Separable,
    Moderate,
    IllConditioned,
    MultiModal,
    WeaklyStructured,
};

inline constexpr int kFunctionCount = 10;
inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 40;

FunctionGroup function_group(int function_id);
std::string_view function_name(int function_id);
std::string_view group_label(FunctionGroup group);
std::vector<FunctionGroup> all_groups();
std::vector<int> group_functions(FunctionGroup group);

/// One precision target, expressed as a gap above the instance optimum.
struct TargetSpec {
    double delta_f = 0.0;

    double target_value(double f_opt) const { return f_opt + delta_f; }
};

/// n targets log-evenly spaced between high and low inclusive, descending.
/// Endpoints are returned exactly.
std::vector<TargetSpec> target_ladder(int n, double low, double high);

/// The default 50-target ladder over 10^[-8..2] used by trial records.
const std::vector<TargetSpec>& standard_ladder();

/// Thrown by ProblemInstance::evaluate when the evaluation budget is spent.
/// Carries the incumbent at the moment of exhaustion.
class BudgetExhausted : public std::runtime_error {
public:
    BudgetExhausted(long evals, double best_f, std::vector<double> best_x);

    long evals;
    double best_f;
    std::vector<double> best_x;
};

/// One instantiated benchmark function: f(x) = g(R (x - x_opt)) + f_opt with
/// g(0) = 0. The instance counts its own evaluations, tracks the best point
/// seen and records first-attainment indices for an attached target ladder.
/// Single-owner mutable state; never share one instance between trials.
class ProblemInstance {
public:
    ProblemInstance(int function_id, int dim, std::uint64_t instance_seed);

    /// Test hook: explicit optimum, identity rotation.
    static ProblemInstance with_optimum(int function_id, int dim,
                                        std::vector<double> x_opt, double f_opt);

    double evaluate(std::span<const double> x);

    /// best_f - f_opt; requires at least one evaluation.
    double best_delta() const;

    int function_id() const { return function_id_; }
    int dim() const { return dim_; }
    std::uint64_t instance_seed() const { return instance_seed_; }
    double f_opt() const { return f_opt_; }
    const std::vector<double>& x_opt() const { return x_opt_; }
    /// Row-major k x k orthogonal matrix (identity for functions 1-3).
    const std::vector<double>& rotation() const { return rotation_; }

    long eval_count() const { return eval_count_; }
    double best_f() const { return best_f_; }
    const std::vector<double>& best_x() const { return best_x_; }

    /// Hard cap on total evaluations; exceeding it throws BudgetExhausted.
    void set_budget(long max_evals) { budget_ = max_evals; }
    std::optional<long> budget() const { return budget_; }

    /// Installs a (descending) target ladder whose first-attainment
    /// evaluation indices are recorded evaluation-granularly.
    void attach_target_ladder(std::vector<TargetSpec> ladder);
    const std::vector<TargetSpec>& target_ladder() const { return ladder_; }
    /// First evaluation index at which best_delta <= ladder[i].delta_f.
    const std::vector<std::optional<long>>& target_hits() const { return hits_; }

    /// Test hook: called after every evaluation with (x, f).
    void set_eval_observer(std::function<void(std::span<const double>, double)> obs);

private:
    struct Peak {
        std::vector<double> center;
        double height;
        double width;
    };

    ProblemInstance() = default;
    void init_deterministic_parts();
    double core(std::span<const double> z) const;

    int function_id_ = 1;
    int dim_ = 2;
    std::uint64_t instance_seed_ = 0;
    std::vector<double> x_opt_;
    double f_opt_ = 0.0;
    std::vector<double> rotation_; // empty means identity
    std::vector<Peak> peaks_;      // function 10 only

    long eval_count_ = 0;
    double best_f_;
    std::vector<double> best_x_;
    std::optional<long> budget_;

    std::vector<TargetSpec> ladder_;
    std::vector<std::optional<long>> hits_;
    std::size_t next_target_ = 0;

    std::function<void(std::span<const double>, double)> observer_;
    std::vector<double> z_; // evaluation scratch
};

} // namespace cocopf
