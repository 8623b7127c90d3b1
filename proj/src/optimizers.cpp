#include "cocopf/optimizers.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "optimizers_detail.hpp"

namespace cocopf {

std::string_view method_name(Method m) {
    switch (m) {
    case Method::NelderMead: return "NelderMead";
    case Method::Powell: return "Powell";
    case Method::CG: return "CG";
    case Method::BFGS: return "BFGS";
    default: return "CMA";
    }
}

Method method_from_name(std::string_view name) {
    for (Method m : all_methods())
        if (method_name(m) == name)
            return m;
    throw std::invalid_argument("unknown method name: " + std::string(name));
}

std::vector<Method> all_methods() {
    return {Method::NelderMead, Method::Powell, Method::CG, Method::BFGS, Method::CMA};
}

int cma_default_lambda(int dim) {
    return 4 + static_cast<int>(std::floor(3.0 * std::log(dim)));
}

namespace {

const std::set<std::string>& allowed_params(Method m) {
    static const std::set<std::string> cma = {"lambda", "sigma0"};
    static const std::set<std::string> none;
    return m == Method::CMA ? cma : none;
}

} // namespace

OptimizerSpec::OptimizerSpec(Method m, std::map<std::string, double> p)
    : method(m), params(std::move(p)) {
    const auto& allowed = allowed_params(method);
    for (const auto& [key, value] : params) {
        if (!allowed.count(key))
            throw std::invalid_argument("unknown parameter '" + key + "' for " +
                                        std::string(name()));
        if (!std::isfinite(value))
            throw std::invalid_argument("non-finite value for parameter '" + key + "'");
    }
    if (method == Method::CMA) {
        if (param_or("lambda", 4) < 2)
            throw std::invalid_argument("CMA lambda must be at least 2");
        if (param_or("sigma0", 2.0) <= 0.0)
            throw std::invalid_argument("CMA sigma0 must be positive");
    }
}

OptimizerSpec OptimizerSpec::from_name(std::string_view name, std::map<std::string, double> p) {
    return OptimizerSpec(method_from_name(name), std::move(p));
}

double OptimizerSpec::param_or(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

Optimizer::Optimizer(OptimizerSpec spec, int dim, std::uint64_t seed)
    : dim_(dim), rng_(seed), spec_(std::move(spec)),
      best_y_(std::numeric_limits<double>::infinity()) {}

double Optimizer::eval_point(ProblemInstance& instance, std::span<const double> x) {
    for (double v : x) {
        if (!std::isfinite(v)) {
            mark_failed();
            throw NumericalFailure{};
        }
    }
    const double f = instance.evaluate(x); // BudgetExhausted propagates
    ++phase_evals_;
    if (f < best_y_) {
        best_y_ = f;
        best_x_.assign(x.begin(), x.end());
    }
    if (std::isnan(f)) {
        mark_failed();
        throw NumericalFailure{};
    }
    return f;
}

StepOutcome Optimizer::step(ProblemInstance& instance) {
    if (status_ != OptimizerStatus::Running)
        throw std::logic_error("step: optimizer state is not running");
    phase_evals_ = 0;
    try {
        do_step(instance);
    } catch (const NumericalFailure&) {
        // status already Failed; keep the incumbent and return normally
    } catch (const BudgetExhausted&) {
        mark_failed();
        throw;
    }
    ++iteration_count_;
    return {phase_evals_, best_x_, best_y_, status_ == OptimizerStatus::Converged};
}

std::unique_ptr<Optimizer> init_optimizer(const OptimizerSpec& spec, ProblemInstance& instance,
                                          std::span<const double> x0, std::uint64_t seed) {
    if (static_cast<int>(x0.size()) != instance.dim())
        throw std::invalid_argument("init_optimizer: x0 dimension mismatch");
    switch (spec.method) {
    case Method::NelderMead:
        return std::make_unique<detail::NelderMeadOptimizer>(spec, instance, x0, seed);
    case Method::Powell:
        return std::make_unique<detail::PowellOptimizer>(spec, instance, x0, seed);
    case Method::CG:
        return std::make_unique<detail::CgOptimizer>(spec, instance, x0, seed);
    case Method::BFGS:
        return std::make_unique<detail::BfgsOptimizer>(spec, instance, x0, seed);
    default:
        return std::make_unique<detail::CmaEsOptimizer>(spec, instance, x0, seed);
    }
}

std::vector<double> fd_gradient(ProblemInstance& instance, std::span<const double> x, double h) {
    if (!(h > 0.0))
        throw std::invalid_argument("fd_gradient: h must be positive");
    const double fx = instance.evaluate(x);
    std::vector<double> g(x.size());
    std::vector<double> xp(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        g[i] = (instance.evaluate(xp) - fx) / h;
        xp[i] = x[i];
    }
    for (double v : g)
        if (!std::isfinite(v))
            throw std::runtime_error("fd_gradient: non-finite result");
    return g;
}

} // namespace cocopf
