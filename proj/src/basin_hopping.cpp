#include "cocopf/basin_hopping.hpp"

#include <cmath>
#include <limits>

namespace cocopf {

BasinHopper::BasinHopper(OptimizerSpec spec, ProblemInstance& instance, std::uint64_t seed,
                         BasinHoppingParams params)
    : spec_(std::move(spec)), params_(params), seed_(seed),
      rng_(stream_seed("basin-hopping", {seed})),
      best_y_(std::numeric_limits<double>::infinity()) {
    if (spec_.method == Method::CMA)
        throw std::invalid_argument("basin hopping wraps local methods only");
    if (!(params_.temperature > 0.0) || !(params_.step_size > 0.0) ||
        params_.hops_per_restart < 1)
        throw std::invalid_argument("invalid basin-hopping parameters");

    start_local(instance, uniform_start(instance.dim()));
    init_evals_ = local_->init_evals();
    anchor_x_ = local_->best_x();
    anchor_y_ = local_->best_y();
    best_x_ = anchor_x_;
    best_y_ = anchor_y_;
}

std::vector<double> BasinHopper::uniform_start(int dim) {
    std::vector<double> x(dim);
    for (double& v : x)
        v = rng_.uniform(params_.start_lo, params_.start_hi);
    return x;
}

void BasinHopper::start_local(ProblemInstance& instance, const std::vector<double>& x0) {
    ++local_runs_;
    local_ = init_optimizer(spec_, instance,
                            std::span<const double>(x0.data(), x0.size()),
                            stream_seed("bh-local", {seed_, static_cast<std::uint64_t>(local_runs_)}));
}

StepOutcome BasinHopper::step(ProblemInstance& instance) {
    const int k = instance.dim();
    StepOutcome inner = local_->step(instance); // BudgetExhausted propagates
    long evals = inner.evals_used;
    if (inner.best_y < best_y_) {
        best_y_ = inner.best_y;
        best_x_ = inner.best_x;
    }

    if (local_->status() != OptimizerStatus::Running) {
        // The local run ended: Metropolis-accept its result, then hop.
        const double y_new = local_->best_y();
        bool accept = y_new <= anchor_y_;
        if (!accept)
            accept = rng_.uniform01() < std::exp(-(y_new - anchor_y_) / params_.temperature);
        if (accept) {
            anchor_x_ = local_->best_x();
            anchor_y_ = y_new;
        }

        ++hop_count_;
        std::vector<double> start(k);
        if (hop_count_ >= params_.hops_per_restart) {
            hop_count_ = 0;
            start = uniform_start(k);
            start_local(instance, start);
            // Fresh region: re-anchor on the new descent's starting incumbent.
            anchor_x_ = local_->best_x();
            anchor_y_ = local_->best_y();
        } else {
            for (int i = 0; i < k; ++i)
                start[i] = anchor_x_[i] + rng_.uniform(-params_.step_size, params_.step_size);
            start_local(instance, start);
        }
        evals += local_->init_evals();
        if (local_->best_y() < best_y_) {
            best_y_ = local_->best_y();
            best_x_ = local_->best_x();
        }
    }

    return {evals, best_x_, best_y_, false};
}

} // namespace cocopf
