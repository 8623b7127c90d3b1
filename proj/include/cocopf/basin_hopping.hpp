#pragma once

#include <cstdint>
#include <memory>

#include "cocopf/optimizers.hpp"

namespace cocopf {

struct BasinHoppingParams {
    double temperature = 1.0;
    double step_size = 0.5;
    int hops_per_restart = 100; // full uniform restart after this many hops
    double start_lo = -5.0;
    double start_hi = 5.0;
};

/// Wraps a local optimizer in the basin-hopping restart strategy: each time
/// the inner run converges the result passes a fixed-temperature Metropolis
/// test against the current anchor, the (possibly updated) anchor is
/// perturbed uniformly per coordinate, and a fresh local run starts there.
/// Every hops_per_restart hops the search restarts from a uniform point in
/// the start box. Iteration-level suspension passes through transparently:
/// one step() advances the inner optimizer by one iteration.
class BasinHopper {
public:
    /// Draws the first start point uniformly from the start box and
    /// initializes the local optimizer there. CMA is rejected: it is a
    /// global method and enters portfolios bare.
    BasinHopper(OptimizerSpec spec, ProblemInstance& instance, std::uint64_t seed,
                BasinHoppingParams params = {});

    /// Advances the inner optimizer one iteration, completing a hop when it
    /// just converged (or failed). Returned best_x/best_y is the global best
    /// across all hops and restarts.
    StepOutcome step(ProblemInstance& instance);

    int hop_count() const { return hop_count_; }
    const std::vector<double>& anchor_x() const { return anchor_x_; }
    double anchor_y() const { return anchor_y_; }
    const std::vector<double>& best_x() const { return best_x_; }
    double best_y() const { return best_y_; }
    long init_evals() const { return init_evals_; }
    const BasinHoppingParams& params() const { return params_; }
    const Optimizer& local() const { return *local_; }

private:
    void start_local(ProblemInstance& instance, const std::vector<double>& x0);
    std::vector<double> uniform_start(int dim);

    OptimizerSpec spec_;
    BasinHoppingParams params_;
    std::uint64_t seed_;
    Rng rng_;
    std::unique_ptr<Optimizer> local_;
    long local_runs_ = 0;
    int hop_count_ = 0;
    std::vector<double> anchor_x_;
    double anchor_y_ = 0.0;
    std::vector<double> best_x_;
    double best_y_;
    long init_evals_ = 0;
};

} // namespace cocopf
