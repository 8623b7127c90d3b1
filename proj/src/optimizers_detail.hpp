#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cocopf/linalg.hpp"
#include "cocopf/optimizers.hpp"

// Internal optimizer machinery shared by the per-algorithm translation units.

namespace cocopf::detail {

struct LineSearchResult {
    bool ok = false;
    double alpha = 0.0;
    double f = 0.0;
};

/// Armijo backtracking from alpha0 with halving. phi(alpha) evaluates the
/// objective along the ray; slope is the directional derivative at 0 and
/// must be negative.
template <class Phi>
LineSearchResult armijo_backtrack(Phi&& phi, double f0, double slope, double alpha0 = 1.0) {
    constexpr double kC1 = 1e-4;
    constexpr int kMaxHalvings = 100;
    double alpha = alpha0;
    for (int i = 0; i < kMaxHalvings; ++i) {
        const double fa = phi(alpha);
        if (fa <= f0 + kC1 * alpha * slope)
            return {true, alpha, fa};
        alpha *= 0.5;
    }
    return {};
}

/// Forward-difference gradient with per-coordinate step 1e-8*max(1,|x_i|),
/// reusing the known f(x). Consumes k evaluations through eval1. Returns
/// false when any component comes out non-finite.
template <class Eval>
bool fd_gradient_scaled(Eval&& eval1, std::span<const double> x, double fx,
                        std::vector<double>& g, std::vector<double>& scratch) {
    const std::size_t k = x.size();
    g.resize(k);
    scratch.assign(x.begin(), x.end());
    for (std::size_t i = 0; i < k; ++i) {
        const double h = 1e-8 * std::max(1.0, std::abs(x[i]));
        scratch[i] = x[i] + h;
        g[i] = (eval1(scratch) - fx) / h;
        scratch[i] = x[i];
        if (!std::isfinite(g[i]))
            return false;
    }
    return true;
}

class NelderMeadOptimizer final : public Optimizer {
public:
    NelderMeadOptimizer(OptimizerSpec spec, ProblemInstance& instance,
                        std::span<const double> x0, std::uint64_t seed);

protected:
    void do_step(ProblemInstance& instance) override;

private:
    void order_vertices();

    std::vector<std::vector<double>> verts_;
    std::vector<double> fvals_;
};

class PowellOptimizer final : public Optimizer {
public:
    PowellOptimizer(OptimizerSpec spec, ProblemInstance& instance,
                    std::span<const double> x0, std::uint64_t seed);

protected:
    void do_step(ProblemInstance& instance) override;

private:
    /// Brent line minimization of f along dir from x_; moves x_/fx_ and
    /// returns the step length taken.
    double line_minimize(ProblemInstance& instance, std::span<const double> dir);

    std::vector<double> x_;
    double fx_ = 0.0;
    std::vector<std::vector<double>> dirs_;
};

class CgOptimizer final : public Optimizer {
public:
    CgOptimizer(OptimizerSpec spec, ProblemInstance& instance,
                std::span<const double> x0, std::uint64_t seed);

protected:
    void do_step(ProblemInstance& instance) override;

private:
    bool refresh_gradient(ProblemInstance& instance);

    std::vector<double> x_, g_, d_, try_, scratch_;
    double fx_ = 0.0;
    double gg_ = 0.0;
    bool have_grad_ = false;
    int since_restart_ = 0;
};

class BfgsOptimizer final : public Optimizer {
public:
    BfgsOptimizer(OptimizerSpec spec, ProblemInstance& instance,
                  std::span<const double> x0, std::uint64_t seed);

protected:
    void do_step(ProblemInstance& instance) override;

private:
    bool refresh_gradient(ProblemInstance& instance);

    std::vector<double> x_, g_, hinv_, try_, scratch_;
    double fx_ = 0.0;
    bool have_grad_ = false;
};

class CmaEsOptimizer final : public Optimizer {
public:
    CmaEsOptimizer(OptimizerSpec spec, ProblemInstance& instance,
                   std::span<const double> x0, std::uint64_t seed);

    int lambda() const { return lambda_; }
    double sigma() const { return sigma_; }

protected:
    void do_step(ProblemInstance& instance) override;

private:
    bool refresh_decomposition();

    int lambda_ = 0;
    int mu_ = 0;
    double mu_eff_ = 0.0;
    double c_sigma_ = 0.0, d_sigma_ = 0.0, c_c_ = 0.0, c_1_ = 0.0, c_mu_ = 0.0;
    double chi_n_ = 0.0;
    std::vector<double> weights_;

    std::vector<double> mean_, p_sigma_, p_c_;
    std::vector<double> cov_;          // row-major k x k
    std::vector<double> eig_vecs_;     // columns are eigenvectors
    std::vector<double> eig_sqrt_;     // sqrt of eigenvalues
    double sigma_ = 2.0;
    long generation_ = 0;

    std::vector<double> best_history_; // recent per-generation bests (ring)
    std::size_t history_window_ = 0;
};

} // namespace cocopf::detail
