#include "optimizers_detail.hpp"

// Gradient-based line-search methods: Fletcher-Reeves conjugate gradients
// and BFGS with finite-difference gradients.

namespace cocopf::detail {

namespace {
constexpr double kGradTol = 1e-8; // convergence on the max-norm of the gradient
}

CgOptimizer::CgOptimizer(OptimizerSpec spec, ProblemInstance& instance,
                         std::span<const double> x0, std::uint64_t seed)
    : Optimizer(std::move(spec), static_cast<int>(x0.size()), seed),
      x_(x0.begin(), x0.end()) {
    fx_ = eval_point(instance, x_);
    finish_init();
}

bool CgOptimizer::refresh_gradient(ProblemInstance& instance) {
    auto eval1 = [&](std::span<const double> p) { return eval_point(instance, p); };
    if (!fd_gradient_scaled(eval1, x_, fx_, g_, scratch_)) {
        mark_failed();
        return false;
    }
    return true;
}

void CgOptimizer::do_step(ProblemInstance& instance) {
    const int k = dim_;
    if (!have_grad_) {
        if (!refresh_gradient(instance))
            return;
        have_grad_ = true;
        gg_ = linalg::dot(g_, g_);
        d_.resize(k);
        for (int i = 0; i < k; ++i)
            d_[i] = -g_[i];
        since_restart_ = 0;
        if (linalg::norm_inf(g_) < kGradTol) {
            mark_converged();
            return;
        }
    }

    double slope = linalg::dot(g_, d_);
    if (slope >= 0.0) {
        for (int i = 0; i < k; ++i)
            d_[i] = -g_[i];
        slope = -gg_;
        since_restart_ = 0;
    }
    if (slope == 0.0) {
        mark_converged();
        return;
    }

    try_.resize(k);
    auto phi = [&](double alpha) {
        for (int i = 0; i < k; ++i)
            try_[i] = x_[i] + alpha * d_[i];
        return eval_point(instance, try_);
    };
    const LineSearchResult ls = armijo_backtrack(phi, fx_, slope);
    if (!ls.ok) {
        mark_converged(); // no descent possible along this ray
        return;
    }
    x_ = try_;
    fx_ = ls.f;

    const double gg_old = gg_;
    if (!refresh_gradient(instance))
        return;
    gg_ = linalg::dot(g_, g_);

    ++since_restart_;
    double beta = 0.0;
    if (since_restart_ >= k) {
        since_restart_ = 0; // periodic restart to steepest descent
    } else {
        beta = gg_ / gg_old;
        if (!std::isfinite(beta)) {
            beta = 0.0;
            since_restart_ = 0;
        }
    }
    for (int i = 0; i < k; ++i)
        d_[i] = -g_[i] + beta * d_[i];

    if (linalg::norm_inf(g_) < kGradTol)
        mark_converged();
}

BfgsOptimizer::BfgsOptimizer(OptimizerSpec spec, ProblemInstance& instance,
                             std::span<const double> x0, std::uint64_t seed)
    : Optimizer(std::move(spec), static_cast<int>(x0.size()), seed),
      x_(x0.begin(), x0.end()) {
    fx_ = eval_point(instance, x_);
    finish_init();
}

bool BfgsOptimizer::refresh_gradient(ProblemInstance& instance) {
    auto eval1 = [&](std::span<const double> p) { return eval_point(instance, p); };
    if (!fd_gradient_scaled(eval1, x_, fx_, g_, scratch_)) {
        mark_failed();
        return false;
    }
    return true;
}

void BfgsOptimizer::do_step(ProblemInstance& instance) {
    const int k = dim_;
    if (!have_grad_) {
        if (!refresh_gradient(instance))
            return;
        have_grad_ = true;
        hinv_ = linalg::identity(k);
        if (linalg::norm_inf(g_) < kGradTol) {
            mark_converged();
            return;
        }
    }

    std::vector<double> d(k);
    linalg::mat_vec(hinv_, g_, d);
    for (double& v : d)
        v = -v;
    double slope = linalg::dot(g_, d);
    if (slope >= 0.0) {
        hinv_ = linalg::identity(k);
        for (int i = 0; i < k; ++i)
            d[i] = -g_[i];
        slope = -linalg::dot(g_, g_);
        if (slope == 0.0) {
            mark_converged();
            return;
        }
    }

    try_.resize(k);
    auto phi = [&](double alpha) {
        for (int i = 0; i < k; ++i)
            try_[i] = x_[i] + alpha * d[i];
        return eval_point(instance, try_);
    };
    const LineSearchResult ls = armijo_backtrack(phi, fx_, slope);
    if (!ls.ok) {
        mark_converged();
        return;
    }

    std::vector<double> s(k);
    for (int i = 0; i < k; ++i)
        s[i] = ls.alpha * d[i];
    const std::vector<double> g_old = g_;
    x_ = try_;
    fx_ = ls.f;
    if (!refresh_gradient(instance))
        return;

    std::vector<double> y(k);
    for (int i = 0; i < k; ++i)
        y[i] = g_[i] - g_old[i];
    const double sy = linalg::dot(s, y);
    if (sy > 1e-10 * linalg::norm2(s) * linalg::norm2(y)) {
        // Inverse-Hessian update; skipped entirely when curvature is too weak.
        std::vector<double> hy(k);
        linalg::mat_vec(hinv_, y, hy);
        const double yhy = linalg::dot(y, hy);
        const double rho = 1.0 / sy;
        const double c2 = (1.0 + rho * yhy) * rho;
        for (int i = 0; i < k; ++i) {
            for (int j = i; j < k; ++j) {
                const double v = hinv_[static_cast<std::size_t>(i) * k + j] -
                                 rho * (s[i] * hy[j] + hy[i] * s[j]) + c2 * s[i] * s[j];
                hinv_[static_cast<std::size_t>(i) * k + j] = v;
                hinv_[static_cast<std::size_t>(j) * k + i] = v;
            }
        }
    }

    if (linalg::norm_inf(g_) < kGradTol)
        mark_converged();
}

} // namespace cocopf::detail
