#include <numeric>

#include "optimizers_detail.hpp"

// (mu/mu_w, lambda) CMA-ES with the standard default weights and learning
// rates. One step() is one generation; restarts are left to the caller.

namespace cocopf::detail {

namespace {
constexpr double kTolX = 1e-11;
constexpr double kTolFunRel = 1e-12;
constexpr double kSigmaMax = 1e14;
} // namespace

CmaEsOptimizer::CmaEsOptimizer(OptimizerSpec spec, ProblemInstance& instance,
                               std::span<const double> x0, std::uint64_t seed)
    : Optimizer(std::move(spec), static_cast<int>(x0.size()), seed),
      mean_(x0.begin(), x0.end()) {
    (void)instance; // nothing is evaluated until the first generation
    const int k = dim_;
    const OptimizerSpec& s = this->spec();
    lambda_ = static_cast<int>(s.param_or("lambda", cma_default_lambda(k)));
    sigma_ = s.param_or("sigma0", 2.0);
    mu_ = lambda_ / 2;

    weights_.resize(mu_);
    const double half = lambda_ / 2.0;
    for (int i = 0; i < mu_; ++i)
        weights_[i] = std::log(half + 0.5) - std::log(i + 1.0);
    const double wsum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    double w2 = 0.0;
    for (double& w : weights_) {
        w /= wsum;
        w2 += w * w;
    }
    mu_eff_ = 1.0 / w2;

    const double n = k;
    c_sigma_ = (mu_eff_ + 2.0) / (n + mu_eff_ + 5.0);
    d_sigma_ = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (n + 1.0)) - 1.0) + c_sigma_;
    c_c_ = (4.0 + mu_eff_ / n) / (n + 4.0 + 2.0 * mu_eff_ / n);
    c_1_ = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff_);
    c_mu_ = std::min(1.0 - c_1_,
                     2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) / ((n + 2.0) * (n + 2.0) + mu_eff_));
    chi_n_ = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

    p_sigma_.assign(k, 0.0);
    p_c_.assign(k, 0.0);
    cov_ = linalg::identity(k);
    eig_vecs_ = linalg::identity(k);
    eig_sqrt_.assign(k, 1.0);
    history_window_ = 10 + static_cast<std::size_t>(std::ceil(30.0 * k / lambda_));
    finish_init();
}

bool CmaEsOptimizer::refresh_decomposition() {
    std::vector<double> vals;
    if (!linalg::jacobi_eigen(cov_, dim_, vals, eig_vecs_))
        return false;
    eig_sqrt_.resize(dim_);
    for (int i = 0; i < dim_; ++i) {
        if (!(vals[i] > 0.0) || !std::isfinite(vals[i]))
            return false;
        eig_sqrt_[i] = std::sqrt(vals[i]);
    }
    return true;
}

void CmaEsOptimizer::do_step(ProblemInstance& instance) {
    const int k = dim_;

    // Sample and evaluate one generation.
    std::vector<std::vector<double>> ys(lambda_, std::vector<double>(k));
    std::vector<double> fs(lambda_);
    std::vector<double> zscaled(k), x(k);
    for (int j = 0; j < lambda_; ++j) {
        for (int i = 0; i < k; ++i)
            zscaled[i] = eig_sqrt_[i] * rng_.normal();
        for (int i = 0; i < k; ++i) {
            double s = 0.0;
            for (int c = 0; c < k; ++c)
                s += eig_vecs_[static_cast<std::size_t>(i) * k + c] * zscaled[c];
            ys[j][i] = s;
            x[i] = mean_[i] + sigma_ * s;
        }
        fs[j] = eval_point(instance, x);
    }

    std::vector<int> order(lambda_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });

    std::vector<double> yw(k, 0.0);
    for (int r = 0; r < mu_; ++r)
        for (int i = 0; i < k; ++i)
            yw[i] += weights_[r] * ys[order[r]][i];
    for (int i = 0; i < k; ++i)
        mean_[i] += sigma_ * yw[i];

    // Step-size path uses C^(-1/2) y_w = B D^-1 B^T y_w.
    std::vector<double> t(k, 0.0), cinv_yw(k, 0.0);
    for (int c = 0; c < k; ++c) {
        double s = 0.0;
        for (int i = 0; i < k; ++i)
            s += eig_vecs_[static_cast<std::size_t>(i) * k + c] * yw[i];
        t[c] = s / eig_sqrt_[c];
    }
    for (int i = 0; i < k; ++i) {
        double s = 0.0;
        for (int c = 0; c < k; ++c)
            s += eig_vecs_[static_cast<std::size_t>(i) * k + c] * t[c];
        cinv_yw[i] = s;
    }

    const double cs_scale = std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_);
    for (int i = 0; i < k; ++i)
        p_sigma_[i] = (1.0 - c_sigma_) * p_sigma_[i] + cs_scale * cinv_yw[i];

    ++generation_;
    const double ps_norm = linalg::norm2(p_sigma_);
    const double expected = std::sqrt(1.0 - std::pow(1.0 - c_sigma_, 2.0 * generation_));
    const bool hsig = ps_norm / expected / chi_n_ < 1.4 + 2.0 / (k + 1.0);

    const double cc_scale = std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_);
    for (int i = 0; i < k; ++i)
        p_c_[i] = (1.0 - c_c_) * p_c_[i] + (hsig ? cc_scale * yw[i] : 0.0);

    const double decay = 1.0 - c_1_ - c_mu_ +
                         (hsig ? 0.0 : c_1_ * c_c_ * (2.0 - c_c_));
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            double v = decay * cov_[static_cast<std::size_t>(i) * k + j] +
                       c_1_ * p_c_[i] * p_c_[j];
            for (int r = 0; r < mu_; ++r)
                v += c_mu_ * weights_[r] * ys[order[r]][i] * ys[order[r]][j];
            cov_[static_cast<std::size_t>(i) * k + j] = v;
            cov_[static_cast<std::size_t>(j) * k + i] = v;
        }
    }

    sigma_ *= std::exp((c_sigma_ / d_sigma_) * (ps_norm / chi_n_ - 1.0));
    if (!std::isfinite(sigma_) || sigma_ <= 0.0 || sigma_ > kSigmaMax) {
        mark_failed();
        return;
    }

    if (!refresh_decomposition()) {
        mark_failed(); // covariance degenerated
        return;
    }

    // Own stop tests: search volume collapsed, or best values stagnated.
    const double max_std = sigma_ * eig_sqrt_.back();
    if (max_std < kTolX) {
        mark_converged();
        return;
    }
    best_history_.push_back(fs[order[0]]);
    if (best_history_.size() > history_window_)
        best_history_.erase(best_history_.begin());
    if (best_history_.size() == history_window_) {
        const auto [lo, hi] = std::minmax_element(best_history_.begin(), best_history_.end());
        const double scale = std::max(1.0, std::abs(*hi));
        if (*hi - *lo <= kTolFunRel * scale)
            mark_converged();
    }
}

} // namespace cocopf::detail
