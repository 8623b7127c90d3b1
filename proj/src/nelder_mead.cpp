#include <numeric>

#include "optimizers_detail.hpp"

namespace cocopf::detail {

namespace {
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;
constexpr double kTol = 1e-11; // simplex value spread and size
} // namespace

NelderMeadOptimizer::NelderMeadOptimizer(OptimizerSpec spec, ProblemInstance& instance,
                                         std::span<const double> x0, std::uint64_t seed)
    : Optimizer(std::move(spec), static_cast<int>(x0.size()), seed) {
    const int k = dim_;
    verts_.assign(k + 1, std::vector<double>(x0.begin(), x0.end()));
    fvals_.resize(k + 1);
    fvals_[0] = eval_point(instance, verts_[0]);
    for (int i = 0; i < k; ++i) {
        double& c = verts_[i + 1][i];
        c = c != 0.0 ? 1.05 * c : 0.00025;
        fvals_[i + 1] = eval_point(instance, verts_[i + 1]);
    }
    finish_init();
}

void NelderMeadOptimizer::order_vertices() {
    const int k = dim_;
    std::vector<int> order(k + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fvals_[a] < fvals_[b]; });
    std::vector<std::vector<double>> vs(k + 1);
    std::vector<double> fs(k + 1);
    for (int j = 0; j <= k; ++j) {
        vs[j] = std::move(verts_[order[j]]);
        fs[j] = fvals_[order[j]];
    }
    verts_ = std::move(vs);
    fvals_ = std::move(fs);
}

void NelderMeadOptimizer::do_step(ProblemInstance& instance) {
    const int k = dim_;
    order_vertices();

    std::vector<double> centroid(k, 0.0);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < k; ++i)
            centroid[i] += verts_[j][i];
    for (double& c : centroid)
        c /= k;

    const std::vector<double>& worst = verts_[k];
    std::vector<double> xr(k), xt(k);
    for (int i = 0; i < k; ++i)
        xr[i] = centroid[i] + kReflect * (centroid[i] - worst[i]);
    const double fr = eval_point(instance, xr);

    bool shrink = false;
    if (fr < fvals_[0]) {
        for (int i = 0; i < k; ++i)
            xt[i] = centroid[i] + kReflect * kExpand * (centroid[i] - worst[i]);
        const double fe = eval_point(instance, xt);
        if (fe < fr) {
            verts_[k] = xt;
            fvals_[k] = fe;
        } else {
            verts_[k] = xr;
            fvals_[k] = fr;
        }
    } else if (fr < fvals_[k - 1]) {
        verts_[k] = xr;
        fvals_[k] = fr;
    } else if (fr < fvals_[k]) {
        // contraction outside the worst vertex
        for (int i = 0; i < k; ++i)
            xt[i] = centroid[i] + kContract * kReflect * (centroid[i] - worst[i]);
        const double fc = eval_point(instance, xt);
        if (fc <= fr) {
            verts_[k] = xt;
            fvals_[k] = fc;
        } else {
            shrink = true;
        }
    } else {
        // contraction toward the worst vertex
        for (int i = 0; i < k; ++i)
            xt[i] = centroid[i] - kContract * (centroid[i] - worst[i]);
        const double fc = eval_point(instance, xt);
        if (fc < fvals_[k]) {
            verts_[k] = xt;
            fvals_[k] = fc;
        } else {
            shrink = true;
        }
    }

    if (shrink) {
        for (int j = 1; j <= k; ++j) {
            for (int i = 0; i < k; ++i)
                verts_[j][i] = verts_[0][i] + kShrink * (verts_[j][i] - verts_[0][i]);
            fvals_[j] = eval_point(instance, verts_[j]);
        }
    }

    order_vertices();
    double f_spread = 0.0, x_spread = 0.0;
    for (int j = 1; j <= k; ++j) {
        f_spread = std::max(f_spread, std::abs(fvals_[j] - fvals_[0]));
        for (int i = 0; i < k; ++i)
            x_spread = std::max(x_spread, std::abs(verts_[j][i] - verts_[0][i]));
    }
    if (f_spread < kTol && x_spread < kTol)
        mark_converged();
}

} // namespace cocopf::detail
