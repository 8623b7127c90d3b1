#include "optimizers_detail.hpp"

namespace cocopf::detail {

namespace {

constexpr double kFtol = 1e-11;    // relative per-cycle improvement
constexpr double kBrentTol = 1e-11;
constexpr double kGold = 1.618034;
constexpr double kGlimit = 100.0;
constexpr double kTiny = 1e-20;
constexpr int kBracketMax = 50;
constexpr int kBrentMax = 120;

struct Bracket {
    bool ok = false;
    double a = 0, b = 0, c = 0;
    double fa = 0, fb = 0, fc = 0;
};

/// Expands downhill from alpha in {0, 1} until a three-point bracket of a
/// minimum exists.
template <class Phi>
Bracket bracket_minimum(Phi&& phi, double f0) {
    Bracket br;
    double ax = 0.0, fa = f0;
    double bx = 1.0, fb = phi(bx);
    if (fb > fa) {
        std::swap(ax, bx);
        std::swap(fa, fb);
    }
    double cx = bx + kGold * (bx - ax);
    double fc = phi(cx);
    int iter = 0;
    while (fb > fc) {
        if (++iter > kBracketMax)
            return br;
        const double r = (bx - ax) * (fb - fc);
        const double q = (bx - cx) * (fb - fa);
        double denom = 2.0 * (q - r);
        denom = std::abs(denom) > kTiny ? denom : std::copysign(kTiny, denom);
        double u = bx - ((bx - cx) * q - (bx - ax) * r) / denom;
        const double ulim = bx + kGlimit * (cx - bx);
        double fu;
        if ((bx - u) * (u - cx) > 0.0) {
            fu = phi(u);
            if (fu < fc) {
                ax = bx; fa = fb;
                bx = u; fb = fu;
                break;
            }
            if (fu > fb) {
                cx = u; fc = fu;
                break;
            }
            u = cx + kGold * (cx - bx);
            fu = phi(u);
        } else if ((cx - u) * (u - ulim) > 0.0) {
            fu = phi(u);
            if (fu < fc) {
                bx = cx; cx = u;
                u = cx + kGold * (cx - bx);
                fb = fc; fc = fu;
                fu = phi(u);
            }
        } else if ((u - ulim) * (ulim - cx) >= 0.0) {
            u = ulim;
            fu = phi(u);
        } else {
            u = cx + kGold * (cx - bx);
            fu = phi(u);
        }
        ax = bx; bx = cx; cx = u;
        fa = fb; fb = fc; fc = fu;
    }
    br.ok = true;
    br.a = ax; br.b = bx; br.c = cx;
    br.fa = fa; br.fb = fb; br.fc = fc;
    return br;
}

/// Brent's parabolic-interpolation line minimum inside the bracket.
template <class Phi>
std::pair<double, double> brent_minimize(Phi&& phi, const Bracket& br) {
    double a = std::min(br.a, br.c);
    double b = std::max(br.a, br.c);
    double x = br.b, w = br.b, v = br.b;
    double fx = br.fb, fw = br.fb, fv = br.fb;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < kBrentMax; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = kBrentTol * std::abs(x) + 1e-14;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a))
            break;
        bool take_golden = true;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0)
                p = -p;
            q = std::abs(q);
            const double etemp = e;
            e = d;
            if (!(std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (a - x) ||
                  p >= q * (b - x))) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2)
                    d = std::copysign(tol1, xm - x);
                take_golden = false;
            }
        }
        if (take_golden) {
            e = x >= xm ? a - x : b - x;
            d = 0.381966 * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
        const double fu = phi(u);
        if (fu <= fx) {
            if (u >= x)
                a = x;
            else
                b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x)
                a = u;
            else
                b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx};
}

} // namespace

PowellOptimizer::PowellOptimizer(OptimizerSpec spec, ProblemInstance& instance,
                                 std::span<const double> x0, std::uint64_t seed)
    : Optimizer(std::move(spec), static_cast<int>(x0.size()), seed),
      x_(x0.begin(), x0.end()) {
    fx_ = eval_point(instance, x_);
    dirs_.assign(dim_, std::vector<double>(dim_, 0.0));
    for (int i = 0; i < dim_; ++i)
        dirs_[i][i] = 1.0;
    finish_init();
}

double PowellOptimizer::line_minimize(ProblemInstance& instance, std::span<const double> dir) {
    std::vector<double> probe(dim_);
    auto phi = [&](double alpha) {
        for (int i = 0; i < dim_; ++i)
            probe[i] = x_[i] + alpha * dir[i];
        return eval_point(instance, probe);
    };
    const Bracket br = bracket_minimum(phi, fx_);
    if (!br.ok)
        return 0.0;
    auto [alpha, falpha] = brent_minimize(phi, br);
    if (falpha >= fx_)
        return 0.0;
    for (int i = 0; i < dim_; ++i)
        x_[i] += alpha * dir[i];
    fx_ = falpha;
    return alpha;
}

void PowellOptimizer::do_step(ProblemInstance& instance) {
    const int k = dim_;
    const double f0 = fx_;
    const std::vector<double> x0 = x_;

    double biggest_drop = 0.0;
    int ibig = -1;
    for (int i = 0; i < k; ++i) {
        const double fprev = fx_;
        line_minimize(instance, dirs_[i]);
        if (fprev - fx_ > biggest_drop) {
            biggest_drop = fprev - fx_;
            ibig = i;
        }
    }

    if (2.0 * (f0 - fx_) <= kFtol * (std::abs(f0) + std::abs(fx_)) + kTiny) {
        mark_converged();
        return;
    }

    // Extrapolation test for replacing the direction of largest decrease
    // with the cycle displacement.
    std::vector<double> xe(k), displacement(k);
    for (int i = 0; i < k; ++i) {
        xe[i] = 2.0 * x_[i] - x0[i];
        displacement[i] = x_[i] - x0[i];
    }
    const double fe = eval_point(instance, xe);
    if (fe < f0 && ibig >= 0) {
        const double df = f0 - fx_ - biggest_drop;
        const double t = 2.0 * (f0 - 2.0 * fx_ + fe) * df * df -
                         biggest_drop * (f0 - fe) * (f0 - fe);
        if (t < 0.0) {
            const double alpha = line_minimize(instance, displacement);
            if (alpha != 0.0) {
                for (int i = 0; i < k; ++i)
                    displacement[i] *= alpha;
                dirs_[ibig] = dirs_[k - 1];
                dirs_[k - 1] = std::move(displacement);
            }
        }
    }
}

} // namespace cocopf::detail
