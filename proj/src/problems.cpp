#include "cocopf/problems.hpp"

#include <cmath>
#include <limits>

#include "cocopf/linalg.hpp"
#include "cocopf/rng.hpp"

namespace cocopf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kXoptRange = 4.0;   // optima stay off the [-5,5] sampling boundary
constexpr double kFoptRange = 100.0;
constexpr int kGallagherPeaks = 101;

void check_function_id(int function_id) {
    if (function_id < 1 || function_id > kFunctionCount)
        throw std::invalid_argument("unknown function_id " + std::to_string(function_id));
}

} // namespace

FunctionGroup function_group(int function_id) {
    check_function_id(function_id);
    switch (function_id) {
    case 1:
    case 2:
        return FunctionGroup::Separable;
    case 4:
    case 5:
        return FunctionGroup::Moderate;
    case 6:
    case 7:
        return FunctionGroup::IllConditioned;
    case 3:
    case 8:
        return FunctionGroup::MultiModal;
    default:
        return FunctionGroup::WeaklyStructured;
    }
}

std::string_view function_name(int function_id) {
    check_function_id(function_id);
    switch (function_id) {
    case 1: return "sphere";
    case 2: return "separable-ellipsoid";
    case 3: return "separable-rastrigin";
    case 4: return "rosenbrock";
    case 5: return "attractive-sector";
    case 6: return "rotated-ellipsoid";
    case 7: return "bent-cigar";
    case 8: return "rotated-rastrigin";
    case 9: return "schaffers-f7";
    default: return "gallagher-101";
    }
}

std::string_view group_label(FunctionGroup group) {
    switch (group) {
    case FunctionGroup::Separable: return "separable";
    case FunctionGroup::Moderate: return "moderate";
    case FunctionGroup::IllConditioned: return "ill-conditioned";
    case FunctionGroup::MultiModal: return "multi-modal";
    default: return "weakly-structured";
    }
}

std::vector<FunctionGroup> all_groups() {
    return {FunctionGroup::Separable, FunctionGroup::Moderate, FunctionGroup::IllConditioned,
            FunctionGroup::MultiModal, FunctionGroup::WeaklyStructured};
}

std::vector<int> group_functions(FunctionGroup group) {
    std::vector<int> out;
    for (int f = 1; f <= kFunctionCount; ++f)
        if (function_group(f) == group)
            out.push_back(f);
    return out;
}

std::vector<TargetSpec> target_ladder(int n, double low, double high) {
    if (n < 2)
        throw std::invalid_argument("target_ladder: n must be at least 2");
    if (!(low > 0.0) || !(high > 0.0) || !(low < high))
        throw std::invalid_argument("target_ladder: need 0 < low < high");
    std::vector<TargetSpec> out(n);
    const double lh = std::log10(high);
    const double ll = std::log10(low);
    for (int j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) / (n - 1);
        out[j].delta_f = std::pow(10.0, lh + (ll - lh) * t);
    }
    out.front().delta_f = high; // exact endpoints
    out.back().delta_f = low;
    return out;
}

const std::vector<TargetSpec>& standard_ladder() {
    static const std::vector<TargetSpec> ladder = target_ladder(50, 1e-8, 1e2);
    return ladder;
}

BudgetExhausted::BudgetExhausted(long evals_, double best_f_, std::vector<double> best_x_)
    : std::runtime_error("evaluation budget exhausted"),
      evals(evals_), best_f(best_f_), best_x(std::move(best_x_)) {}

ProblemInstance::ProblemInstance(int function_id, int dim, std::uint64_t instance_seed) {
    check_function_id(function_id);
    if (dim < kMinDim || dim > kMaxDim)
        throw std::invalid_argument("dimension out of range: " + std::to_string(dim));
    function_id_ = function_id;
    dim_ = dim;
    instance_seed_ = instance_seed;

    const auto fid = static_cast<std::uint64_t>(function_id_);
    const auto d = static_cast<std::uint64_t>(dim_);

    Rng inst_rng(stream_seed("instance", {fid, d, instance_seed_}));
    x_opt_.resize(dim_);
    for (double& v : x_opt_)
        v = inst_rng.uniform(-kXoptRange, kXoptRange);
    f_opt_ = inst_rng.uniform(-kFoptRange, kFoptRange);

    if (function_id_ > 3) {
        Rng rot_rng(stream_seed("rotation", {fid, d, instance_seed_}));
        rotation_ = linalg::random_orthogonal(dim_, rot_rng);
    }

    init_deterministic_parts();
}

ProblemInstance ProblemInstance::with_optimum(int function_id, int dim,
                                              std::vector<double> x_opt, double f_opt) {
    check_function_id(function_id);
    if (static_cast<int>(x_opt.size()) != dim)
        throw std::invalid_argument("with_optimum: x_opt size mismatch");
    ProblemInstance inst;
    inst.function_id_ = function_id;
    inst.dim_ = dim;
    inst.instance_seed_ = 0;
    inst.x_opt_ = std::move(x_opt);
    inst.f_opt_ = f_opt;
    inst.init_deterministic_parts();
    return inst;
}

void ProblemInstance::init_deterministic_parts() {
    best_f_ = std::numeric_limits<double>::infinity();
    z_.resize(dim_);

    if (function_id_ == 10) {
        Rng peak_rng(stream_seed("peaks", {static_cast<std::uint64_t>(function_id_),
                                           static_cast<std::uint64_t>(dim_), instance_seed_}));
        peaks_.resize(kGallagherPeaks);
        peaks_[0].center.assign(dim_, 0.0);
        peaks_[0].height = 100.0;
        peaks_[0].width = std::pow(10.0, peak_rng.uniform(0.0, 3.0));
        for (int p = 1; p < kGallagherPeaks; ++p) {
            peaks_[p].center.resize(dim_);
            for (double& c : peaks_[p].center)
                c = peak_rng.uniform(-kXoptRange, kXoptRange);
            peaks_[p].height = peak_rng.uniform(1.0, 99.0);
            peaks_[p].width = std::pow(10.0, peak_rng.uniform(0.0, 3.0));
        }
    }
}

double ProblemInstance::core(std::span<const double> z) const {
    const int k = dim_;
    switch (function_id_) {
    case 1: {
        double s = 0.0;
        for (double v : z)
            s += v * v;
        return s;
    }
    case 2:
    case 6: {
        double s = 0.0;
        for (int i = 0; i < k; ++i)
            s += std::pow(10.0, 6.0 * i / (k - 1)) * z[i] * z[i];
        return s;
    }
    case 3:
    case 8: {
        double quad = 0.0, cosum = 0.0;
        for (double v : z) {
            quad += v * v;
            cosum += std::cos(2.0 * kPi * v);
        }
        return 10.0 * (k - cosum) + quad;
    }
    case 4: {
        // Core minimum shifted so that g(0) = 0.
        double s = 0.0;
        for (int i = 0; i + 1 < k; ++i) {
            const double a = z[i] + 1.0;
            const double b = z[i + 1] + 1.0;
            s += 100.0 * (a * a - b) * (a * a - b) + (a - 1.0) * (a - 1.0);
        }
        return s;
    }
    case 5: {
        double s = 0.0;
        for (int i = 0; i < k; ++i) {
            const double w = z[i] * x_opt_[i] > 0.0 ? 100.0 : 1.0;
            s += w * z[i] * z[i];
        }
        return s;
    }
    case 7: {
        double s = z[0] * z[0];
        for (int i = 1; i < k; ++i)
            s += 1e6 * z[i] * z[i];
        return s;
    }
    case 9: {
        double acc = 0.0;
        for (int i = 0; i + 1 < k; ++i) {
            const double si = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
            const double root = std::sqrt(si);
            const double sn = std::sin(50.0 * std::pow(si, 0.2));
            acc += root + root * sn * sn;
        }
        acc /= (k - 1);
        return acc * acc;
    }
    default: {
        double best = std::numeric_limits<double>::infinity();
        for (const Peak& p : peaks_) {
            double d2 = 0.0;
            for (int i = 0; i < k; ++i) {
                const double d = z[i] - p.center[i];
                d2 += d * d;
            }
            const double v = (100.0 - p.height) + p.height * (1.0 - std::exp(-d2 / (2.0 * p.width)));
            if (v < best)
                best = v;
        }
        return best;
    }
    }
}

double ProblemInstance::evaluate(std::span<const double> x) {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("evaluate: wrong dimension");
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument("evaluate: non-finite coordinate");
    if (budget_ && eval_count_ >= *budget_)
        throw BudgetExhausted(eval_count_, best_f_, best_x_);

    if (rotation_.empty()) {
        for (int i = 0; i < dim_; ++i)
            z_[i] = x[i] - x_opt_[i];
    } else {
        for (int i = 0; i < dim_; ++i) {
            double s = 0.0;
            const double* row = rotation_.data() + static_cast<std::size_t>(i) * dim_;
            for (int j = 0; j < dim_; ++j)
                s += row[j] * (x[j] - x_opt_[j]);
            z_[i] = s;
        }
    }

    const double f = core(z_) + f_opt_;
    ++eval_count_;
    if (f < best_f_) {
        best_f_ = f;
        best_x_.assign(x.begin(), x.end());
        while (next_target_ < ladder_.size() && best_f_ - f_opt_ <= ladder_[next_target_].delta_f) {
            hits_[next_target_] = eval_count_;
            ++next_target_;
        }
    }
    if (observer_)
        observer_(x, f);
    return f;
}

double ProblemInstance::best_delta() const {
    if (eval_count_ == 0)
        throw std::logic_error("best_delta: no evaluations yet");
    return best_f_ - f_opt_;
}

void ProblemInstance::attach_target_ladder(std::vector<TargetSpec> ladder) {
    ladder_ = std::move(ladder);
    hits_.assign(ladder_.size(), std::nullopt);
    next_target_ = 0;
    if (eval_count_ > 0) {
        while (next_target_ < ladder_.size() && best_f_ - f_opt_ <= ladder_[next_target_].delta_f) {
            hits_[next_target_] = eval_count_;
            ++next_target_;
        }
    }
}

void ProblemInstance::set_eval_observer(std::function<void(std::span<const double>, double)> obs) {
    observer_ = std::move(obs);
}

} // namespace cocopf
