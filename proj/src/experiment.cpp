#include "cocopf/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cocopf/io.hpp"

namespace cocopf {

std::string ExperimentConfig::solver_label() const {
    if (!shortname.empty())
        return shortname;
    if (solo)
        return std::string(solo->name());
    return strategy.label();
}

long ExperimentConfig::budget_for_dim(int dim) const {
    return maxfev_per_dim ? maxfev * dim : maxfev;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int function_id, int dim,
                         std::uint64_t instance_seed) {
    return stream_seed("trial", {master_seed, static_cast<std::uint64_t>(function_id),
                                 static_cast<std::uint64_t>(dim), instance_seed});
}

std::string progress_report(const TrialRecord& trial, double elapsed_seconds) {
    if (!(trial.best_delta_final >= 0.0))
        throw std::invalid_argument("progress_report: negative best delta");
    char buf[192];
    std::snprintf(buf, sizeof buf, "f%d d%d i%llu %s evals=%ld delta=%.3e %.1fs",
                  trial.function_id, trial.dim,
                  static_cast<unsigned long long>(trial.instance_seed),
                  trial.solver_label.c_str(), trial.evals_total, trial.best_delta_final,
                  elapsed_seconds);
    return buf;
}

namespace {

struct TrialCoord {
    int function_id;
    int dim;
    std::uint64_t instance;
};

void validate(const ExperimentConfig& config) {
    if (config.functions.empty() || config.dims.empty())
        throw std::invalid_argument("experiment needs at least one function and dimension");
    if (config.instances < 1)
        throw std::invalid_argument("instances must be at least 1");
    if (config.maxfev < 1)
        throw std::invalid_argument("maxfev must be at least 1");
    if (!(config.final_delta > 0.0))
        throw std::invalid_argument("final_delta must be positive");
    if (!config.solo && config.portfolio.empty())
        throw std::invalid_argument("either a solo solver or a portfolio is required");
    if (config.solo && !config.portfolio.empty())
        throw std::invalid_argument("solo solver and portfolio are mutually exclusive");
    for (int f : config.functions)
        function_group(f); // throws on unknown ids
    for (int d : config.dims)
        if (d < kMinDim || d > kMaxDim)
            throw std::invalid_argument("dimension out of range: " + std::to_string(d));
}

void write_meta(const ExperimentConfig& config) {
    nlohmann::ordered_json meta;
    meta["format"] = "cocopf-run v1";
    meta["shortname"] = config.solver_label();
    meta["comments"] = config.comments;
    meta["functions"] = config.functions;
    meta["dims"] = config.dims;
    meta["instances"] = config.instances;
    meta["maxfev"] = config.maxfev;
    meta["maxfev_per_dim"] = config.maxfev_per_dim;
    if (config.solo) {
        meta["solver"] = std::string(config.solo->name());
    } else {
        std::vector<std::string> names;
        for (const auto& s : config.portfolio)
            names.emplace_back(s.name());
        meta["portfolio"] = names;
        meta["strategy"] = config.strategy.kind == StrategyConfig::Kind::Unif ? "unif" : "eg";
        if (config.strategy.kind == StrategyConfig::Kind::EpsilonGreedy)
            meta["epsilon"] = config.strategy.epsilon;
    }
    meta["final_delta"] = config.final_delta;
    meta["master_seed"] = config.master_seed;

    std::ofstream os(config.output_dir / "meta.json", std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write meta.json in " + config.output_dir.string());
    os << meta.dump(2) << '\n';
}

TrialRecord run_one_trial(const ExperimentConfig& config, const TrialCoord& coord) {
    ProblemInstance instance(coord.function_id, coord.dim, coord.instance);
    const std::vector<OptimizerSpec> portfolio =
        config.solo ? std::vector<OptimizerSpec>{*config.solo} : config.portfolio;
    const StrategyConfig strategy = config.solo ? StrategyConfig::unif() : config.strategy;
    TrialResult result = run_portfolio_trial(
        portfolio, strategy, instance, config.budget_for_dim(coord.dim),
        TargetSpec{config.final_delta},
        trial_seed(config.master_seed, coord.function_id, coord.dim, coord.instance),
        config.solver_label());
    write_mlog(config.output_dir / mlog_filename(result.record.solver_label, coord.function_id,
                                                 coord.dim, coord.instance),
               result.mlog);
    return std::move(result.record);
}

} // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream* progress) {
    validate(config);
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory: " + config.output_dir.string());
    write_meta(config);

    std::vector<TrialCoord> coords;
    for (int f : config.functions)
        for (int d : config.dims)
            for (int i = 1; i <= config.instances; ++i)
                coords.push_back({f, d, static_cast<std::uint64_t>(i)});

    std::vector<TrialRecord> records(coords.size());
    std::mutex progress_mutex;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= coords.size() || failed.load())
                return;
            const auto started = std::chrono::steady_clock::now();
            try {
                records[i] = run_one_trial(config, coords[i]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                if (!failed.exchange(true))
                    first_error = e.what();
                return;
            }
            if (progress) {
                const double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                        .count();
                std::lock_guard<std::mutex> lock(progress_mutex);
                *progress << progress_report(records[i], elapsed) << '\n';
                progress->flush();
            }
        }
    };

    const int jobs = std::max(1, config.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failed.load())
        throw std::runtime_error("trial failed: " + first_error);

    write_records_csv(config.output_dir / "records.csv", records);

    ExperimentSummary summary;
    summary.trials = static_cast<long>(records.size());
    for (const TrialRecord& r : records)
        if (r.best_delta_final <= config.final_delta)
            ++summary.successes;
    return summary;
}

} // namespace cocopf
