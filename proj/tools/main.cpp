#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cocopf/experiment.hpp"
#include "cocopf/io.hpp"
#include "cocopf/metrics.hpp"

namespace {

using namespace cocopf;

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty())
            continue;
        const auto dash = token.find('-', 1); // leading '-' would be a negative number
        try {
            if (dash == std::string::npos) {
                out.push_back(std::stoi(token));
            } else {
                const int lo = std::stoi(token.substr(0, dash));
                const int hi = std::stoi(token.substr(dash + 1));
                if (hi < lo)
                    throw std::invalid_argument("range");
                for (int v = lo; v <= hi; ++v)
                    out.push_back(v);
            }
        } catch (const std::logic_error&) {
            throw CLI::ValidationError(std::string(what), "cannot parse '" + token + "'");
        }
    }
    if (out.empty())
        throw CLI::ValidationError(std::string(what), "empty list");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<OptimizerSpec> parse_portfolio(const std::string& text) {
    std::vector<OptimizerSpec> specs;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty())
            continue;
        try {
            specs.push_back(OptimizerSpec::from_name(token));
        } catch (const std::invalid_argument& e) {
            throw CLI::ValidationError("--portfolio", e.what());
        }
    }
    if (specs.empty())
        throw CLI::ValidationError("--portfolio", "empty portfolio");
    return specs;
}

std::string format_num(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// Nearest recorded ladder rung in log space.
double snap_to_ladder(double delta, const std::vector<TargetSpec>& ladder) {
    double best = ladder.front().delta_f;
    double best_gap = std::abs(std::log10(best) - std::log10(delta));
    for (const TargetSpec& t : ladder) {
        const double gap = std::abs(std::log10(t.delta_f) - std::log10(delta));
        if (gap < best_gap) {
            best_gap = gap;
            best = t.delta_f;
        }
    }
    return best;
}

struct GroupKey {
    int function_id;
    int dim;
    std::string solver;
    bool operator<(const GroupKey& o) const {
        return std::tie(function_id, dim, solver) < std::tie(o.function_id, o.dim, o.solver);
    }
};

int cmd_run(const std::string& solver, const std::string& portfolio,
            const std::string& strategy, double eps, const std::string& functions,
            const std::string& dims, ExperimentConfig config) {
    if (solver.empty() == portfolio.empty())
        throw CLI::ValidationError("--solver/--portfolio", "exactly one is required");
    if (!solver.empty()) {
        if (!strategy.empty())
            throw CLI::ValidationError("--strategy", "only valid with --portfolio");
        try {
            config.solo = OptimizerSpec::from_name(solver);
        } catch (const std::invalid_argument& e) {
            throw CLI::ValidationError("--solver", e.what());
        }
    } else {
        config.portfolio = parse_portfolio(portfolio);
        if (strategy == "unif")
            config.strategy = StrategyConfig::unif();
        else if (strategy == "eg")
            config.strategy = StrategyConfig::epsilon_greedy(eps);
        else if (strategy.empty())
            throw CLI::ValidationError("--strategy", "required with --portfolio");
        else
            throw CLI::ValidationError("--strategy", "must be 'unif' or 'eg'");
    }
    config.functions = parse_int_list(functions, "--functions");
    config.dims = parse_int_list(dims, "--dims");
    for (int f : config.functions)
        if (f < 1 || f > kFunctionCount)
            throw CLI::ValidationError("--functions", "function ids are 1..10");
    for (int d : config.dims)
        if (d < kMinDim || d > kMaxDim)
            throw CLI::ValidationError("--dims", "dimensions are 2..40");

    const auto summary = run_experiment(config, &std::cout);
    std::cout << summary.trials << " trials, " << summary.successes << " reached delta "
              << format_num(config.final_delta) << "\n";
    return 0;
}

int cmd_ert(const std::string& in_dir, double delta, int ladder_n) {
    const auto records = read_records_csv(std::filesystem::path(in_dir) / "records.csv");
    if (records.empty())
        throw std::runtime_error("no trials in " + in_dir);

    std::vector<double> deltas;
    if (delta > 0.0) {
        deltas.push_back(snap_to_ladder(delta, records.front().ladder));
    } else {
        for (const TargetSpec& t : target_ladder(ladder_n, 1e-8, 1e2))
            deltas.push_back(snap_to_ladder(t.delta_f, records.front().ladder));
        deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());
    }

    std::map<GroupKey, std::vector<TrialRecord>> groups;
    for (const TrialRecord& r : records)
        groups[{r.function_id, r.dim, r.solver_label}].push_back(r);

    std::vector<std::string> rows;
    std::printf("%-8s %-4s %-12s %-12s %-12s %-9s %s\n", "function", "dim", "solver", "delta_f",
                "ert", "n_success", "n_trials");
    for (const auto& [key, trials] : groups) {
        for (double d : deltas) {
            const ErtResult r = compute_ert(trials, d);
            std::ostringstream row;
            row << key.function_id << ',' << key.dim << ',' << key.solver << ','
                << format_num(r.delta_f) << ',' << format_num(r.ert) << ',' << r.n_success
                << ',' << r.n_trials;
            rows.push_back(row.str());
            std::printf("%-8d %-4d %-12s %-12s %-12s %-9ld %ld\n", key.function_id, key.dim,
                        key.solver.c_str(), format_num(r.delta_f).c_str(),
                        format_num(r.ert).c_str(), r.n_success, r.n_trials);
        }
    }
    write_ert_csv(std::filesystem::path(in_dir) / "ert.csv",
                  "function,dim,solver,delta_f,ert,n_success,n_trials", rows);
    return 0;
}

int cmd_ecdf(const std::string& in_dir, int n_targets, int samples, std::uint64_t seed) {
    const auto records = read_records_csv(std::filesystem::path(in_dir) / "records.csv");
    if (records.empty())
        throw std::runtime_error("no trials in " + in_dir);

    std::vector<TargetSpec> targets;
    if (n_targets == 1) {
        targets.push_back(TargetSpec{1e-8});
    } else {
        for (const TargetSpec& t : target_ladder(n_targets, 1e-8, 1e2))
            targets.push_back(TargetSpec{snap_to_ladder(t.delta_f, records.front().ladder)});
    }

    std::set<int> dims;
    std::set<std::string> solvers;
    for (const TrialRecord& r : records) {
        dims.insert(r.dim);
        solvers.insert(r.solver_label);
    }
    const auto budgets = default_budget_grid();

    std::vector<std::pair<std::string, std::vector<int>>> panels;
    for (FunctionGroup g : all_groups())
        panels.emplace_back(group_label(g), group_functions(g));
    {
        std::vector<int> all(kFunctionCount);
        for (int f = 1; f <= kFunctionCount; ++f)
            all[f - 1] = f;
        panels.emplace_back("all", all);
    }

    for (int dim : dims) {
        for (const auto& [label, fns] : panels) {
            // One proportion column per solver over a shared budget grid.
            std::vector<std::vector<double>> columns;
            std::vector<std::string> names;
            for (const std::string& solver : solvers) {
                std::vector<std::vector<TrialRecord>> by_function;
                for (int f : fns) {
                    std::vector<TrialRecord> trials;
                    for (const TrialRecord& r : records)
                        if (r.function_id == f && r.dim == dim && r.solver_label == solver)
                            trials.push_back(r);
                    if (!trials.empty())
                        by_function.push_back(std::move(trials));
                }
                if (by_function.empty())
                    continue;
                Rng rng(stream_seed("ecdf", {seed, static_cast<std::uint64_t>(dim),
                                             stream_seed(label, {}), stream_seed(solver, {})}));
                columns.push_back(
                    compute_ecdf(by_function, targets, budgets, samples, rng).proportion);
                names.push_back(solver);
            }
            if (columns.empty())
                continue;
            char fname[64];
            std::snprintf(fname, sizeof fname, "ecdf_%s_%dD.csv", label.c_str(), dim);
            std::ofstream os(std::filesystem::path(in_dir) / fname, std::ios::binary);
            if (!os)
                throw std::runtime_error(std::string("cannot write ") + fname);
            os << "budget_fevals_per_dim";
            for (const std::string& n : names)
                os << ',' << n;
            os << '\n';
            for (std::size_t b = 0; b < budgets.size(); ++b) {
                os << format_num(budgets[b]);
                for (const auto& col : columns)
                    os << ',' << format_num(col[b]);
                os << '\n';
            }
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Algorithm-portfolio benchmark harness for continuous black-box optimization"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a benchmark experiment");
    std::string solver, portfolio, strategy;
    double eps = 0.5;
    std::string functions = "1-10", dims = "2,3,5,10,20";
    ExperimentConfig config;
    run->add_option("--solver", solver, "Solo solver name");
    run->add_option("--portfolio", portfolio, "Comma-separated solver names");
    run->add_option("--strategy", strategy, "Selection strategy: unif or eg");
    run->add_option("--eps", eps, "Epsilon for the eg strategy")->check(CLI::Range(0.0, 1.0));
    run->add_option("--functions", functions, "Function ids (list or a-b ranges)");
    run->add_option("--dims", dims, "Dimensions (comma list)");
    run->add_option("--instances", config.instances, "Instances per (function, dim)")
        ->check(CLI::PositiveNumber);
    run->add_option("--maxfev", config.maxfev, "Evaluation budget per trial")
        ->check(CLI::PositiveNumber);
    run->add_flag("--maxfev-per-dim", config.maxfev_per_dim,
                  "Scale the budget by the dimension");
    run->add_option("--final-delta", config.final_delta, "Stop a trial at this precision")
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", config.master_seed, "Master seed");
    run->add_option("--out", config.output_dir, "Output directory");
    run->add_option("--shortname", config.shortname, "Label used in file names and reports");
    run->add_option("--comments", config.comments, "Free-form note stored in meta.json");
    run->add_option("--jobs", config.jobs, "Parallel trials")->check(CLI::PositiveNumber);

    auto* ert = app.add_subcommand("ert", "Expected running times from a results directory");
    std::string ert_in;
    double ert_delta = -1.0;
    int ert_ladder = 50;
    ert->add_option("--in", ert_in, "Results directory")->required();
    ert->add_option("--delta", ert_delta, "Single precision target")->check(CLI::PositiveNumber);
    ert->add_option("--ladder", ert_ladder, "Number of ladder targets")
        ->check(CLI::Range(2, 1000));

    auto* ecdf = app.add_subcommand("ecdf", "Bootstrapped ECDF curves per group and dimension");
    std::string ecdf_in;
    int ecdf_targets = 50, ecdf_samples = 100;
    std::uint64_t ecdf_seed = 1;
    ecdf->add_option("--in", ecdf_in, "Results directory")->required();
    ecdf->add_option("--targets", ecdf_targets, "Number of targets")->check(CLI::Range(1, 1000));
    ecdf->add_option("--samples", ecdf_samples, "Bootstrap samples per (function, target)")
        ->check(CLI::PositiveNumber);
    ecdf->add_option("--seed", ecdf_seed, "Bootstrap seed");

    try {
        app.parse(argc, argv);
        if (run->parsed())
            return cmd_run(solver, portfolio, strategy, eps, functions, dims, std::move(config));
        if (ert->parsed())
            return cmd_ert(ert_in, ert_delta, ert_ladder);
        return cmd_ecdf(ecdf_in, ecdf_targets, ecdf_samples, ecdf_seed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << "run '" << argv[0] << " --help' for usage\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
