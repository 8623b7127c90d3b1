// Acceptance suite: end-to-end checks of the portfolio framework's central
// contracts, run as one criterion per line. Statistical checks use fixed
// seeds and desk-scale budgets.
//
// Usage: cocopf_acceptance [path-to-cli-binary]

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>
#include <vector>

#include "cocopf/experiment.hpp"
#include "cocopf/io.hpp"
#include "cocopf/metrics.hpp"

namespace fs = std::filesystem;
using namespace cocopf;

namespace {

std::string g_cli_path;

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned jobs = std::max(2u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
}

std::vector<OptimizerSpec> full_portfolio() {
    std::vector<OptimizerSpec> specs;
    for (Method m : all_methods())
        specs.emplace_back(m);
    return specs;
}

struct EvalTrace {
    std::vector<std::vector<double>> points;
    std::vector<double> values;

    bool operator==(const EvalTrace& o) const {
        return points == o.points && values == o.values;
    }
};

void attach_recorder(ProblemInstance& inst, EvalTrace& trace) {
    inst.set_eval_observer([&trace](std::span<const double> x, double f) {
        trace.points.emplace_back(x.begin(), x.end());
        trace.values.push_back(f);
    });
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is)
        return "<unreadable:" + p.string() + ">";
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

// ---------------------------------------------------------------- criterion 1

bool criterion_stepwise_equivalence(std::string& detail) {
    int runs = 0, mismatches = 0;
    for (Method m : all_methods()) {
        for (int fid : {1, 4, 6}) {
            for (int dim : {2, 5}) {
                for (std::uint64_t seed = 1; seed <= 20; ++seed) {
                    Rng x0_rng(stream_seed("acc1-x0", {seed, static_cast<std::uint64_t>(fid),
                                                       static_cast<std::uint64_t>(dim)}));
                    std::vector<double> x0(dim);
                    for (double& v : x0)
                        v = x0_rng.uniform(-5.0, 5.0);

                    // Reference: an uninterrupted driving loop.
                    EvalTrace ref;
                    {
                        ProblemInstance inst(fid, dim, seed);
                        attach_recorder(inst, ref);
                        auto opt = init_optimizer(OptimizerSpec(m), inst, x0, seed);
                        for (int i = 0; i < 60 && opt->status() == OptimizerStatus::Running; ++i)
                            opt->step(inst);
                    }

                    // Step-at-a-time driving with a decoy optimizer advancing
                    // on its own instance between every step.
                    EvalTrace stepped;
                    {
                        ProblemInstance inst(fid, dim, seed);
                        attach_recorder(inst, stepped);
                        ProblemInstance decoy_inst(5, dim, 77);
                        auto decoy = init_optimizer(OptimizerSpec(m), decoy_inst, x0, 123);
                        auto opt = init_optimizer(OptimizerSpec(m), inst, x0, seed);
                        for (int i = 0; i < 60 && opt->status() == OptimizerStatus::Running; ++i) {
                            opt->step(inst);
                            if (decoy->status() == OptimizerStatus::Running)
                                decoy->step(decoy_inst);
                        }
                    }

                    ++runs;
                    if (!(ref == stepped))
                        ++mismatches;
                }
            }
        }
    }
    std::ostringstream os;
    os << runs << " runs, " << mismatches << " evaluation-sequence mismatches";
    detail = os.str();
    return mismatches == 0;
}

// ---------------------------------------------------------------- criterion 2

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + g_cli_path + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

bool dirs_equal(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<fs::path> names;
    for (const auto& entry : fs::directory_iterator(a))
        names.push_back(entry.path().filename());
    std::sort(names.begin(), names.end());
    for (const auto& name : names) {
        if (slurp(a / name) != slurp(b / name)) {
            why = name.string() + " differs";
            return false;
        }
    }
    return true;
}

bool criterion_run_determinism(std::string& detail) {
    if (g_cli_path.empty()) {
        detail = "no CLI binary path given";
        return false;
    }
    const fs::path base = fs::temp_directory_path() / "cocopf-acceptance";
    fs::remove_all(base);
    fs::create_directories(base);

    const std::string common =
        "run --portfolio NelderMead,Powell,CG,BFGS,CMA --strategy eg --eps 0.5 "
        "--functions 1,3 --dims 2,3 --instances 2 --maxfev 2000 --seed 7 --out ";
    const fs::path a = base / "a", b = base / "b", c = base / "c";
    if (run_cli(common + a.string()) != 0 || run_cli(common + b.string()) != 0 ||
        run_cli(common + c.string() + " --jobs 4") != 0) {
        detail = "CLI invocation failed";
        return false;
    }

    const std::string solo =
        "run --solver Powell --functions 1 --dims 2 --instances 2 --maxfev 2000 --seed 3 --out ";
    const fs::path sa = base / "sa", sb = base / "sb";
    if (run_cli(solo + sa.string()) != 0 || run_cli(solo + sb.string()) != 0) {
        detail = "solo CLI invocation failed";
        return false;
    }

    std::string why;
    if (!dirs_equal(a, b, why)) {
        detail = "rerun: " + why;
        return false;
    }
    if (!dirs_equal(a, c, why)) {
        detail = "--jobs 4: " + why;
        return false;
    }
    if (!dirs_equal(sa, sb, why)) {
        detail = "solo rerun: " + why;
        return false;
    }
    detail = "portfolio rerun, --jobs 4 and solo rerun all byte-identical";
    return true;
}

// ---------------------------------------------------------------- criterion 3

TrialRecord record_from_trace(const std::vector<double>& best_deltas,
                              const std::vector<TargetSpec>& ladder) {
    TrialRecord r;
    r.function_id = 1;
    r.dim = 2;
    r.instance_seed = 1;
    r.solver_label = "S";
    r.evals_total = static_cast<long>(best_deltas.size());
    r.best_delta_final = best_deltas.back();
    r.ladder = ladder;
    r.hits.assign(ladder.size(), std::nullopt);
    for (std::size_t t = 0; t < ladder.size(); ++t)
        for (std::size_t e = 0; e < best_deltas.size(); ++e)
            if (best_deltas[e] <= ladder[t].delta_f) {
                r.hits[t] = static_cast<long>(e + 1);
                break;
            }
    return r;
}

bool criterion_ert_oracle(std::string& detail) {
    // Worked example: successes at 100 and 200 evaluations plus one failed
    // 1000-evaluation trial average to (100+200+1000)/2.
    {
        const std::vector<TargetSpec> ladder = {TargetSpec{1e-6}};
        std::vector<double> t1(100, 1.0), t2(200, 1.0), t3(1000, 1.0);
        t1.back() = 1e-7;
        t2.back() = 1e-7;
        std::vector<TrialRecord> trials = {record_from_trace(t1, ladder),
                                           record_from_trace(t2, ladder),
                                           record_from_trace(t3, ladder)};
        const auto r = compute_ert(trials, 1e-6);
        if (r.ert != 650.0 || r.n_success != 2) {
            detail = "worked example gave ert=" + std::to_string(r.ert);
            return false;
        }
    }

    Rng rng(2024);
    const auto ladder = target_ladder(10, 1e-7, 1e2);
    int exact = 0;
    for (int fixture = 0; fixture < 50; ++fixture) {
        const int n_trials = 1 + static_cast<int>(rng.index(8));
        std::vector<std::vector<double>> traces(n_trials);
        std::vector<TrialRecord> records;
        for (auto& trace : traces) {
            const int len = 5 + static_cast<int>(rng.index(300));
            double best = std::pow(10.0, rng.uniform(1.0, 4.0));
            for (int e = 0; e < len; ++e) {
                if (rng.uniform01() < 0.25)
                    best *= std::pow(10.0, -rng.uniform(0.0, 1.8));
                trace.push_back(best);
            }
            records.push_back(record_from_trace(trace, ladder));
        }
        const double delta = ladder[rng.index(ladder.size())].delta_f;

        // Brute-force replay of the per-evaluation definition.
        long n_success = 0;
        double spent = 0.0;
        for (const auto& trace : traces) {
            long count = 0;
            bool reached = false;
            for (double b : trace) {
                ++count;
                if (b <= delta) {
                    reached = true;
                    break;
                }
            }
            spent += static_cast<double>(count);
            if (reached)
                ++n_success;
        }

        const auto r = compute_ert(records, delta);
        const bool match = n_success == 0 ? std::isinf(r.ert) && r.n_success == 0
                                          : r.ert == spent / n_success &&
                                                r.n_success == n_success;
        if (match)
            ++exact;
    }
    std::ostringstream os;
    os << exact << "/50 randomized fixtures match the replay exactly";
    detail = os.str();
    return exact == 50;
}

// ---------------------------------------------------------------- criterion 4

TrialRecord run_solo_trial(Method m, int fid, int dim, std::uint64_t instance,
                           long budget, const std::vector<TargetSpec>& ladder) {
    ProblemInstance inst(fid, dim, instance);
    return run_portfolio_trial({OptimizerSpec(m)}, StrategyConfig::unif(), inst, budget,
                               TargetSpec{1e-8}, trial_seed(1, fid, dim, instance),
                               std::string(method_name(m)), ladder)
        .record;
}

bool criterion_solo_convergence(std::string& detail) {
    std::ostringstream os;
    bool ok = true;
    for (Method m : all_methods()) {
        std::atomic<int> successes{0};
        parallel_for(15, [&](std::size_t i) {
            const auto rec = run_solo_trial(m, 1, 2, i + 1, 10000, standard_ladder());
            if (rec.best_delta_final <= 1e-8)
                ++successes;
        });
        os << method_name(m) << "=" << successes.load() << "/15 ";
        if (successes.load() < 14)
            ok = false;
    }
    detail = os.str() + "(need >= 14/15 each)";
    return ok;
}

// ------------------------------------------------------------- criteria 5 & 6

double ladder_rung_near(const std::vector<TargetSpec>& ladder, double delta) {
    double best = ladder.front().delta_f;
    double gap = std::abs(std::log10(best / delta));
    for (const auto& t : ladder) {
        const double g = std::abs(std::log10(t.delta_f / delta));
        if (g < gap) {
            gap = g;
            best = t.delta_f;
        }
    }
    return best;
}

std::map<Method, ErtResult> ert_per_method(const std::vector<Method>& methods, int fid, int dim,
                                           long budget, double delta, int n_instances) {
    // 51-rung ladder puts 1e-6 (very nearly) on the grid.
    const auto ladder = target_ladder(51, 1e-8, 1e2);
    const double rung = ladder_rung_near(ladder, delta);

    struct Job {
        Method m;
        std::uint64_t instance;
    };
    std::vector<Job> jobs;
    for (Method m : methods)
        for (int i = 1; i <= n_instances; ++i)
            jobs.push_back({m, static_cast<std::uint64_t>(i)});
    std::vector<TrialRecord> records(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        records[i] = run_solo_trial(jobs[i].m, fid, dim, jobs[i].instance, budget, ladder);
    });

    std::map<Method, ErtResult> out;
    for (Method m : methods) {
        std::vector<TrialRecord> mine;
        for (std::size_t i = 0; i < jobs.size(); ++i)
            if (jobs[i].m == m)
                mine.push_back(records[i]);
        out[m] = compute_ert(mine, rung);
    }
    return out;
}

std::string fmt_ert(const ErtResult& r) {
    std::ostringstream os;
    if (std::isinf(r.ert))
        os << "inf";
    else
        os << static_cast<long>(r.ert);
    os << "(" << r.n_success << "/" << r.n_trials << ")";
    return os.str();
}

bool criterion_cma_overtakes(std::string& detail) {
    const std::vector<Method> methods = {Method::CMA, Method::NelderMead, Method::Powell};
    bool ok = true;
    std::ostringstream os;
    for (int fid : {6, 8}) {
        const auto erts = ert_per_method(methods, fid, 10, 100000, 1e-6, 15);
        const auto& cma = erts.at(Method::CMA);
        const auto& nm = erts.at(Method::NelderMead);
        const auto& pw = erts.at(Method::Powell);
        os << "f" << fid << ": CMA=" << fmt_ert(cma) << " NM=" << fmt_ert(nm)
           << " Powell=" << fmt_ert(pw) << " ";
        if (!(std::isfinite(cma.ert) && cma.ert < nm.ert && cma.ert < pw.ert))
            ok = false;
    }
    detail = os.str() + "(need finite CMA below both)";
    return ok;
}

bool criterion_separable_advantage(std::string& detail) {
    const std::vector<Method> methods = {Method::Powell, Method::CMA};
    const auto erts = ert_per_method(methods, 2, 5, 10000, 1e-6, 15);
    const auto& pw = erts.at(Method::Powell);
    const auto& cma = erts.at(Method::CMA);
    std::ostringstream os;
    os << "f2: Powell=" << fmt_ert(pw) << " CMA=" << fmt_ert(cma) << " (need Powell below CMA)";
    detail = os.str();
    return pw.ert < cma.ert;
}

// ---------------------------------------------------------------- criterion 7

struct SolverDef {
    std::string label;
    std::vector<OptimizerSpec> portfolio;
    StrategyConfig strategy;
};

bool criterion_selection_beneficial(std::string& detail) {
    std::vector<SolverDef> solvers;
    for (Method m : all_methods())
        solvers.push_back({std::string(method_name(m)), {OptimizerSpec(m)},
                           StrategyConfig::unif()});
    solvers.push_back({"UNIF", full_portfolio(), StrategyConfig::unif()});
    solvers.push_back({"EG50", full_portfolio(), StrategyConfig::epsilon_greedy(0.5)});

    constexpr int kDim = 5;
    constexpr long kBudget = 10000;
    constexpr int kInstances = 15;

    struct Job {
        std::size_t solver;
        int fid;
        std::uint64_t instance;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < solvers.size(); ++s)
        for (int fid = 1; fid <= kFunctionCount; ++fid)
            for (int i = 1; i <= kInstances; ++i)
                jobs.push_back({s, fid, static_cast<std::uint64_t>(i)});

    std::vector<TrialRecord> records(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const Job& job = jobs[i];
        const SolverDef& solver = solvers[job.solver];
        ProblemInstance inst(job.fid, kDim, job.instance);
        records[i] = run_portfolio_trial(solver.portfolio, solver.strategy, inst, kBudget,
                                         TargetSpec{1e-8},
                                         trial_seed(1, job.fid, kDim, job.instance),
                                         solver.label, standard_ladder())
                         .record;
    });

    // Final-budget aggregate ECDF proportion per solver.
    const auto budgets = default_budget_grid();
    std::map<std::string, double> final_proportion;
    for (std::size_t s = 0; s < solvers.size(); ++s) {
        std::vector<std::vector<TrialRecord>> by_function(kFunctionCount);
        for (std::size_t i = 0; i < jobs.size(); ++i)
            if (jobs[i].solver == s)
                by_function[jobs[i].fid - 1].push_back(records[i]);
        Rng rng(stream_seed("acc7-ecdf", {s}));
        const auto curve =
            compute_ecdf(by_function, standard_ladder(), budgets, 100, rng);
        final_proportion[solvers[s].label] = curve.proportion.back();
    }

    double member_worst = 1.0, member_best = 0.0;
    for (Method m : all_methods()) {
        const double p = final_proportion.at(std::string(method_name(m)));
        member_worst = std::min(member_worst, p);
        member_best = std::max(member_best, p);
    }
    const double eg = final_proportion.at("EG50");
    const double unif = final_proportion.at("UNIF");

    std::ostringstream os;
    os.precision(3);
    os << std::fixed << "EG50=" << eg << " UNIF=" << unif << " members=[";
    for (Method m : all_methods())
        os << method_name(m) << "=" << final_proportion.at(std::string(method_name(m))) << " ";
    os << "]";
    detail = os.str();

    return eg >= member_worst && eg >= unif - 0.05 && eg >= member_best - 0.20;
}

// ---------------------------------------------------------------- criterion 8

bool criterion_epsilon_greedy_distribution(std::string& detail) {
    const std::vector<double> values = {3.0, 1.0, 4.0, 0.5, 9.0, 2.0, 7.0}; // argmin at 3
    Rng rng(88);
    const int n = 70000;
    int best = 0;
    for (int i = 0; i < n; ++i)
        if (select_epsilon_greedy(values, rng, 0.5) == 3)
            ++best;
    const double observed = static_cast<double>(best) / n;
    const double expected = 0.5 + 0.5 / 7.0;
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << "P(best)=" << observed << " expected=" << expected << " (+-0.01)";
    detail = os.str();
    return std::abs(observed - expected) <= 0.01;
}

// ---------------------------------------------------------------- criterion 9

bool criterion_ecdf_bootstrap_properties(std::string& detail) {
    // Ladder endpoints must be exact.
    const auto ladder = target_ladder(50, 1e-8, 1e2);
    if (ladder.front().delta_f != 1e2 || ladder.back().delta_f != 1e-8 || ladder.size() != 50) {
        detail = "ladder endpoints are not exact";
        return false;
    }

    // Bootstrap geometric fixture: one success at 100 evals plus one 1000-
    // eval failure has expected restart length 100 + 1000*q/(1-q), q = 1/2.
    const std::vector<TargetSpec> one = {TargetSpec{1e-6}};
    std::vector<double> succ(100, 1.0);
    succ.back() = 1e-7;
    const std::vector<double> fail(1000, 1.0);
    const std::vector<TrialRecord> mix = {record_from_trace(succ, one),
                                          record_from_trace(fail, one)};
    Rng rng(99);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        sum += bootstrap_runlength(mix, 1e-6, rng);
    const double mean = sum / n;
    if (std::abs(mean - 1100.0) > 0.05 * 1100.0) {
        detail = "bootstrap mean " + std::to_string(mean) + " not within 5% of 1100";
        return false;
    }

    // ECDF curves over a random mix of traces are monotone within [0, 1].
    Rng gen(123);
    std::vector<std::vector<TrialRecord>> groups(3);
    for (auto& group : groups) {
        for (int t = 0; t < 5; ++t) {
            std::vector<double> trace;
            double best = 1e3;
            const int len = 50 + static_cast<int>(gen.index(400));
            for (int e = 0; e < len; ++e) {
                if (gen.uniform01() < 0.2)
                    best /= 10.0;
                trace.push_back(best);
            }
            group.push_back(record_from_trace(trace, target_ladder(20, 1e-8, 1e2)));
        }
    }
    Rng boot(5);
    const auto curve = compute_ecdf(groups, target_ladder(20, 1e-8, 1e2),
                                    default_budget_grid(), 50, boot);
    for (std::size_t i = 0; i < curve.proportion.size(); ++i) {
        const double p = curve.proportion[i];
        if (p < 0.0 || p > 1.0 || (i > 0 && p < curve.proportion[i - 1])) {
            detail = "ECDF curve not monotone within [0,1]";
            return false;
        }
    }

    std::ostringstream os;
    os.precision(1);
    os << std::fixed << "bootstrap mean=" << mean << ", curves monotone, endpoints exact";
    detail = os.str();
    return true;
}

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
};

} // namespace

int main(int argc, char** argv) {
    if (argc > 1)
        g_cli_path = argv[1];

    const std::vector<Criterion> criteria = {
        {1, "stepwise/continuous equivalence", criterion_stepwise_equivalence},
        {2, "seeded run determinism (incl. --jobs 4)", criterion_run_determinism},
        {3, "ERT oracle equivalence", criterion_ert_oracle},
        {4, "solo convergence on the 2-D sphere", criterion_solo_convergence},
        {5, "CMA overtakes NM/Powell on rotated f6/f8", criterion_cma_overtakes},
        {6, "Powell beats CMA on the separable ellipsoid", criterion_separable_advantage},
        {7, "selection strategy is beneficial (aggregate ECDF)", criterion_selection_beneficial},
        {8, "epsilon-greedy selection distribution", criterion_epsilon_greedy_distribution},
        {9, "ECDF/bootstrap properties", criterion_ecdf_bootstrap_properties},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto started = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::printf("%s  %d %s [%.1fs] %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs,
                    detail.c_str());
        std::fflush(stdout);
        if (!ok)
            ++failures;
    }
    if (failures > 0)
        std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
