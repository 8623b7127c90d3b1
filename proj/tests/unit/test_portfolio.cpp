#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cocopf/portfolio.hpp"

using namespace cocopf;

namespace {

std::vector<OptimizerSpec> default_portfolio() {
    std::vector<OptimizerSpec> specs;
    for (Method m : all_methods())
        specs.emplace_back(m);
    return specs;
}

} // namespace

TEST_CASE("strategy labels and validation") {
    CHECK(StrategyConfig::unif().label() == "UNIF");
    CHECK(StrategyConfig::epsilon_greedy(0.5).label() == "EG50");
    CHECK(StrategyConfig::epsilon_greedy(0.25).label() == "EG25");
    CHECK_THROWS_AS(StrategyConfig::epsilon_greedy(1.5), std::invalid_argument);
    CHECK_THROWS_AS(StrategyConfig::epsilon_greedy(-0.1), std::invalid_argument);
}

TEST_CASE("population initialization") {
    ProblemInstance inst(1, 2, 1);
    Population pop(default_portfolio(), inst, 1);
    CHECK(pop.size() == 5);
    CHECK(pop.round() == 0);
    CHECK(pop.total_evals() == inst.eval_count());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        CHECK(pop.member(i).iterations == 0);
        CHECK(std::isinf(pop.member(i).y));
    }

    CHECK_THROWS_AS(Population({}, inst, 1), std::invalid_argument);

    ProblemInstance single_inst(1, 2, 1);
    Population single({OptimizerSpec(Method::Powell)}, single_inst, 1);
    CHECK(single.size() == 1);
}

TEST_CASE("same method twice starts from different points") {
    ProblemInstance inst(1, 2, 1);
    Population pop({OptimizerSpec(Method::Powell), OptimizerSpec(Method::Powell)}, inst, 9);
    const auto* a = pop.member(0).runner->hopper();
    const auto* b = pop.member(1).runner->hopper();
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    CHECK(a->anchor_x() != b->anchor_x());
}

TEST_CASE("member_step updates exactly the stepped member") {
    ProblemInstance inst(1, 3, 2);
    Population pop(default_portfolio(), inst, 3);
    const long evals_before = pop.total_evals();
    const auto out = pop.step_member(2, inst);
    CHECK(pop.member(2).iterations == 1);
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (i != 2)
            CHECK(pop.member(i).iterations == 0);
    CHECK(pop.round() == 1);
    CHECK(pop.total_evals() == evals_before + out.evals_used);
    CHECK(pop.total_evals() == inst.eval_count());
    CHECK(pop.mlog().size() == 1);
    CHECK(pop.mlog()[0].member_index == 2);

    CHECK_THROWS_AS(pop.step_member(99, inst), std::out_of_range);
}

TEST_CASE("member incumbents never rise") {
    ProblemInstance inst(8, 3, 3);
    Population pop(default_portfolio(), inst, 5);
    Rng rng(7);
    std::vector<double> prev(pop.size(), std::numeric_limits<double>::infinity());
    for (int i = 0; i < 300; ++i) {
        const std::size_t idx = rng.index(pop.size());
        pop.step_member(idx, inst);
        CHECK(pop.member(idx).y <= prev[idx]);
        prev[idx] = pop.member(idx).y;
    }
    CHECK(pop.total_evals() == inst.eval_count());
    CHECK(pop.round() == 300);
}

TEST_CASE("add_member appends without disturbing the rest") {
    ProblemInstance inst(1, 2, 1);
    Population pop(default_portfolio(), inst, 1);
    for (int i = 0; i < 10; ++i)
        pop.step_member(0, inst);
    const long round_before = pop.round();
    const double y0 = pop.member(0).y;

    const std::size_t idx = pop.add_member(OptimizerSpec(Method::Powell), inst, 77);
    CHECK(idx == 5);
    CHECK(pop.size() == 6);
    CHECK(pop.round() == round_before);
    CHECK(pop.total_evals() == inst.eval_count());

    pop.step_member(idx, inst);
    CHECK(pop.member(idx).iterations == 1);
    CHECK(pop.member(0).iterations == 10);
    CHECK(pop.member(0).y == y0);
}

TEST_CASE("uniform selection is unbiased and deterministic") {
    ProblemInstance inst(1, 2, 1);
    std::vector<OptimizerSpec> specs(7, OptimizerSpec(Method::Powell));
    Population pop(specs, inst, 1);

    Population single({OptimizerSpec(Method::Powell)}, inst, 2);
    Rng r0(1);
    for (int i = 0; i < 10; ++i)
        CHECK(select_unif(single, r0) == 0);

    Rng ra(5), rb(5);
    CHECK(select_unif(pop, ra) == select_unif(pop, rb));

    Rng rng(11);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i)
        ++counts[select_unif(pop, rng)];
    for (int c : counts) {
        const double freq = static_cast<double>(c) / n;
        CHECK(freq >= 0.13);
        CHECK(freq <= 0.156);
    }
}

TEST_CASE("epsilon-greedy selection distribution") {
    const std::vector<double> values = {3.0, 1.0, 4.0, 0.5, 9.0, 2.0, 7.0}; // best is 3

    Rng greedy_rng(1);
    for (int i = 0; i < 100; ++i)
        CHECK(select_epsilon_greedy(values, greedy_rng, 0.0) == 3);

    // eps = 1 reduces to uniform.
    Rng u(3);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i)
        ++counts[select_epsilon_greedy(values, u, 1.0)];
    for (int c : counts)
        CHECK(std::abs(c / 70000.0 - 1.0 / 7.0) < 0.013);

    // eps = 0.5: P(best) = 0.5 + 0.5/7.
    Rng h(5);
    int best = 0;
    const int n = 70000;
    for (int i = 0; i < n; ++i)
        if (select_epsilon_greedy(values, h, 0.5) == 3)
            ++best;
    CHECK(std::abs(best / static_cast<double>(n) - (0.5 + 0.5 / 7.0)) < 0.01);

    // Ties break toward the lowest index.
    const std::vector<double> tied = {2.0, 1.0, 1.0};
    Rng t(9);
    CHECK(select_epsilon_greedy(tied, t, 0.0) == 1);

    CHECK_THROWS_AS(select_epsilon_greedy(std::vector<double>{}, t, 0.5),
                    std::invalid_argument);
}

TEST_CASE("epsilon-greedy is invariant to constant value shifts") {
    const std::vector<double> values = {3.0, 1.0, 4.0, 0.5, 9.0, 2.0, 7.0};
    std::vector<double> shifted = values;
    for (double& v : shifted)
        v += 123.25;
    Rng ra(21), rb(21);
    for (int i = 0; i < 5000; ++i)
        CHECK(select_epsilon_greedy(values, ra, 0.5) ==
              select_epsilon_greedy(shifted, rb, 0.5));
}

TEST_CASE("run_portfolio_trial solves the sphere with EG50") {
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        ProblemInstance inst(1, 2, seed);
        const auto result =
            run_portfolio_trial(default_portfolio(), StrategyConfig::epsilon_greedy(0.5), inst,
                                10000, TargetSpec{1e-8}, seed);
        if (result.record.best_delta_final <= 1e-8)
            ++ok;
        CHECK(result.record.evals_total <= 10000);
        CHECK(result.record.function_id == 1);
        CHECK(result.record.solver_label == "EG50");
    }
    CHECK(ok >= 14);
}

TEST_CASE("a budget below the initialization cost ends the trial immediately") {
    ProblemInstance inst(1, 5, 1);
    const auto result = run_portfolio_trial(default_portfolio(), StrategyConfig::unif(), inst, 3,
                                            TargetSpec{1e-8}, 1);
    // Initialization runs to completion; the loop never starts.
    CHECK(result.record.evals_total == inst.eval_count());
    CHECK(result.record.evals_total > 3);
    CHECK(result.mlog.empty());
    CHECK(result.record.best_delta_final > 1e-8);
}

TEST_CASE("population best equals the minimum member value at every round") {
    ProblemInstance inst(4, 2, 6);
    Population pop(default_portfolio(), inst, 13);
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        pop.step_member(rng.index(pop.size()), inst);
        double lowest = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < pop.size(); ++m)
            lowest = std::min(lowest, pop.member(m).y);
        CHECK(pop.best_y() == lowest);
        CHECK(pop.mlog().back().portfolio_best_delta ==
              doctest::Approx(lowest - inst.f_opt()));
    }
    // The population is the sole evaluator, so its best matches the
    // instance's best.
    CHECK(pop.best_y() == inst.best_f());
}

TEST_CASE("trials are byte-for-byte deterministic in their mlog") {
    auto run = [] {
        ProblemInstance inst(6, 3, 2);
        return run_portfolio_trial(default_portfolio(), StrategyConfig::epsilon_greedy(0.5),
                                   inst, 2500, TargetSpec{1e-8}, 99);
    };
    const auto a = run();
    const auto b = run();
    REQUIRE(a.mlog.size() == b.mlog.size());
    for (std::size_t i = 0; i < a.mlog.size(); ++i) {
        CHECK(a.mlog[i].round == b.mlog[i].round);
        CHECK(a.mlog[i].member_index == b.mlog[i].member_index);
        CHECK(a.mlog[i].member_evals == b.mlog[i].member_evals);
        CHECK(a.mlog[i].total_evals == b.mlog[i].total_evals);
        CHECK(a.mlog[i].member_best_delta == b.mlog[i].member_best_delta);
        CHECK(a.mlog[i].portfolio_best_delta == b.mlog[i].portfolio_best_delta);
    }
}

TEST_CASE("mlog rows carry consistent accounting") {
    ProblemInstance inst(2, 3, 1);
    const auto result = run_portfolio_trial(default_portfolio(), StrategyConfig::unif(), inst,
                                            3000, TargetSpec{1e-8}, 5);
    long prev_total = 0;
    double prev_best = std::numeric_limits<double>::infinity();
    for (const auto& row : result.mlog) {
        CHECK(row.total_evals > prev_total);
        CHECK(row.portfolio_best_delta <= prev_best);
        prev_total = row.total_evals;
        prev_best = row.portfolio_best_delta;
    }
    // Target attainment indices are consistent with the trace.
    const auto& ladder = result.record.ladder;
    for (std::size_t t = 0; t < ladder.size(); ++t) {
        if (!result.record.hits[t])
            continue;
        const long hit = *result.record.hits[t];
        for (const auto& row : result.mlog)
            if (row.portfolio_best_delta <= ladder[t].delta_f) {
                CHECK(hit <= row.total_evals);
                break;
            }
    }
}
