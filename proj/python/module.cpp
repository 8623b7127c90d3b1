#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cocopf/experiment.hpp"
#include "cocopf/io.hpp"
#include "cocopf/metrics.hpp"

namespace py = pybind11;
using namespace cocopf;

namespace {

std::map<std::string, double> to_params(const py::dict& d) {
    std::map<std::string, double> params;
    for (auto item : d)
        params[py::cast<std::string>(item.first)] = py::cast<double>(item.second);
    return params;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Algorithm portfolios of step-resumable optimizers on a black-box "
              "benchmark suite, with ERT/ECDF reporting";

    py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);

    py::enum_<FunctionGroup>(m, "FunctionGroup")
        .value("SEPARABLE", FunctionGroup::Separable)
        .value("MODERATE", FunctionGroup::Moderate)
        .value("ILL_CONDITIONED", FunctionGroup::IllConditioned)
        .value("MULTI_MODAL", FunctionGroup::MultiModal)
        .value("WEAKLY_STRUCTURED", FunctionGroup::WeaklyStructured);

    m.def("function_group", &function_group, py::arg("function_id"));
    m.def("function_name", [](int f) { return std::string(function_name(f)); },
          py::arg("function_id"));
    m.def("group_label", [](FunctionGroup g) { return std::string(group_label(g)); });
    m.def("group_functions", &group_functions);
    m.def("all_groups", &all_groups);

    py::class_<TargetSpec>(m, "TargetSpec")
        .def(py::init<double>(), py::arg("delta_f"))
        .def_readwrite("delta_f", &TargetSpec::delta_f)
        .def("target_value", &TargetSpec::target_value, py::arg("f_opt"))
        .def("__repr__", [](const TargetSpec& t) {
            std::ostringstream os;
            os << "TargetSpec(delta_f=" << t.delta_f << ")";
            return os.str();
        });

    m.def("target_ladder", &target_ladder, py::arg("n"), py::arg("low"), py::arg("high"));
    m.def("standard_ladder", [] { return standard_ladder(); });

    py::class_<ProblemInstance>(m, "ProblemInstance")
        .def(py::init<int, int, std::uint64_t>(), py::arg("function_id"), py::arg("dim"),
             py::arg("instance_seed"))
        .def_static("with_optimum", &ProblemInstance::with_optimum, py::arg("function_id"),
                    py::arg("dim"), py::arg("x_opt"), py::arg("f_opt"))
        .def("evaluate",
             [](ProblemInstance& self, const std::vector<double>& x) { return self.evaluate(x); },
             py::arg("x"))
        .def("best_delta", &ProblemInstance::best_delta)
        .def_property_readonly("function_id", &ProblemInstance::function_id)
        .def_property_readonly("dim", &ProblemInstance::dim)
        .def_property_readonly("instance_seed", &ProblemInstance::instance_seed)
        .def_property_readonly("f_opt", &ProblemInstance::f_opt)
        .def_property_readonly("x_opt", &ProblemInstance::x_opt)
        .def_property_readonly("rotation", &ProblemInstance::rotation)
        .def_property_readonly("eval_count", &ProblemInstance::eval_count)
        .def_property_readonly("best_f", &ProblemInstance::best_f)
        .def_property_readonly("best_x", &ProblemInstance::best_x)
        .def("set_budget", &ProblemInstance::set_budget, py::arg("max_evals"))
        .def("attach_target_ladder", &ProblemInstance::attach_target_ladder, py::arg("ladder"))
        .def_property_readonly("target_ladder", &ProblemInstance::target_ladder)
        .def_property_readonly("target_hits",
                               [](const ProblemInstance& self) {
                                   py::list out;
                                   for (const auto& h : self.target_hits())
                                       out.append(h ? py::cast(*h) : py::none());
                                   return out;
                               })
        .def("set_eval_observer",
             [](ProblemInstance& self, py::object cb) {
                 if (cb.is_none()) {
                     self.set_eval_observer({});
                     return;
                 }
                 self.set_eval_observer([cb](std::span<const double> x, double f) {
                     cb(std::vector<double>(x.begin(), x.end()), f);
                 });
             },
             py::arg("callback"));

    py::enum_<Method>(m, "Method")
        .value("NELDER_MEAD", Method::NelderMead)
        .value("POWELL", Method::Powell)
        .value("CG", Method::CG)
        .value("BFGS", Method::BFGS)
        .value("CMA", Method::CMA);
    m.def("all_methods", &all_methods);
    m.def("method_name", [](Method m_) { return std::string(method_name(m_)); });

    py::class_<OptimizerSpec>(m, "OptimizerSpec")
        .def(py::init([](const std::string& name, const py::dict& params) {
                 return OptimizerSpec::from_name(name, to_params(params));
             }),
             py::arg("name"), py::arg("params") = py::dict())
        .def(py::init([](Method method, const py::dict& params) {
                 return OptimizerSpec(method, to_params(params));
             }),
             py::arg("method"), py::arg("params") = py::dict())
        .def_readonly("method", &OptimizerSpec::method)
        .def_property_readonly("name",
                               [](const OptimizerSpec& s) { return std::string(s.name()); })
        .def_readonly("params", &OptimizerSpec::params);

    py::enum_<OptimizerStatus>(m, "OptimizerStatus")
        .value("RUNNING", OptimizerStatus::Running)
        .value("CONVERGED", OptimizerStatus::Converged)
        .value("FAILED", OptimizerStatus::Failed);

    py::class_<StepOutcome>(m, "StepOutcome")
        .def_readonly("evals_used", &StepOutcome::evals_used)
        .def_readonly("best_x", &StepOutcome::best_x)
        .def_readonly("best_y", &StepOutcome::best_y)
        .def_readonly("converged", &StepOutcome::converged);

    py::class_<Optimizer>(m, "Optimizer")
        .def("step", &Optimizer::step, py::arg("instance"))
        .def_property_readonly("status", &Optimizer::status)
        .def_property_readonly("iteration_count", &Optimizer::iteration_count)
        .def_property_readonly("spec", &Optimizer::spec)
        .def_property_readonly("best_x", &Optimizer::best_x)
        .def_property_readonly("best_y", &Optimizer::best_y)
        .def_property_readonly("init_evals", &Optimizer::init_evals);

    m.def("init_optimizer",
          [](const OptimizerSpec& spec, ProblemInstance& inst, const std::vector<double>& x0,
             std::uint64_t seed) { return init_optimizer(spec, inst, x0, seed); },
          py::arg("spec"), py::arg("instance"), py::arg("x0"), py::arg("seed"));
    m.def("fd_gradient",
          [](ProblemInstance& inst, const std::vector<double>& x, double h) {
              return fd_gradient(inst, x, h);
          },
          py::arg("instance"), py::arg("x"), py::arg("h"));
    m.def("cma_default_lambda", &cma_default_lambda, py::arg("dim"));

    py::class_<BasinHoppingParams>(m, "BasinHoppingParams")
        .def(py::init<>())
        .def_readwrite("temperature", &BasinHoppingParams::temperature)
        .def_readwrite("step_size", &BasinHoppingParams::step_size)
        .def_readwrite("hops_per_restart", &BasinHoppingParams::hops_per_restart)
        .def_readwrite("start_lo", &BasinHoppingParams::start_lo)
        .def_readwrite("start_hi", &BasinHoppingParams::start_hi);

    py::class_<BasinHopper>(m, "BasinHopper")
        .def(py::init<OptimizerSpec, ProblemInstance&, std::uint64_t, BasinHoppingParams>(),
             py::arg("spec"), py::arg("instance"), py::arg("seed"),
             py::arg("params") = BasinHoppingParams{})
        .def("step", &BasinHopper::step, py::arg("instance"))
        .def_property_readonly("hop_count", &BasinHopper::hop_count)
        .def_property_readonly("anchor_x", &BasinHopper::anchor_x)
        .def_property_readonly("anchor_y", &BasinHopper::anchor_y)
        .def_property_readonly("best_x", &BasinHopper::best_x)
        .def_property_readonly("best_y", &BasinHopper::best_y)
        .def_property_readonly("init_evals", &BasinHopper::init_evals);

    py::class_<StrategyConfig> strategy(m, "StrategyConfig");
    py::enum_<StrategyConfig::Kind>(strategy, "Kind")
        .value("UNIF", StrategyConfig::Kind::Unif)
        .value("EPSILON_GREEDY", StrategyConfig::Kind::EpsilonGreedy);
    strategy.def_static("unif", &StrategyConfig::unif)
        .def_static("epsilon_greedy", &StrategyConfig::epsilon_greedy, py::arg("eps"))
        .def_readonly("kind", &StrategyConfig::kind)
        .def_readonly("epsilon", &StrategyConfig::epsilon)
        .def("label", &StrategyConfig::label);

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &Rng::next_u64)
        .def("uniform01", &Rng::uniform01)
        .def("uniform", &Rng::uniform, py::arg("lo"), py::arg("hi"))
        .def("normal", &Rng::normal)
        .def("index", &Rng::index, py::arg("n"));
    m.def("stream_seed",
          [](const std::string& tag, const std::vector<std::uint64_t>& parts) {
              std::uint64_t h = stream_seed(tag, {});
              for (std::uint64_t p : parts)
                  h = mix64(h ^ p);
              return h;
          },
          py::arg("tag"), py::arg("parts") = std::vector<std::uint64_t>{});

    py::class_<Member>(m, "Member")
        .def_readonly("method_name", &Member::method_name)
        .def_readonly("x", &Member::x)
        .def_readonly("y", &Member::y)
        .def_readonly("iterations", &Member::iterations)
        .def_readonly("evals", &Member::evals);

    py::class_<Population>(m, "Population")
        .def(py::init<const std::vector<OptimizerSpec>&, ProblemInstance&, std::uint64_t>(),
             py::arg("portfolio"), py::arg("instance"), py::arg("seed"))
        .def("add_member", &Population::add_member, py::arg("spec"), py::arg("instance"),
             py::arg("seed"))
        .def("step_member", &Population::step_member, py::arg("idx"), py::arg("instance"))
        .def("__len__", &Population::size)
        .def("member", &Population::member, py::arg("idx"),
             py::return_value_policy::reference_internal)
        .def_property_readonly("round", &Population::round)
        .def_property_readonly("total_evals", &Population::total_evals)
        .def_property_readonly("mlog", &Population::mlog)
        .def_property_readonly("best_index", &Population::best_index)
        .def_property_readonly("best_y", &Population::best_y)
        .def_property_readonly("member_values", &Population::member_values);

    m.def("select_unif", &select_unif, py::arg("population"), py::arg("rng"));
    m.def("select_epsilon_greedy",
          [](const std::vector<double>& values, Rng& rng, double eps) {
              return select_epsilon_greedy(values, rng, eps);
          },
          py::arg("member_values"), py::arg("rng"), py::arg("epsilon"));
    m.def("select_member", &select_member, py::arg("population"), py::arg("strategy"),
          py::arg("rng"));

    py::class_<TrialRecord>(m, "TrialRecord")
        .def(py::init<>())
        .def_readwrite("function_id", &TrialRecord::function_id)
        .def_readwrite("dim", &TrialRecord::dim)
        .def_readwrite("instance_seed", &TrialRecord::instance_seed)
        .def_readwrite("solver_label", &TrialRecord::solver_label)
        .def_readwrite("evals_total", &TrialRecord::evals_total)
        .def_readwrite("best_delta_final", &TrialRecord::best_delta_final)
        .def_readwrite("ladder", &TrialRecord::ladder)
        .def_property(
            "hits",
            [](const TrialRecord& r) {
                py::list out;
                for (const auto& h : r.hits)
                    out.append(h ? py::cast(*h) : py::none());
                return out;
            },
            [](TrialRecord& r, const py::list& hits) {
                r.hits.clear();
                for (auto h : hits)
                    r.hits.push_back(h.is_none() ? std::optional<long>{}
                                                 : std::optional<long>{py::cast<long>(h)});
            })
        .def("hit_for", &TrialRecord::hit_for, py::arg("delta_f"))
        .def("succeeded_at", &TrialRecord::succeeded_at, py::arg("delta_f"));

    py::class_<MLogRow>(m, "MLogRow")
        .def_readonly("round", &MLogRow::round)
        .def_readonly("member_index", &MLogRow::member_index)
        .def_readonly("member_name", &MLogRow::member_name)
        .def_readonly("member_evals", &MLogRow::member_evals)
        .def_readonly("total_evals", &MLogRow::total_evals)
        .def_readonly("member_best_delta", &MLogRow::member_best_delta)
        .def_readonly("portfolio_best_delta", &MLogRow::portfolio_best_delta);

    py::class_<TrialResult>(m, "TrialResult")
        .def_readonly("record", &TrialResult::record)
        .def_readonly("mlog", &TrialResult::mlog);

    m.def("run_portfolio_trial", &run_portfolio_trial, py::arg("portfolio"),
          py::arg("strategy"), py::arg("instance"), py::arg("budget"), py::arg("final_target"),
          py::arg("seed"), py::arg("solver_label") = "",
          py::arg("ladder") = standard_ladder());

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("functions", &ExperimentConfig::functions)
        .def_readwrite("dims", &ExperimentConfig::dims)
        .def_readwrite("instances", &ExperimentConfig::instances)
        .def_readwrite("maxfev", &ExperimentConfig::maxfev)
        .def_readwrite("maxfev_per_dim", &ExperimentConfig::maxfev_per_dim)
        .def_readwrite("solo", &ExperimentConfig::solo)
        .def_readwrite("portfolio", &ExperimentConfig::portfolio)
        .def_readwrite("strategy", &ExperimentConfig::strategy)
        .def_readwrite("final_delta", &ExperimentConfig::final_delta)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("output_dir", &ExperimentConfig::output_dir)
        .def_readwrite("shortname", &ExperimentConfig::shortname)
        .def_readwrite("comments", &ExperimentConfig::comments)
        .def_readwrite("jobs", &ExperimentConfig::jobs)
        .def("solver_label", &ExperimentConfig::solver_label)
        .def("budget_for_dim", &ExperimentConfig::budget_for_dim, py::arg("dim"));

    py::class_<ExperimentSummary>(m, "ExperimentSummary")
        .def_readonly("trials", &ExperimentSummary::trials)
        .def_readonly("successes", &ExperimentSummary::successes);

    m.def("run_experiment",
          [](const ExperimentConfig& config, bool verbose) {
              py::gil_scoped_release release;
              return run_experiment(config, verbose ? &std::cout : nullptr);
          },
          py::arg("config"), py::arg("verbose") = false);
    m.def("progress_report", &progress_report, py::arg("trial"), py::arg("elapsed_seconds"));
    m.def("trial_seed", &trial_seed, py::arg("master_seed"), py::arg("function_id"),
          py::arg("dim"), py::arg("instance_seed"));

    py::class_<ErtResult>(m, "ErtResult")
        .def_readonly("delta_f", &ErtResult::delta_f)
        .def_readonly("ert", &ErtResult::ert)
        .def_readonly("n_success", &ErtResult::n_success)
        .def_readonly("n_trials", &ErtResult::n_trials);

    m.def("compute_ert",
          [](const std::vector<TrialRecord>& trials, double delta) {
              return compute_ert(trials, delta);
          },
          py::arg("trials"), py::arg("delta_f"));
    m.def("bootstrap_runlength",
          [](const std::vector<TrialRecord>& trials, double delta, Rng& rng) {
              return bootstrap_runlength(trials, delta, rng);
          },
          py::arg("trials"), py::arg("delta_f"), py::arg("rng"));

    py::class_<EcdfCurve>(m, "EcdfCurve")
        .def_readonly("budgets", &EcdfCurve::budgets)
        .def_readonly("proportion", &EcdfCurve::proportion);

    m.def("compute_ecdf",
          [](const std::vector<std::vector<TrialRecord>>& groups,
             const std::vector<TargetSpec>& targets, const std::vector<double>& budgets,
             int samples, Rng& rng) {
              return compute_ecdf(groups, targets, budgets, samples, rng);
          },
          py::arg("trials_by_function"), py::arg("targets"), py::arg("budgets"),
          py::arg("samples_per_pair"), py::arg("rng"));
    m.def("default_budget_grid", &default_budget_grid);

    m.def("read_records_csv", &read_records_csv, py::arg("path"));
    m.def("write_records_csv",
          [](const std::filesystem::path& path, const std::vector<TrialRecord>& records) {
              write_records_csv(path, records);
          },
          py::arg("path"), py::arg("records"));
    m.def("mlog_filename", &mlog_filename, py::arg("solver_label"), py::arg("function_id"),
          py::arg("dim"), py::arg("instance_seed"));
}
