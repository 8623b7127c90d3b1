"""Algorithm portfolios of step-resumable optimizers over a black-box
benchmark suite, with ERT/ECDF reporting. Thin wrapper over the C++ core."""

from ._core import (  # noqa: F401
    BasinHopper,
    BasinHoppingParams,
    BudgetExhausted,
    EcdfCurve,
    ErtResult,
    ExperimentConfig,
    ExperimentSummary,
    FunctionGroup,
    Member,
    Method,
    MLogRow,
    Optimizer,
    OptimizerSpec,
    OptimizerStatus,
    Population,
    ProblemInstance,
    Rng,
    StepOutcome,
    StrategyConfig,
    TargetSpec,
    TrialRecord,
    TrialResult,
    all_groups,
    all_methods,
    bootstrap_runlength,
    cma_default_lambda,
    compute_ecdf,
    compute_ert,
    default_budget_grid,
    fd_gradient,
    function_group,
    function_name,
    group_functions,
    group_label,
    init_optimizer,
    method_name,
    mlog_filename,
    progress_report,
    read_records_csv,
    run_experiment,
    run_portfolio_trial,
    select_epsilon_greedy,
    select_member,
    select_unif,
    standard_ladder,
    stream_seed,
    target_ladder,
    trial_seed,
    write_records_csv,
)

__version__ = "0.1.0"
