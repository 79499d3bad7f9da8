"""
Experiments Module

Declarative experiment configuration, runners for the antenna sweep, the per-UE SE
CDF and Monte Carlo validation, and CSV / gnuplot output.
"""

from .config import (
    PRESETS,
    ExperimentConfig,
    LoggingSettings,
    MonteCarloSettings,
    SystemSettings,
    build_experiment_config,
    deep_merge,
    load_experiment_config,
)
from .output import emit_plot_script, read_csv, write_csv
from .runners import (
    ExperimentResult,
    UeResult,
    drop_cases,
    empirical_cdf,
    evaluate_drop,
    realize_drop,
    run_fig1,
    run_fig2,
    run_validate,
)

__all__ = [
    'ExperimentConfig',
    'SystemSettings',
    'MonteCarloSettings',
    'LoggingSettings',
    'PRESETS',
    'deep_merge',
    'build_experiment_config',
    'load_experiment_config',
    'write_csv',
    'read_csv',
    'emit_plot_script',
    'ExperimentResult',
    'UeResult',
    'realize_drop',
    'drop_cases',
    'evaluate_drop',
    'empirical_cdf',
    'run_fig1',
    'run_fig2',
    'run_validate',
]
