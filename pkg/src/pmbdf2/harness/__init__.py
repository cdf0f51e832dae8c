"""Experiment configs, sweeps and the command line interface."""

from .config import ExperimentConfig, eval_expr, load_config, parse_config
from .runner import (
    ResultRow,
    csv_to_rows,
    rows_to_csv,
    rows_to_json,
    run_single,
    space_sweep,
    time_sweep,
)
