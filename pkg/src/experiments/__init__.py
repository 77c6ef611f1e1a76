"""
Experiment runners, CSV emitters and run summaries used by the CLI.
"""

from .csv_io import read_csv, write_csv
from .tracker import ExperimentTracker
from .runners import (
    ExperimentContext,
    amplitude_bound_scenario,
    export_channels,
    run_convergence,
    run_dof_example,
    run_lemma1,
    run_pattern,
    run_power_dist,
    run_sinr_eval,
    run_snr_sweep,
)

__all__ = [
    'read_csv', 'write_csv', 'ExperimentTracker', 'ExperimentContext',
    'amplitude_bound_scenario', 'export_channels', 'run_convergence',
    'run_dof_example', 'run_lemma1', 'run_pattern', 'run_power_dist',
    'run_sinr_eval', 'run_snr_sweep',
]
