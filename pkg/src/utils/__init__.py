from .cache import setup_output_dir, save_json
from .output import METRICS_COLUMNS, write_metrics_row, read_metrics, truncate_metrics, save_noise_sweep, print_suite_table
from .errors import (
    DetrameError,
    ShapeError,
    NonFiniteError,
    ConvergenceError,
    ConstraintError,
    StepsizeError,
    ConfigError,
    DataFormatError,
    CheckpointError,
    TrainingError,
)

__all__ = [
    'setup_output_dir',
    'save_json',
    'METRICS_COLUMNS',
    'write_metrics_row',
    'read_metrics',
    'truncate_metrics',
    'save_noise_sweep',
    'print_suite_table',
    'DetrameError',
    'ShapeError',
    'NonFiniteError',
    'ConvergenceError',
    'ConstraintError',
    'StepsizeError',
    'ConfigError',
    'DataFormatError',
    'CheckpointError',
    'TrainingError',
]
