from .config import Grid, SweepConfig, build_config, parse_angle, read_config
from .presets import PRESETS, RUNTIME_BUDGET, PresetReport, run_preset
from .sweeps import gamma_threshold, order_slopes, run_2d_map, run_epsilon_sweep
from .table import Table

__all__ = [
    "Grid", "PRESETS", "PresetReport", "RUNTIME_BUDGET", "SweepConfig", "Table", "build_config",
    "gamma_threshold", "order_slopes", "parse_angle", "read_config", "run_2d_map", "run_epsilon_sweep",
    "run_preset",
]
