"""Configuration, sweeps, output emission and the command line front end."""
from .config import RunConfig, default_config, load_config, parse_config
from .emit import emit
from .report import solve_critical
from .sweep import SweepRow, run_point, run_sweep

__all__ = ["RunConfig", "default_config", "load_config", "parse_config", "emit",
           "solve_critical", "SweepRow", "run_point", "run_sweep"]
