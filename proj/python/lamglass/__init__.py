"""Layerwise viscoelastic laminated glass beam solver (Python bindings)."""

from ._core import (
    ArgumentError,
    ConfigError,
    DomainError,
    Error,
    LinearSolverError,
    NonconvergenceError,
    Scenario,
    csv_columns,
    csv_schema_version,
    limits,
    load_config,
    parse_config,
    preset,
    preset_names,
    pvb_relaxation_modulus,
    reproduce_table,
    run,
    shift_factor,
)

__all__ = [
    "ArgumentError",
    "ConfigError",
    "DomainError",
    "Error",
    "LinearSolverError",
    "NonconvergenceError",
    "Scenario",
    "csv_columns",
    "csv_schema_version",
    "limits",
    "load_config",
    "parse_config",
    "preset",
    "preset_names",
    "pvb_relaxation_modulus",
    "read_csv",
    "reproduce_table",
    "run",
    "shift_factor",
]


def read_csv(path):
    """Reads a results CSV into a dict of numpy arrays keyed by column name."""
    import numpy as np

    with open(path) as f:
        lines = [ln for ln in f if not ln.startswith("#")]
    names = lines[0].strip().split(",")
    data = np.loadtxt(lines[1:], delimiter=",", ndmin=2)
    return {name: data[:, i].copy() for i, name in enumerate(names)}
