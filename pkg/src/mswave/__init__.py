"""Pseudo-spectral solver and wave-breaking diagnostics for a moderate-amplitude
shallow-water equation on the unit period."""

from .diagnostics import BreakingReport, DiagnosticsRecord, breaking_report, record
from .errors import ConfigError, InvalidArgumentError, NumericalOverflowError, OutOfDomainError
from .initial import InitialCondition
from .kernel import KernelNorms, kernel_norms
from .model import Params, State, rhs_direct, rhs_nonlocal
from .spectral import Grid, make_grid
from .timestepper import RunResult, StepControls, Termination, integrate

__version__ = "0.1.0"

__all__ = [
    "BreakingReport", "ConfigError", "DiagnosticsRecord", "Grid", "InitialCondition",
    "InvalidArgumentError", "KernelNorms", "NumericalOverflowError", "OutOfDomainError",
    "Params", "RunResult", "State", "StepControls", "Termination", "breaking_report",
    "integrate", "kernel_norms", "make_grid", "record", "rhs_direct", "rhs_nonlocal",
]
