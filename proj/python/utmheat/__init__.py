"""Heat-equation transform solvers and controllability diagnostics."""

from ._core import (
    Profile,
    TimeSignal,
    UtmError,
    attempt_halfline,
    certify,
    cli,
    crank_nicolson_halfline,
    crank_nicolson_interval,
    erfc,
    growth_test,
    solve_halfline,
    solve_interval,
    synthesize,
)

__all__ = [
    "Profile",
    "TimeSignal",
    "UtmError",
    "attempt_halfline",
    "certify",
    "cli",
    "crank_nicolson_halfline",
    "crank_nicolson_interval",
    "erfc",
    "growth_test",
    "solve_halfline",
    "solve_interval",
    "synthesize",
]
