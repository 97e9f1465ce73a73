"""Decay compensation, transit timing and feasibility calculators."""

from .compensation import (
    CompensationPair,
    column_sign_differences,
    compensation_for_block,
    decayed_block,
    factorize,
    printed_compensation,
    solve_compensation,
)
from .feasibility import (
    FeasibilityInputs,
    GeometryParams,
    cavity_length_check,
    coupling_at,
    feasibility_report,
    lamb_dicke_infidelity,
    offset_for_ratio,
    spread_for_infidelity,
    timescale_check,
)
from .timing import StaggeredTransit, TimingReport, timing_mismatch_experiment, timing_sweep

__all__ = [
    "CompensationPair",
    "FeasibilityInputs",
    "GeometryParams",
    "StaggeredTransit",
    "TimingReport",
    "cavity_length_check",
    "column_sign_differences",
    "compensation_for_block",
    "coupling_at",
    "decayed_block",
    "factorize",
    "feasibility_report",
    "lamb_dicke_infidelity",
    "offset_for_ratio",
    "printed_compensation",
    "solve_compensation",
    "spread_for_infidelity",
    "timescale_check",
    "timing_mismatch_experiment",
    "timing_sweep",
]
