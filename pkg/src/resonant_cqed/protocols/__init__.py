"""Pulse-level protocols and their gate-level reference circuits."""

from .gate_reference import (
    ORACLE_CASES,
    OracleCase,
    dj_gate_reference,
    grover_gate_reference,
    grover_success_formula,
    repetition_bound,
    repetition_count,
)
from .physical import (
    TARGET_INDEX,
    TARGETS,
    dj_physical,
    grover_cross_check,
    grover_physical,
    grover_physical_decay,
)
from .report import RunReport

__all__ = [
    "ORACLE_CASES",
    "OracleCase",
    "RunReport",
    "TARGETS",
    "TARGET_INDEX",
    "dj_gate_reference",
    "dj_physical",
    "grover_cross_check",
    "grover_gate_reference",
    "grover_physical",
    "grover_physical_decay",
    "grover_success_formula",
    "repetition_bound",
    "repetition_count",
]
