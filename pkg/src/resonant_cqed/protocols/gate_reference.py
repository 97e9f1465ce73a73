"""Qubit-level reference circuits used as oracles for the pulse-level protocols.

Qubits are ordered big-endian: qubit 0 is the most significant bit of the
data-register index, and the auxiliary qubit is last.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .report import RunReport

MAX_QUBITS = 12
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True)
class OracleCase:
    f0: int
    f1: int

    def __post_init__(self) -> None:
        if self.f0 not in (0, 1) or self.f1 not in (0, 1):
            raise ValueError(f"oracle bits must be 0 or 1, got ({self.f0}, {self.f1})")

    @property
    def is_constant(self) -> bool:
        return self.f0 == self.f1

    @property
    def expected(self) -> str:
        return "constant" if self.is_constant else "balanced"

    @property
    def name(self) -> str:
        return {(0, 0): "U_f1", (1, 1): "U_f2", (0, 1): "U_f3", (1, 0): "U_f4"}[(self.f0, self.f1)]

    def f(self, x: int) -> int:
        return (self.f0, self.f1)[x]


ORACLE_CASES = tuple(OracleCase(a, b) for a, b in ((0, 0), (1, 1), (0, 1), (1, 0)))


def repetition_count(N: int) -> int:
    """Grover iteration count, rounded half-up to the closest integer."""
    if N < 2:
        raise ValueError(f"search space must hold at least 2 items, got {N}")
    ratio = math.acos(math.sqrt(1.0 / N)) / (2.0 * math.acos(math.sqrt((N - 1) / N)))
    return int(math.floor(ratio + 0.5))


def repetition_bound(N: int) -> float:
    """Upper bound pi sqrt(N) / 4 on the iteration count."""
    return math.pi * math.sqrt(N) / 4.0


def grover_success_formula(n: int, iterations: int) -> float:
    theta = math.asin(1.0 / math.sqrt(2**n))
    return math.sin((2 * iterations + 1) * theta) ** 2


def _apply_1q(psi: np.ndarray, gate: np.ndarray, axis: int) -> np.ndarray:
    psi = np.tensordot(gate, psi, axes=([1], [axis]))
    return np.moveaxis(psi, 0, axis)


def _hadamard_all(psi: np.ndarray, axes: range) -> np.ndarray:
    for k in axes:
        psi = _apply_1q(psi, _H, k)
    return psi


def grover_gate_reference(n: int, target: int, iterations: int | None = None) -> RunReport:
    """Simulate the n-data-qubit search circuit with a |1> auxiliary qubit.

    The oracle flips the auxiliary qubit on the marked item; after the
    Hadamards the auxiliary sits in |->, turning that flip into a phase.
    """
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"n must lie in [1, {MAX_QUBITS}], got {n}")
    N = 2**n
    if not 0 <= target < N:
        raise ValueError(f"target {target} outside [0, {N})")
    if n == 1 and iterations is None:
        raise ValueError("the closest-integer iteration count is undefined for n = 1; pass iterations")
    R = repetition_count(N) if iterations is None else int(iterations)
    if R < 0:
        raise ValueError("iterations must be non-negative")

    psi = np.zeros((2,) * (n + 1), dtype=complex)
    psi[(0,) * n + (1,)] = 1.0
    psi = _hadamard_all(psi, range(n + 1))
    bits = tuple(int(b) for b in format(target, f"0{n}b"))
    zero = (0,) * n
    for _ in range(R):
        psi[bits] = psi[bits][::-1].copy()
        psi = _hadamard_all(psi, range(n))
        psi = -psi
        psi[zero] = -psi[zero]
        psi = _hadamard_all(psi, range(n))

    flat = psi.reshape(N, 2)
    aux_minus = np.array([1, -1]) / math.sqrt(2)
    data = flat @ aux_minus.conj()
    leftover = flat - np.outer(data, aux_minus)
    if np.linalg.norm(leftover) > 1e-10:
        raise RuntimeError("auxiliary qubit left |->; circuit is inconsistent")
    success = float(abs(data[target]) ** 2)
    return RunReport(
        final_state=data,
        success_probability=success,
        fidelity_vs_target=success,
        postselect_probability=1.0,
        parameters={"n": n, "target": target, "iterations": R},
        extras={"formula_success_probability": grover_success_formula(n, R),
                "repetition_bound": repetition_bound(N)},
    )


def dj_gate_state(case: OracleCase) -> np.ndarray:
    """Two-qubit (query, auxiliary) state after H, U_f, and H on the query."""
    psi = np.zeros((2, 2), dtype=complex)
    psi[0, 1] = 1.0
    psi = _hadamard_all(psi, range(2))
    psi = np.array([[psi[x, y ^ case.f(x)] for y in (0, 1)] for x in (0, 1)])
    return _apply_1q(psi, _H, 0)


def dj_query_probabilities(case: OracleCase) -> tuple[float, float]:
    psi = dj_gate_state(case)
    p = np.sum(np.abs(psi) ** 2, axis=1)
    return float(p[0]), float(p[1])


def dj_gate_reference(case: OracleCase) -> str:
    p0, p1 = dj_query_probabilities(case)
    return "constant" if p0 > p1 else "balanced"
