"""Gate transits in which the two atoms do not enter the cavity together."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from ..dynamics import GATE_TIME, CouplingParams, interaction_matrix, propagator
from ..hilbert import Operator, StateVector, fidelity, ket
from ..pulses import PhaseGateTransit, run_schedule
from ..protocols import physical

STRATEGIES = ("equal_exposure", "truncated")


@dataclass(frozen=True)
class StaggeredTransit:
    """Transit where one atom enters ``delta * duration`` before the other.

    ``equal_exposure``: early atom alone for delta*t, both for (1 - delta)*t,
    late atom alone for delta*t, so each atom spends t in the mode.
    ``truncated``: the late atom leaves together with the early one and is
    exposed for only (1 - delta)*t.
    """

    delta: float
    strategy: str = "equal_exposure"
    early_atom: int = 1
    duration: float = GATE_TIME
    couplings: CouplingParams = CouplingParams.reference()

    def __post_init__(self) -> None:
        if not 0 <= self.delta < 1:
            raise ValueError(f"delta_fraction must lie in [0, 1), got {self.delta}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown transit strategy {self.strategy!r}; expected one of {STRATEGIES}")
        if self.early_atom not in (1, 2):
            raise ValueError("early_atom must be 1 or 2")

    def _segments(self) -> list[tuple[float, float, float]]:
        g1, g2 = self.couplings.g1, self.couplings.g2
        alone_early = (g1, 0.0) if self.early_atom == 1 else (0.0, g2)
        alone_late = (0.0, g2) if self.early_atom == 1 else (g1, 0.0)
        dt = self.delta * self.duration
        segs = [(*alone_early, dt), (g1, g2, self.duration - dt)]
        if self.strategy == "equal_exposure":
            segs.append((*alone_late, dt))
        return segs

    def act(self, s: StateVector) -> tuple[StateVector, float]:
        amps = s.amplitudes
        for c1, c2, t in self._segments():
            if t == 0:
                continue
            h = Operator(interaction_matrix(c1, c2, s.fock_dim, s.n_atoms), True, s.n_atoms, s.fock_dim)
            amps = propagator(h, t) @ amps
        return s.with_amplitudes(amps), 1.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "transit": "staggered",
            "delta": self.delta,
            "strategy": self.strategy,
            "early_atom": self.early_atom,
            "duration": self.duration,
        }


@dataclass(frozen=True)
class TimingReport:
    delta: float
    stage_fidelity: float
    total_fidelity: float
    strategy: str
    early_atom: int

    def as_row(self) -> dict[str, Any]:
        return {
            "delta": self.delta,
            "stage_fidelity": self.stage_fidelity,
            "total_fidelity": self.total_fidelity,
            "strategy": self.strategy,
            "early_atom": self.early_atom,
        }


def _oracle_stage(data: StateVector, target: str, transit) -> StateVector:
    return run_schedule(data, physical.oracle_schedule(target, transit)).checkpoints["oracle"]


def timing_mismatch_experiment(
    delta_fraction: float,
    strategy: str = "equal_exposure",
    early_atom: int = 1,
    target: str = "eg",
) -> TimingReport:
    """Fidelity of the post-oracle state and of the whole search under staggered entry.

    Both transits of the search are staggered the same way. Fidelities are
    taken against the ideal states, cavity vacuum included.
    """
    transit = StaggeredTransit(delta_fraction, strategy, early_atom)
    _, data = physical.prepare_data_register()
    ideal_stage = _oracle_stage(data, target, PhaseGateTransit())
    stage = _oracle_stage(data, target, transit)
    final = run_schedule(data, physical.search_schedule(target, transit)).state
    total = fidelity(final.normalized(), ket(f"{target},0", fock_dim=data.fock_dim))
    return TimingReport(
        delta=float(delta_fraction),
        stage_fidelity=fidelity(stage.normalized(), ideal_stage.normalized()),
        total_fidelity=total,
        strategy=strategy,
        early_atom=early_atom,
    )


def sweep_points(start: float, stop: float, count: int) -> np.ndarray:
    if count < 1:
        raise ValueError("sweep count must be at least 1")
    return np.linspace(start, stop, int(count))


def timing_sweep(
    start: float = 0.0,
    stop: float = 0.05,
    count: int = 11,
    strategy: str = "equal_exposure",
    early_atom: int = 1,
    target: str = "eg",
) -> list[TimingReport]:
    return [
        timing_mismatch_experiment(float(d), strategy, early_atom, target)
        for d in sweep_points(start, stop, count)
    ]
