from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..hilbert import StateVector


@dataclass
class RunReport:
    """Outcome of one protocol run.

    ``final_state`` is a :class:`StateVector` for pulse-level runs and the
    data-register amplitude array for gate-level runs. ``postselect_probability``
    is the weight of the branch the conditional quantities refer to (no
    photon loss, cavity back in vacuum).
    """

    final_state: StateVector | np.ndarray
    success_probability: float
    fidelity_vs_target: float
    postselect_probability: float
    parameters: dict[str, Any]
    notes: list[str] = field(default_factory=list)
    checkpoints: dict[str, StateVector] = field(default_factory=dict)
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("success_probability", "fidelity_vs_target", "postselect_probability"):
            p = getattr(self, name)
            if not -1e-12 <= p <= 1 + 1e-12:
                raise ValueError(f"{name}={p} outside [0, 1]")
            setattr(self, name, float(min(max(p, 0.0), 1.0)))

    def to_dict(self) -> dict[str, Any]:
        if isinstance(self.final_state, StateVector):
            final = {k: [c.real, c.imag] for k, c in self.final_state.as_dict().items()}
        else:
            final = {
                format(k, "b").zfill(max(1, int(np.log2(len(self.final_state))))): [c.real, c.imag]
                for k, c in enumerate(np.asarray(self.final_state, dtype=complex))
                if abs(c) > 1e-14
            }
        out: dict[str, Any] = {
            "final_amplitudes": final,
            "success_probability": self.success_probability,
            "fidelity_vs_target": self.fidelity_vs_target,
            "postselect_probability": self.postselect_probability,
            "parameters": self.parameters,
            "notes": list(self.notes),
        }
        if self.checkpoints:
            out["checkpoints"] = {
                name: {k: [c.real, c.imag] for k, c in s.as_dict().items()}
                for name, s in self.checkpoints.items()
            }
        out.update(self.extras)
        return out
