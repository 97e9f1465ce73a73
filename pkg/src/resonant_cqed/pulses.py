"""Classical-field single-atom operations and pulse schedules.

Every pulse is an instantaneous unitary on one atom's {g, e, i} levels. A
pulse touches one level pair and fixes the third level.

Catalog (columns are images of the pair's first and second level):

=================  ======  ===========================================
preset             pair    action
=================  ======  ===========================================
``hadamard``       (g, e)  g -> (g+e)/√2,  e -> (g-e)/√2
``swap_ge``        (g, e)  g <-> e
``transfer_ei``    (e, i)  e -> i,  completed by i -> e
``transfer_ie``    (e, i)  i -> e,  completed by e -> i
``phase_flip``     any     second level of the pair -> -itself
``rotation_ge``    (g, e)  exp(-i θ/2 (cos φ σx + sin φ σy))
=================  ======  ===========================================

``hadamard_plus`` and ``hadamard_minus`` are both the ``hadamard`` block:
the first fixes the image of |g>, the second the image of |e>, and each is
completed by the other's column. The transfers are completed by the plain
permutation column, so ``transfer_ei`` and ``transfer_ie`` share a matrix
and each is its own inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Protocol, Sequence

import numpy as np

from .dynamics import (
    GATE_TIME,
    CouplingParams,
    DecayParams,
    EvolutionResult,
    build_decay_generator,
    build_hamiltonian,
    evolve_decay,
    evolve_numeric,
    phase_gate,
    phase_gate_decay,
)
from .hilbert import DimensionError, StateVector, embed, level_index

UNITARY_TOL = 1e-12
KINDS = ("rotation_ge", "transfer_ei", "transfer_ie", "swap_ge", "custom_su2")

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_SWAP = np.array([[0, 1], [1, 0]], dtype=complex)


class PulseError(ValueError):
    pass


def rotation_block(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -1j * np.exp(-1j * phi) * s], [-1j * np.exp(1j * phi) * s, c]], dtype=complex
    )


def embed_block(block: np.ndarray, pair: tuple[str, str]) -> np.ndarray:
    """3x3 single-atom operator acting as ``block`` on ``pair``, identity on the third level."""
    p, q = (level_index(x) for x in pair)
    if p == q:
        raise PulseError(f"level pair must be two distinct levels, got {pair}")
    u = np.eye(3, dtype=complex)
    u[np.ix_([p, q], [p, q])] = block
    return u


@dataclass(frozen=True)
class PulseStep:
    """One instantaneous classical-field operation on one atom.

    ``block`` and ``pair`` are only read for ``custom_su2``; ``theta`` and
    ``phi`` only for ``rotation_ge``. ``label`` names catalog presets.
    """

    kind: str
    atom: int
    theta: float = 0.0
    phi: float = 0.0
    block: tuple[tuple[complex, complex], tuple[complex, complex]] | None = None
    pair: tuple[str, str] = ("g", "e")
    label: str = ""

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise PulseError(f"unknown pulse kind {self.kind!r}")
        if self.atom not in (1, 2, 3):
            raise PulseError(f"atom must be 1, 2 or 3, got {self.atom}")
        if self.kind == "custom_su2":
            if self.block is None:
                raise PulseError("custom_su2 needs a 2x2 block")
            b = np.asarray(self.block, dtype=complex)
            if b.shape != (2, 2):
                raise PulseError(f"custom block must be 2x2, got {b.shape}")
            if not np.allclose(b.conj().T @ b, np.eye(2), rtol=0, atol=UNITARY_TOL):
                raise PulseError("custom block is not unitary")
            object.__setattr__(self, "block", tuple(tuple(complex(x) for x in row) for row in b))
            object.__setattr__(self, "pair", tuple(self.pair))
            embed_block(b, self.pair)

    def matrix(self) -> np.ndarray:
        """The 3x3 single-atom unitary."""
        if self.kind == "rotation_ge":
            return embed_block(rotation_block(self.theta, self.phi), ("g", "e"))
        if self.kind == "swap_ge":
            return embed_block(_SWAP, ("g", "e"))
        if self.kind in ("transfer_ei", "transfer_ie"):
            return embed_block(_SWAP, ("e", "i"))
        return embed_block(np.asarray(self.block, dtype=complex), self.pair)

    def inverse(self) -> PulseStep:
        if self.kind in ("swap_ge", "transfer_ei", "transfer_ie"):
            return self
        if self.kind == "rotation_ge":
            return PulseStep("rotation_ge", self.atom, -self.theta, self.phi, label=_inv_label(self.label))
        inv = np.asarray(self.block, dtype=complex).conj().T
        return PulseStep("custom_su2", self.atom, block=inv, pair=self.pair, label=_inv_label(self.label))

    def act(self, s: StateVector) -> tuple[StateVector, float]:
        return apply_pulse(s, self), 1.0

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind, "atom": self.atom}
        if self.label:
            d["label"] = self.label
        if self.kind == "rotation_ge":
            d.update(theta=self.theta, phi=self.phi)
        elif self.kind == "custom_su2":
            d["pair"] = "".join(self.pair)
            d["block"] = [[[z.real, z.imag] for z in row] for row in self.block]
        return d


def _inv_label(label: str) -> str:
    if not label:
        return ""
    return label[:-4] if label.endswith("^dag") else label + "^dag"


# -- presets --------------------------------------------------------------------

def hadamard(atom: int, label: str = "hadamard") -> PulseStep:
    return PulseStep("custom_su2", atom, block=_HADAMARD, pair=("g", "e"), label=label)


def hadamard_plus(atom: int) -> PulseStep:
    """g -> (g+e)/√2; completed by e -> (g-e)/√2."""
    return hadamard(atom, "hadamard_plus")


def hadamard_minus(atom: int) -> PulseStep:
    """e -> (g-e)/√2; completed by g -> (g+e)/√2."""
    return hadamard(atom, "hadamard_minus")


def swap_ge(atom: int) -> PulseStep:
    return PulseStep("swap_ge", atom, label="swap_ge")


def transfer_ei(atom: int) -> PulseStep:
    """e -> i."""
    return PulseStep("transfer_ei", atom, label="transfer_ei")


def transfer_ie(atom: int) -> PulseStep:
    """i -> e."""
    return PulseStep("transfer_ie", atom, label="transfer_ie")


def phase_flip(atom: int, pair: tuple[str, str] = ("g", "e")) -> PulseStep:
    """Sign flip of the pair's second level."""
    return PulseStep(
        "custom_su2", atom, block=np.diag([1.0, -1.0]), pair=pair, label=f"phase_flip_{''.join(pair)}"
    )


def rotation_ge(atom: int, theta: float, phi: float = 0.0) -> PulseStep:
    return PulseStep("rotation_ge", atom, theta=theta, phi=phi, label="rotation_ge")


def custom(atom: int, block: np.ndarray, pair: tuple[str, str] = ("g", "e"), label: str = "custom") -> PulseStep:
    return PulseStep("custom_su2", atom, block=np.asarray(block), pair=pair, label=label)


PRESETS = {
    "hadamard_plus": hadamard_plus,
    "hadamard_minus": hadamard_minus,
    "swap_ge": swap_ge,
    "transfer_ei": transfer_ei,
    "transfer_ie": transfer_ie,
    "phase_flip": phase_flip,
}


def apply_pulse(s: StateVector, p: PulseStep) -> StateVector:
    if p.atom > s.n_atoms:
        raise DimensionError(f"pulse on atom {p.atom} but the state has {s.n_atoms} atoms")
    u = embed({p.atom: p.matrix()}, None, s.n_atoms, s.fock_dim)
    return s.with_amplitudes(u @ s.amplitudes)


# -- schedule entries -----------------------------------------------------------

class Step(Protocol):
    def act(self, s: StateVector) -> tuple[StateVector, float]:
        """Return the image and the norm ratio |out| / |in| contributed by this step."""

    def to_dict(self) -> dict[str, Any]: ...


def _norm_ratio(before: StateVector, after: StateVector) -> float:
    n0 = before.norm()
    return after.norm() / n0 if n0 > 0 else 0.0


@dataclass(frozen=True)
class CavityTransit:
    """Both cavity atoms interact with the vacuum mode for ``duration``."""

    duration: float = GATE_TIME
    couplings: CouplingParams = CouplingParams.reference()
    decay: DecayParams | None = None

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise PulseError(f"transit duration must be non-negative, got {self.duration}")

    def act(self, s: StateVector) -> tuple[StateVector, float]:
        if self.decay is None or self.decay.is_zero:
            h = build_hamiltonian(self.couplings, s.fock_dim, s.n_atoms)
            return evolve_numeric(h, s, self.duration), 1.0
        h = build_decay_generator(self.couplings, self.decay, s.fock_dim, s.n_atoms)
        out = evolve_decay(h, s, self.duration).state
        return out, _norm_ratio(s, out)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "transit": "hamiltonian",
            "duration": self.duration,
            "g1": self.couplings.g1,
            "g2": self.couplings.g2,
        }
        if self.decay is not None:
            d.update(kappa=self.decay.kappa, tau=self.decay.tau)
        return d


@dataclass(frozen=True)
class PhaseGateTransit:
    """The gate-parameter transit; with ``decay`` set it uses the tabulated attenuation."""

    decay: DecayParams | None = None

    def act(self, s: StateVector) -> tuple[StateVector, float]:
        if self.decay is None:
            return phase_gate(s), 1.0
        out = phase_gate_decay(s, self.decay).state
        return out, _norm_ratio(s, out)

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"transit": "phase_gate"}
        if self.decay is not None:
            d.update(kappa=self.decay.kappa, tau=self.decay.tau)
        return d


@dataclass(frozen=True)
class Checkpoint:
    """Records the current state under ``name``; no action."""

    name: str

    def to_dict(self) -> dict[str, Any]:
        return {"checkpoint": self.name}


@dataclass(frozen=True)
class Schedule:
    steps: tuple = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    def __add__(self, other: Schedule | Iterable) -> Schedule:
        more = other.steps if isinstance(other, Schedule) else tuple(other)
        return Schedule(self.steps + more)

    def __len__(self) -> int:
        return len(self.steps)

    def atoms_referenced(self) -> set[int]:
        return {st.atom for st in self.steps if isinstance(st, PulseStep)}

    def to_list(self) -> list[dict[str, Any]]:
        return [st.to_dict() for st in self.steps]


def run_schedule(s: StateVector, sched: Schedule | Sequence) -> EvolutionResult:
    """Left fold of the schedule over ``s``.

    The state is carried unnormalized; ``survival_norm`` is the product of the
    per-step norm ratios (1 for unitary steps).
    """
    steps = sched.steps if isinstance(sched, Schedule) else tuple(sched)
    survival = 1.0
    checkpoints: dict[str, StateVector] = {}
    for st in steps:
        if isinstance(st, Checkpoint):
            checkpoints[st.name] = s
            continue
        s, ratio = st.act(s)
        survival *= ratio
    return EvolutionResult(s, survival, checkpoints)


# -- config round trip ------------------------------------------------------------

def step_from_dict(d: dict[str, Any]) -> PulseStep | CavityTransit | PhaseGateTransit | Checkpoint:
    """Inverse of ``to_dict`` for every schedule entry type."""
    if "checkpoint" in d:
        return Checkpoint(str(d["checkpoint"]))
    if "transit" in d:
        decay = None
        if "kappa" in d or "tau" in d:
            decay = DecayParams(float(d.get("kappa", 0.0)), float(d.get("tau", 0.0)))
        if d["transit"] == "phase_gate":
            return PhaseGateTransit(decay)
        if d["transit"] == "hamiltonian":
            c = CouplingParams(float(d.get("g1", 1.0)), float(d.get("g2", math.sqrt(3))))
            return CavityTransit(float(d.get("duration", GATE_TIME)), c, decay)
        raise PulseError(f"unknown transit type {d['transit']!r}")
    try:
        kind, atom = d["kind"], int(d["atom"])
    except KeyError as exc:
        raise PulseError(f"pulse entry missing {exc.args[0]!r}: {d}") from None
    label = d.get("label", "")
    if kind in PRESETS and kind not in KINDS:
        if kind == "phase_flip":
            return phase_flip(atom, tuple(d.get("pair", "ge")))
        return PRESETS[kind](atom)
    if kind == "rotation_ge":
        return PulseStep(kind, atom, float(d.get("theta", 0.0)), float(d.get("phi", 0.0)), label=label)
    if kind == "custom_su2":
        block = np.array([[complex(*z) if isinstance(z, (list, tuple)) else complex(z) for z in row]
                          for row in d["block"]])
        pair = d.get("pair", "ge")
        return PulseStep(kind, atom, block=block, pair=(pair[0], pair[1]), label=label)
    return PulseStep(kind, atom, label=label)


def schedule_from_list(entries: Iterable[dict[str, Any]]) -> Schedule:
    return Schedule(tuple(step_from_dict(e) for e in entries))
