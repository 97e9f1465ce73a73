"""Resonant two-atom cavity dynamics.

Time is measured in units of 1/g1 and ``g1 = 1`` unless stated otherwise.
The interaction-picture Hamiltonian couples the g <-> e transition of atoms
1 and 2 to the cavity; level i and the auxiliary atom 3 are dark.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .hilbert import (
    DEFAULT_FOCK_DIM,
    BasisIndex,
    DimensionError,
    HilbertError,
    Operator,
    StateVector,
    annihilation,
    embed,
    ket,
    level_projector,
    sigma_minus,
    sigma_plus,
)

SQRT3 = math.sqrt(3.0)
GATE_TIME = math.pi
REFERENCE_DECAY_RATE = 0.1
# amplitude factor attached to |eg> and -|ei> by a decaying transit at kappa = tau = 0.1 g1
TABULATED_DECAY_FACTOR = 10.0 ** (-math.pi / 20.0)


@dataclass(frozen=True)
class CouplingParams:
    g1: float = 1.0
    g2: float = SQRT3

    def __post_init__(self) -> None:
        if not self.g1 > 0:
            raise ValueError(f"g1 must be positive, got {self.g1}")
        if not self.g2 >= 0:
            raise ValueError(f"g2 must be non-negative, got {self.g2}")

    @property
    def E(self) -> float:
        return math.hypot(self.g1, self.g2)

    @classmethod
    def reference(cls) -> CouplingParams:
        """g2 = sqrt(3) g1, the setting that turns one transit into a phase gate."""
        return cls(1.0, SQRT3)


@dataclass(frozen=True)
class DecayParams:
    kappa: float = 0.0
    tau: float = 0.0

    def __post_init__(self) -> None:
        if self.kappa < 0 or self.tau < 0:
            raise ValueError(f"decay rates must be non-negative, got {self}")

    @property
    def is_zero(self) -> bool:
        return self.kappa == 0 and self.tau == 0

    @classmethod
    def reference(cls) -> DecayParams:
        return cls(REFERENCE_DECAY_RATE, REFERENCE_DECAY_RATE)


@dataclass(frozen=True)
class EvolutionResult:
    """Possibly unnormalized state plus its norm.

    ``checkpoints`` holds named intermediate states recorded by
    :func:`resonant_cqed.pulses.run_schedule`.
    """

    state: StateVector
    survival_norm: float
    checkpoints: dict[str, StateVector] = field(default_factory=dict)

    @property
    def survival_probability(self) -> float:
        return self.survival_norm**2

    def conditional_state(self) -> StateVector:
        return self.state.normalized()


# -- Hamiltonians ---------------------------------------------------------------

def interaction_matrix(g1: float, g2: float, fock_dim: int, n_atoms: int = 2) -> np.ndarray:
    """Raw H = g1 (a+ S1- + a S1+) + g2 (a+ S2- + a S2+) without parameter checks.

    Either coupling may be zero, which describes a single atom in the cavity.
    """
    if fock_dim < 2:
        raise DimensionError(f"fock_dim must be >= 2, got {fock_dim}")
    if n_atoms not in (2, 3):
        raise DimensionError("the cavity model holds two coupled atoms (plus optional atom 3)")
    a = annihilation(fock_dim)
    ad = a.T.copy()
    h = np.zeros((3**n_atoms * fock_dim,) * 2, dtype=complex)
    for atom, g in ((1, g1), (2, g2)):
        if g == 0:
            continue
        term = embed({atom: sigma_minus()}, ad, n_atoms, fock_dim)
        term = term + embed({atom: sigma_plus()}, a, n_atoms, fock_dim)
        h += g * term
    return h


def build_hamiltonian(
    c: CouplingParams, fock_dim: int = DEFAULT_FOCK_DIM, n_atoms: int = 2
) -> Operator:
    return Operator(interaction_matrix(c.g1, c.g2, fock_dim, n_atoms), True, n_atoms, fock_dim)


def build_decay_generator(
    c: CouplingParams, d: DecayParams, fock_dim: int = DEFAULT_FOCK_DIM, n_atoms: int = 2
) -> Operator:
    """Effective non-Hermitian generator H - i kappa/2 a+a - i tau/2 sum_k |e><e|_k.

    Only the two cavity atoms radiate; atom 3 is not in the cavity region.
    """
    h = interaction_matrix(c.g1, c.g2, fock_dim, n_atoms)
    number = embed(cavity_op=np.diag(np.arange(fock_dim)).astype(complex), n_atoms=n_atoms, fock_dim=fock_dim)
    excited = sum(embed({k: level_projector("e")}, None, n_atoms, fock_dim) for k in (1, 2))
    h = h - 0.5j * d.kappa * number - 0.5j * d.tau * excited
    return Operator(h, d.is_zero, n_atoms, fock_dim)


# -- propagators ----------------------------------------------------------------

def propagator(h: Operator, t: float) -> np.ndarray:
    """exp(-i H t).

    Hermitian generators go through ``eigh``; anything else through SciPy's
    scaling-and-squaring Pade ``expm``.
    """
    if t < 0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    if h.hermitian:
        w, v = np.linalg.eigh(h.entries)
        return (v * np.exp(-1j * w * t)) @ v.conj().T
    return scipy.linalg.expm(-1j * t * h.entries)


def _check_dims(h: Operator, s: StateVector) -> None:
    if (h.n_atoms, h.fock_dim) != (s.n_atoms, s.fock_dim):
        raise DimensionError(
            f"generator on (atoms={h.n_atoms}, fock={h.fock_dim}) vs "
            f"state on (atoms={s.n_atoms}, fock={s.fock_dim})"
        )


def evolve_numeric(h: Operator, s: StateVector, t: float) -> StateVector:
    _check_dims(h, s)
    return s.with_amplitudes(propagator(h, t) @ s.amplitudes)


def evolve_decay(h_eff: Operator, s: StateVector, t: float) -> EvolutionResult:
    """Propagate under a (generally non-Hermitian) generator without renormalizing."""
    out = evolve_numeric(h_eff, s, t)
    return EvolutionResult(out, out.norm())


ANALYTIC_INITIALS = ("eg0", "ge0", "ei0", "gg0", "gi0")


def evolve_analytic(c: CouplingParams, t: float, initial: str) -> dict[str, complex]:
    """Closed-form amplitudes for the single-excitation and dark initial kets.

    Keys are basis labels (``"eg,0"``, ``"gg,1"``, ...).
    """
    if t < 0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    g1, g2, E = c.g1, c.g2, c.E
    cos_e, sin_e = math.cos(E * t), math.sin(E * t)
    if initial == "eg0":
        return {
            "eg,0": (g1**2 * cos_e + g2**2) / E**2,
            "ge,0": g1 * g2 * (cos_e - 1.0) / E**2,
            "gg,1": -1j * g1 * sin_e / E,
        }
    if initial == "ge0":
        return {
            "ge,0": (g2**2 * cos_e + g1**2) / E**2,
            "eg,0": g1 * g2 * (cos_e - 1.0) / E**2,
            "gg,1": -1j * g2 * sin_e / E,
        }
    if initial == "ei0":
        return {"ei,0": math.cos(g1 * t), "gi,1": -1j * math.sin(g1 * t)}
    if initial == "gg0":
        return {"gg,0": 1.0 + 0j}
    if initial == "gi0":
        return {"gi,0": 1.0 + 0j}
    raise ValueError(f"unknown initial label {initial!r}; expected one of {ANALYTIC_INITIALS}")


# -- the transit used as a gate -------------------------------------------------

def _require_vacuum(s: StateVector, tol: float = 1e-12) -> None:
    amps = s.amplitudes.reshape(-1, s.fock_dim)
    if np.any(np.abs(amps[:, 1:]) > tol):
        raise HilbertError("phase gate input must have the cavity in the vacuum state")


def phase_gate(s: StateVector) -> StateVector:
    """Cavity transit at t = pi/g1 with g2 = sqrt(3) g1.

    Acts as |eg> -> |eg>, |ei> -> -|ei>, |gg> -> |gg>, |gi> -> |gi>. Other
    two-atom kets follow the same Hamiltonian evolution and are not forced
    onto any truth table (|ie> and |ee>, for instance, leak into the cavity).
    """
    _require_vacuum(s)
    h = build_hamiltonian(CouplingParams.reference(), s.fock_dim, s.n_atoms)
    return evolve_numeric(h, s, GATE_TIME)


def phenomenological_factor(d: DecayParams) -> float:
    """Amplitude factor of the decaying gate; defined only at zero decay and kappa = tau = 0.1 g1."""
    if d.is_zero:
        return 1.0
    if math.isclose(d.kappa, REFERENCE_DECAY_RATE) and math.isclose(d.tau, REFERENCE_DECAY_RATE):
        return TABULATED_DECAY_FACTOR
    raise ValueError(
        "the phenomenological decay factor is only tabulated for kappa = tau = 0.1 g1; "
        "pass factor= explicitly or use evolve_decay for other rates"
    )


def phase_gate_decay(
    s: StateVector, d: DecayParams = DecayParams.reference(), factor: float | None = None
) -> EvolutionResult:
    """Phase gate with the tabulated decay attenuation on |eg> and |ei>.

    The ideal gate is applied first, then every amplitude with atoms 1 and 2 in
    |eg> or |ei> (cavity vacuum) is scaled by ``factor``.
    """
    a = phenomenological_factor(d) if factor is None else float(factor)
    if not 0 < a <= 1:
        raise ValueError(f"decay factor must lie in (0, 1], got {a}")
    out = np.array(phase_gate(s).amplitudes)
    for b_idx in range(out.size):
        b = BasisIndex.from_flat(b_idx, s.n_atoms, s.fock_dim)
        if b.photons == 0 and b.atoms[0] == 1 and b.atoms[1] in (0, 2):
            out[b_idx] *= a
    image = s.with_amplitudes(out)
    return EvolutionResult(image, image.norm())


def first_principles_gate_amplitude(d: DecayParams = DecayParams.reference(), initial: str = "eg,0") -> complex:
    """Amplitude <k|exp(-i H_eff pi)|k> of one decaying gate transit from basis ket k."""
    s = ket(initial)
    h = build_decay_generator(CouplingParams.reference(), d, s.fock_dim)
    return evolve_decay(h, s, GATE_TIME).state.amplitude(initial)
