"""Composite Hilbert space of three-level atoms and one truncated cavity mode.

Basis ordering is atom1 ⊗ atom2 [⊗ atom3] ⊗ cavity, with atomic levels
indexed g=0, e=1, i=2 and photon number ascending. For two atoms::

    flat_index = ((atom1 * 3) + atom2) * fock_dim + photons

The optional third atom is the auxiliary working atom used only during
state preparation; it never couples to the cavity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

LEVELS = ("g", "e", "i")
LEVEL_INDEX = {name: k for k, name in enumerate(LEVELS)}
NORM_TOL = 1e-12
DEFAULT_FOCK_DIM = 2


class HilbertError(ValueError):
    """Base class for malformed states and operators."""


class TruncationError(HilbertError):
    """A photon number does not fit in the truncated Fock space."""


class DimensionError(HilbertError):
    """Operands act on different spaces."""


class NormalizationError(HilbertError):
    """An operation that requires a normalized state received one that is not."""


def level_index(label: str | int) -> int:
    if isinstance(label, str):
        try:
            return LEVEL_INDEX[label]
        except KeyError:
            raise HilbertError(f"unknown atomic level {label!r}") from None
    if label not in (0, 1, 2):
        raise HilbertError(f"atomic level index must be 0, 1 or 2, got {label!r}")
    return int(label)


@dataclass(frozen=True)
class BasisIndex:
    atoms: tuple[int, ...]
    photons: int
    fock_dim: int = DEFAULT_FOCK_DIM

    def __post_init__(self) -> None:
        if any(a not in (0, 1, 2) for a in self.atoms):
            raise HilbertError(f"atomic levels out of range: {self.atoms}")
        if not 0 <= self.photons < self.fock_dim:
            raise TruncationError(
                f"photon number {self.photons} outside fock_dim {self.fock_dim}"
            )

    @property
    def flat_index(self) -> int:
        k = 0
        for a in self.atoms:
            k = k * 3 + a
        return k * self.fock_dim + self.photons

    @property
    def label(self) -> str:
        return "".join(LEVELS[a] for a in self.atoms) + f",{self.photons}"

    @classmethod
    def from_flat(cls, index: int, n_atoms: int = 2, fock_dim: int = DEFAULT_FOCK_DIM) -> BasisIndex:
        dim = space_dim(n_atoms, fock_dim)
        if not 0 <= index < dim:
            raise HilbertError(f"flat index {index} outside [0, {dim})")
        k, photons = divmod(index, fock_dim)
        atoms = []
        for _ in range(n_atoms):
            k, a = divmod(k, 3)
            atoms.append(a)
        return cls(tuple(reversed(atoms)), photons, fock_dim)

    @classmethod
    def parse(cls, label: str, fock_dim: int = DEFAULT_FOCK_DIM) -> BasisIndex:
        """Parse labels such as ``"eg,0"`` or ``"gge,1"``; photon count defaults to 0."""
        atoms, _, photons = label.partition(",")
        return cls(
            tuple(level_index(c) for c in atoms),
            int(photons) if photons else 0,
            fock_dim,
        )


def space_dim(n_atoms: int, fock_dim: int) -> int:
    return 3**n_atoms * fock_dim


def basis(n_atoms: int = 2, fock_dim: int = DEFAULT_FOCK_DIM) -> list[BasisIndex]:
    """All basis labels in flat-index order."""
    return [
        BasisIndex(atoms, n, fock_dim)
        for atoms in itertools.product(range(3), repeat=n_atoms)
        for n in range(fock_dim)
    ]


def _infer_layout(dim: int, n_atoms: int | None, fock_dim: int | None) -> tuple[int, int]:
    if n_atoms is None:
        n_atoms = 2
    if fock_dim is None:
        fock_dim, rem = divmod(dim, 3**n_atoms)
        if rem:
            raise DimensionError(f"length {dim} is not 3^{n_atoms} x fock_dim")
    if fock_dim < 2:
        raise DimensionError(f"fock_dim must be >= 2, got {fock_dim}")
    if dim != space_dim(n_atoms, fock_dim):
        raise DimensionError(
            f"length {dim} does not match n_atoms={n_atoms}, fock_dim={fock_dim}"
        )
    return n_atoms, fock_dim


@dataclass(frozen=True, eq=False)
class StateVector:
    """Immutable complex amplitude vector over the composite basis."""

    amplitudes: np.ndarray
    n_atoms: int = 2
    fock_dim: int = DEFAULT_FOCK_DIM

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        _infer_layout(amps.size, self.n_atoms, self.fock_dim)
        if not np.all(np.isfinite(amps)):
            raise HilbertError("state amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(float(np.vdot(self.amplitudes, self.amplitudes).real) - 1.0) <= tol

    def normalized(self) -> StateVector:
        n = self.norm()
        if n == 0.0:
            raise NormalizationError("cannot normalize the zero vector")
        return self.with_amplitudes(self.amplitudes / n)

    def with_amplitudes(self, amplitudes: np.ndarray) -> StateVector:
        return StateVector(amplitudes, self.n_atoms, self.fock_dim)

    def amplitude(self, label: str | BasisIndex) -> complex:
        if isinstance(label, str):
            label = BasisIndex.parse(label, self.fock_dim)
        if len(label.atoms) != self.n_atoms:
            raise DimensionError(f"label {label.label} does not match {self.n_atoms} atoms")
        return complex(self.amplitudes[label.flat_index])

    def as_dict(self, cutoff: float = 1e-14) -> dict[str, complex]:
        """Nonzero amplitudes keyed by basis label, in basis order."""
        return {
            b.label: complex(c)
            for b, c in zip(basis(self.n_atoms, self.fock_dim), self.amplitudes)
            if abs(c) > cutoff
        }

    def __add__(self, other: StateVector) -> StateVector:
        _check_same_space(self, other)
        return self.with_amplitudes(self.amplitudes + other.amplitudes)

    def __mul__(self, scalar: complex) -> StateVector:
        return self.with_amplitudes(self.amplitudes * scalar)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        terms = " + ".join(f"({c:.4g})|{k}>" for k, c in self.as_dict(1e-12).items())
        return f"StateVector({terms or '0'})"


def _check_same_space(a: StateVector, b: StateVector) -> None:
    if (a.n_atoms, a.fock_dim) != (b.n_atoms, b.fock_dim):
        raise DimensionError(
            f"states live in different spaces: (atoms={a.n_atoms}, fock={a.fock_dim}) "
            f"vs (atoms={b.n_atoms}, fock={b.fock_dim})"
        )


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense square matrix on the composite space."""

    entries: np.ndarray
    hermitian: bool = False
    n_atoms: int = 2
    fock_dim: int = DEFAULT_FOCK_DIM

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got shape {m.shape}")
        _infer_layout(m.shape[0], self.n_atoms, self.fock_dim)
        if self.hermitian and not np.allclose(m, m.conj().T, rtol=0.0, atol=NORM_TOL):
            raise HilbertError("operator flagged hermitian is not")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def element(self, bra: str, ket: str) -> complex:
        i = BasisIndex.parse(bra, self.fock_dim).flat_index
        j = BasisIndex.parse(ket, self.fock_dim).flat_index
        return complex(self.entries[i, j])


# -- constructors -------------------------------------------------------------

Factor = str | int | Sequence[complex] | Mapping[str, complex]


def _factor_vector(spec: Factor, size: int, *, cavity: bool) -> np.ndarray:
    v = np.zeros(size, dtype=complex)
    if isinstance(spec, Mapping):
        for key, c in spec.items():
            v[_factor_slot(key, size, cavity)] += c
    elif isinstance(spec, (str, int, np.integer)):
        v[_factor_slot(spec, size, cavity)] = 1.0
    else:
        arr = np.asarray(spec, dtype=complex).reshape(-1)
        if arr.size > size:
            if cavity and np.any(arr[size:] != 0):
                raise TruncationError("cavity factor populates photons beyond fock_dim")
            if not cavity:
                raise HilbertError(f"atomic factor has {arr.size} > 3 components")
            arr = arr[:size]
        v[: arr.size] = arr
    return v


def _factor_slot(key: str | int, size: int, cavity: bool) -> int:
    if cavity:
        n = int(key)
        if not 0 <= n < size:
            raise TruncationError(f"photon label {n} outside fock_dim {size}")
        return n
    return level_index(key)


def tensor_state(*factors: Factor, fock_dim: int = DEFAULT_FOCK_DIM) -> StateVector:
    """Product state of atomic factors followed by a cavity factor.

    Each factor is a level label (``"g"``, ``"e"``, ``"i"``; photon count for
    the cavity), a mapping from labels to amplitudes, or an amplitude
    sequence. The last factor is the cavity.

    >>> tensor_state("g", "g", 0).amplitude("gg,0")
    (1+0j)
    """
    if len(factors) not in (3, 4):
        raise HilbertError("expected two or three atomic factors plus one cavity factor")
    *atoms, cavity = factors
    vecs = [_factor_vector(f, 3, cavity=False) for f in atoms]
    vecs.append(_factor_vector(cavity, fock_dim, cavity=True))
    for v in vecs:
        if abs(np.vdot(v, v).real - 1.0) > NORM_TOL:
            raise NormalizationError("tensor_state factors must be normalized")
    out = vecs[0]
    for v in vecs[1:]:
        out = np.kron(out, v)
    return StateVector(out, len(atoms), fock_dim)


def ket(label: str, n_atoms: int | None = None, fock_dim: int = DEFAULT_FOCK_DIM) -> StateVector:
    """Basis ket from a label such as ``"eg,0"``."""
    b = BasisIndex.parse(label, fock_dim)
    if n_atoms is not None and len(b.atoms) != n_atoms:
        raise DimensionError(f"label {label!r} does not have {n_atoms} atoms")
    amps = np.zeros(space_dim(len(b.atoms), fock_dim), dtype=complex)
    amps[b.flat_index] = 1.0
    return StateVector(amps, len(b.atoms), fock_dim)


def superposition(terms: Mapping[str, complex], fock_dim: int = DEFAULT_FOCK_DIM) -> StateVector:
    """Linear combination of labelled kets; no normalization is applied."""
    if not terms:
        raise HilbertError("empty superposition")
    parsed = {BasisIndex.parse(k, fock_dim): c for k, c in terms.items()}
    n_atoms = {len(b.atoms) for b in parsed}
    if len(n_atoms) != 1:
        raise DimensionError("labels mix different atom counts")
    (n,) = n_atoms
    amps = np.zeros(space_dim(n, fock_dim), dtype=complex)
    for b, c in parsed.items():
        amps[b.flat_index] += c
    return StateVector(amps, n, fock_dim)


# -- elementary operators -------------------------------------------------------

def level_projector(level: str | int) -> np.ndarray:
    k = level_index(level)
    p = np.zeros((3, 3), dtype=complex)
    p[k, k] = 1.0
    return p


def sigma_minus() -> np.ndarray:
    """|g><e| on one atom; |i> is untouched."""
    s = np.zeros((3, 3), dtype=complex)
    s[0, 1] = 1.0
    return s


def sigma_plus() -> np.ndarray:
    return sigma_minus().T.copy()


def annihilation(fock_dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, fock_dim)), 1).astype(complex)


def embed(
    atom_ops: Mapping[int, np.ndarray] | None = None,
    cavity_op: np.ndarray | None = None,
    n_atoms: int = 2,
    fock_dim: int = DEFAULT_FOCK_DIM,
) -> np.ndarray:
    """Kronecker product placing 3x3 atom operators (keyed 1-based) and a cavity operator."""
    atom_ops = dict(atom_ops or {})
    for k in atom_ops:
        if not 1 <= k <= n_atoms:
            raise DimensionError(f"atom {k} does not exist in a {n_atoms}-atom space")
    mats = [np.asarray(atom_ops.get(k, np.eye(3)), dtype=complex) for k in range(1, n_atoms + 1)]
    mats.append(np.eye(fock_dim) if cavity_op is None else np.asarray(cavity_op, dtype=complex))
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def creation_operator(n_atoms: int = 2, fock_dim: int = DEFAULT_FOCK_DIM) -> Operator:
    return Operator(embed(cavity_op=annihilation(fock_dim).T, n_atoms=n_atoms, fock_dim=fock_dim),
                    False, n_atoms, fock_dim)


def identity(n_atoms: int = 2, fock_dim: int = DEFAULT_FOCK_DIM) -> Operator:
    return Operator(np.eye(space_dim(n_atoms, fock_dim)), True, n_atoms, fock_dim)


# -- algebra --------------------------------------------------------------------

def apply_operator(op: Operator, s: StateVector) -> StateVector:
    """Plain matrix-vector action; the result is not renormalized."""
    if (op.n_atoms, op.fock_dim) != (s.n_atoms, s.fock_dim):
        raise DimensionError(
            f"operator on (atoms={op.n_atoms}, fock={op.fock_dim}) applied to "
            f"state on (atoms={s.n_atoms}, fock={s.fock_dim})"
        )
    return s.with_amplitudes(op.entries @ s.amplitudes)


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugating the first argument."""
    _check_same_space(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Pure-state overlap |<a|b>|^2 of two normalized states."""
    for s in (a, b):
        if not s.is_normalized():
            raise NormalizationError(f"fidelity needs normalized states (norm={s.norm():.15g})")
    return min(1.0, abs(inner(a, b)) ** 2)


def postselect(
    s: StateVector, predicate: Callable[[BasisIndex], bool]
) -> tuple[StateVector | None, float]:
    """Project onto the basis states accepted by ``predicate``.

    Returns the renormalized conditional state and the branch probability.
    An empty branch yields ``(None, 0.0)``.
    """
    if not s.is_normalized():
        raise NormalizationError("postselect needs a normalized state")
    mask = np.array([predicate(b) for b in basis(s.n_atoms, s.fock_dim)], dtype=bool)
    kept = np.where(mask, s.amplitudes, 0.0)
    prob = float(np.vdot(kept, kept).real)
    if prob == 0.0:
        return None, 0.0
    return s.with_amplitudes(kept / np.sqrt(prob)), prob


def drop_auxiliary(s: StateVector, tol: float = 1e-10) -> tuple[StateVector, np.ndarray]:
    """Factor atom 3 out of a three-atom product state.

    Returns the two-atom-plus-cavity state and the three-component state of
    atom 3. Raises if atom 3 is entangled with the rest.
    """
    if s.n_atoms != 3:
        raise DimensionError("drop_auxiliary expects a three-atom state")
    m = s.amplitudes.reshape(9, 3, s.fock_dim).transpose(0, 2, 1).reshape(9 * s.fock_dim, 3)
    u, sv, vh = np.linalg.svd(m)
    if sv.size > 1 and sv[1] > tol * max(sv[0], 1.0):
        raise HilbertError("atom 3 is entangled with the remaining system")
    rest = u[:, 0] * sv[0]
    aux = vh[0]
    # fix the arbitrary SVD phase: first nonzero auxiliary amplitude real positive
    k = int(np.argmax(np.abs(aux) > 1e-12))
    phase = aux[k] / abs(aux[k])
    return StateVector(rest * phase, 2, s.fock_dim), aux / phase


def two_atom_block(s: StateVector, second_level: str = "e", photons: int = 0) -> np.ndarray:
    """Amplitudes on the logical 2x2 block {g, e}_1 x {g, second_level}_2.

    Rows index atom 1 (g, e), columns index atom 2 (g, second_level).
    """
    if s.n_atoms != 2:
        raise DimensionError("two_atom_block expects a two-atom state")
    lv = [0, level_index(second_level)]
    out = np.empty((2, 2), dtype=complex)
    for r, a1 in enumerate((0, 1)):
        for c, a2 in enumerate(lv):
            out[r, c] = s.amplitudes[BasisIndex((a1, a2), photons, s.fock_dim).flat_index]
    return out


def logical_vector(s: StateVector, second_level: str = "e") -> np.ndarray:
    """Flattened :func:`two_atom_block` in big-endian order (|00>, |01>, |10>, |11>)."""
    return two_atom_block(s, second_level).reshape(4)


def partition_probabilities(s: StateVector, key: Callable[[BasisIndex], object]) -> dict:
    out: dict = {}
    for b, c in zip(basis(s.n_atoms, s.fock_dim), s.amplitudes):
        k = key(b)
        out[k] = out.get(k, 0.0) + abs(c) ** 2
    return out


def atom_level_probabilities(s: StateVector, atom: int) -> dict[str, float]:
    """Marginal readout probabilities of one atom in the {g, e, i} basis."""
    if not 1 <= atom <= s.n_atoms:
        raise DimensionError(f"atom {atom} does not exist")
    probs = partition_probabilities(s, lambda b: LEVELS[b.atoms[atom - 1]])
    return {lv: float(probs.get(lv, 0.0)) for lv in LEVELS}


def random_state(rng: np.random.Generator, n_atoms: int = 2, fock_dim: int = DEFAULT_FOCK_DIM) -> StateVector:
    v = rng.normal(size=space_dim(n_atoms, fock_dim)) + 1j * rng.normal(size=space_dim(n_atoms, fock_dim))
    return StateVector(v / np.linalg.norm(v), n_atoms, fock_dim)


__all__ = [
    "LEVELS",
    "BasisIndex",
    "StateVector",
    "Operator",
    "HilbertError",
    "TruncationError",
    "DimensionError",
    "NormalizationError",
    "tensor_state",
    "ket",
    "superposition",
    "apply_operator",
    "inner",
    "fidelity",
    "postselect",
    "drop_auxiliary",
    "two_atom_block",
    "logical_vector",
    "atom_level_probabilities",
    "basis",
    "embed",
]
