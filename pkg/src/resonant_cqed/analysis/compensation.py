"""Local rotations that undo the decay imprint on a two-atom product state.

After two attenuated gate transits the pre-readout state of atoms 1 and 2
is the product (|g> + a|e>)_1 (|g> - a|e>)_2 up to normalization. Each factor
is rotated onto the required readout level by the unique SU(2) matrix that
maps it there exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class CompensationPair:
    """2x2 blocks on {g, e}; column k is the image of level k (g=0, e=1)."""

    rotation1: np.ndarray
    rotation2: np.ndarray

    def __post_init__(self) -> None:
        for name in ("rotation1", "rotation2"):
            m = np.array(getattr(self, name), dtype=complex)
            if m.shape != (2, 2) or not np.allclose(m.conj().T @ m, np.eye(2), rtol=0, atol=UNITARY_TOL):
                raise ValueError(f"{name} is not a 2x2 unitary")
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    def apply(self, block: np.ndarray) -> np.ndarray:
        """Act on a 2x2 amplitude block (rows atom 1, columns atom 2)."""
        return self.rotation1 @ np.asarray(block) @ self.rotation2.T


def decayed_block(a: float) -> np.ndarray:
    """Normalized pre-compensation amplitudes; rows atom 1 (g, e), columns atom 2 (g, e)."""
    return np.array([[1.0, -a], [a, -a * a]], dtype=complex) / (1.0 + a * a)


def factorize(block: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray, complex]:
    """Split a rank-one 2x2 block into ``scale * outer(u1, u2)`` with unit u1, u2.

    Each factor is phased so its first non-negligible component is real and
    positive. Raises ``ValueError`` for entangled input.
    """
    block = np.asarray(block, dtype=complex)
    u, s, vh = np.linalg.svd(block)
    if s[0] == 0:
        raise ValueError("cannot factorize the zero block")
    if s[1] > tol * s[0]:
        raise ValueError(f"block is entangled (singular values {s[0]:.3g}, {s[1]:.3g})")
    u1, u2 = u[:, 0], vh[0]
    p1, p2 = _phase_of_lead(u1), _phase_of_lead(u2)
    u1, u2 = u1 / p1, u2 / p2
    return u1, u2, complex(s[0] * p1 * p2)


def _phase_of_lead(v: np.ndarray) -> complex:
    k = int(np.argmax(np.abs(v) > 1e-12))
    return v[k] / abs(v[k])


def su2_to_level(v: np.ndarray, level: int) -> np.ndarray:
    """The SU(2) matrix R with R v = |level> for unit v; unique for each level."""
    x, y = np.asarray(v, dtype=complex)
    if level == 0:
        return np.array([[np.conj(x), np.conj(y)], [-y, x]], dtype=complex)
    if level == 1:
        return np.array([[y, -x], [np.conj(x), np.conj(y)]], dtype=complex)
    raise ValueError(f"level must be 0 (g) or 1 (e), got {level}")


def compensation_for_block(block: np.ndarray, target: tuple[int, int]) -> CompensationPair:
    """Local rotations sending the product state ``block`` to |target> exactly."""
    u1, u2, _ = factorize(block)
    return CompensationPair(su2_to_level(u1, target[0]), su2_to_level(u2, target[1]))


def solve_compensation(a: float) -> CompensationPair:
    """Rotations taking (1, -a, a, -a^2)/(1+a^2) on (gg, ge, eg, ee) to |eg>."""
    if not a > 0:
        raise ValueError(f"decay factor must be positive, got {a}")
    return compensation_for_block(decayed_block(a), (1, 0))


def printed_compensation(a: float) -> CompensationPair:
    """The rotations as they appear in print, columns being images of g and e."""
    n = math.sqrt(1.0 + a * a)
    r1 = np.array([[a, 1.0], [1.0, -a]]) / n
    r2 = np.array([[1.0, a], [a, -1.0]]) / n
    return CompensationPair(r1, r2)


def column_sign_differences(
    solved: CompensationPair, printed: CompensationPair, tol: float = 1e-12
) -> dict[str, list[int | None]]:
    """Per-column relation ``solved[:, k] = s * printed[:, k]``.

    ``s`` is +1 or -1, or ``None`` when the columns are not equal up to sign.
    """
    out: dict[str, list[int | None]] = {}
    for name in ("rotation1", "rotation2"):
        a, b = getattr(solved, name), getattr(printed, name)
        signs: list[int | None] = []
        for k in range(2):
            if np.allclose(a[:, k], b[:, k], atol=tol, rtol=0):
                signs.append(1)
            elif np.allclose(a[:, k], -b[:, k], atol=tol, rtol=0):
                signs.append(-1)
            else:
                signs.append(None)
        out[name] = signs
    return out
