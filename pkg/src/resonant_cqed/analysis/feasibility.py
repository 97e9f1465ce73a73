"""Closed-form feasibility estimates for the cavity setup.

Units are whatever the caller uses consistently (SI in the defaults).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Any

TIMESCALE_MAX_RATIO = 0.1
CAVITY_MAX_Z_OVER_Z0 = 0.5
CAVITY_ERROR_ESTIMATE = 1e-3
TRAJECTORY_FIDELITY_CLAIM = 0.999


@dataclass(frozen=True)
class GeometryParams:
    Omega: float = 1.0
    waist: float = 6e-3
    wavelength: float = 5.87e-3
    half_length: float = 9e-3

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")

    @property
    def rayleigh_length(self) -> float:
        """z0 = pi waist^2 / wavelength."""
        return math.pi * self.waist**2 / self.wavelength


@dataclass(frozen=True)
class FeasibilityInputs:
    wavefunction_spread: float = 5.87e-5
    interaction_time: float = 2e-4
    radiative_time: float = 3e-2
    deviation_angle: float = 0.1

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")


def coupling_at(gp: GeometryParams, r: float) -> float:
    """Gaussian-mode coupling Omega exp(-r^2 / waist^2)."""
    if r < 0:
        raise ValueError(f"radial offset must be non-negative, got {r}")
    return gp.Omega * math.exp(-(r * r) / gp.waist**2)


def offset_for_ratio(gp: GeometryParams, ratio: float) -> float:
    """Offset r at which coupling_at(gp, r) = Omega / ratio."""
    if not ratio >= 1:
        raise ValueError(f"coupling ratio must be >= 1, got {ratio}")
    return gp.waist * math.sqrt(math.log(ratio))


def lamb_dicke_infidelity(wavelength: float, spread: float) -> float:
    """(k a)^2 pi with k = 2 pi / wavelength."""
    if not wavelength > 0 or spread < 0:
        raise ValueError("wavelength must be positive and spread non-negative")
    k = 2.0 * math.pi / wavelength
    return (k * spread) ** 2 * math.pi


def spread_for_infidelity(wavelength: float, infidelity: float) -> float:
    if infidelity < 0:
        raise ValueError("infidelity must be non-negative")
    return math.sqrt(infidelity / math.pi) * wavelength / (2.0 * math.pi)


def timescale_check(fi: FeasibilityInputs) -> dict[str, Any]:
    if not fi.radiative_time > 0:
        raise ValueError("radiative_time must be positive")
    ratio = fi.interaction_time / fi.radiative_time
    return {"ratio": ratio, "threshold": TIMESCALE_MAX_RATIO, "passed": ratio < TIMESCALE_MAX_RATIO}


def cavity_length_check(gp: GeometryParams) -> dict[str, Any]:
    z0 = gp.rayleigh_length
    ratio = gp.half_length / z0
    return {
        "z0": z0,
        "z_over_z0": ratio,
        "threshold": CAVITY_MAX_Z_OVER_Z0,
        "passed": ratio <= CAVITY_MAX_Z_OVER_Z0,
        "error_estimate": CAVITY_ERROR_ESTIMATE,
    }


def feasibility_report(gp: GeometryParams, fi: FeasibilityInputs) -> dict[str, Any]:
    r = offset_for_ratio(gp, math.sqrt(3.0))
    return {
        "coupling": {
            "offset_for_sqrt3_ratio": r,
            "coupling_ratio_at_offset": gp.Omega / coupling_at(gp, r),
        },
        "lamb_dicke": {
            "infidelity": lamb_dicke_infidelity(gp.wavelength, fi.wavefunction_spread),
            "spread_over_wavelength": fi.wavefunction_spread / gp.wavelength,
            "spread_for_infidelity_0.01": spread_for_infidelity(gp.wavelength, 0.01),
        },
        "timescale": timescale_check(fi),
        "cavity_length": cavity_length_check(gp),
        "trajectory_deviation": {
            "deviation_angle_deg": fi.deviation_angle,
            "claimed_fidelity": TRAJECTORY_FIDELITY_CLAIM,
            "simulated": False,
        },
    }
