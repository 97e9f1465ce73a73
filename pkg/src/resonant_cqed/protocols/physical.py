"""Pulse-level search and Deutsch-Jozsa protocols on two cavity atoms.

Logical encoding: atom 1 stores a qubit on {g, e}. Atom 2 stores its qubit
on {g, i} whenever the atoms cross the cavity (level i is dark, so the
transit acts as a controlled phase on |e i>), and on {g, e} whenever it is
rotated by a classical field. The transfers e <-> i switch between the two.

Search targets are named by the readout kets gg, gi, eg, ei, which carry
logical indices 0, 1, 2, 3.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from ..analysis import compensation as comp
from ..dynamics import (
    GATE_TIME,
    CouplingParams,
    DecayParams,
    first_principles_gate_amplitude,
    phenomenological_factor,
)
from ..hilbert import (
    StateVector,
    atom_level_probabilities,
    drop_auxiliary,
    fidelity,
    ket,
    logical_vector,
    partition_probabilities,
    tensor_state,
    two_atom_block,
)
from ..pulses import (
    CavityTransit,
    Checkpoint,
    PhaseGateTransit,
    Schedule,
    custom,
    hadamard,
    hadamard_minus,
    hadamard_plus,
    phase_flip,
    run_schedule,
    swap_ge,
    transfer_ei,
    transfer_ie,
)
from .gate_reference import OracleCase, dj_gate_reference, grover_gate_reference
from .report import RunReport

TARGETS = {"gg": (0, 0), "gi": (0, 1), "eg": (1, 0), "ei": (1, 1)}
TARGET_INDEX = {name: 2 * b1 + b2 for name, (b1, b2) in TARGETS.items()}

# encoding of atom 2 after each checkpoint of the search schedule
STAGE_ENCODING = {
    "preparation": "gi",
    "oracle": "ge",
    "pre_diffusion": "gi",
    "post_diffusion": "ge",
    "pre_compensation": "ge",
    "final": "gi",
}


def _check_target(target: str) -> tuple[int, int]:
    try:
        return TARGETS[target]
    except KeyError:
        raise ValueError(f"invalid search target {target!r}; expected one of {sorted(TARGETS)}") from None


# -- schedules ----------------------------------------------------------------------

def preparation_schedule() -> Schedule:
    """|gge,0> -> (g+e)_1 (g+i)_2 (g-e)_3 / 2√2 ⊗ |0>."""
    return Schedule([
        hadamard_plus(1),
        hadamard_minus(3),
        hadamard_plus(2),
        transfer_ei(2),
        Checkpoint("preparation"),
    ])


def oracle_schedule(target: str, transit=None) -> Schedule:
    """Phase-mark ``target``.

    The transit flips |ei>. Swapping the logical bits that are 0 afterwards
    moves the mark to the target; the matching swaps before the transit act
    trivially on the uniform superposition and are omitted.
    """
    b1, b2 = _check_target(target)
    steps = [transit or PhaseGateTransit(), transfer_ie(2)]
    if b1 == 0:
        steps.append(swap_ge(1))
    if b2 == 0:
        steps.append(swap_ge(2))
    steps.append(Checkpoint("oracle"))
    return Schedule(steps)


def diffusion_schedule(transit=None) -> Schedule:
    """Hadamards and 2|00><00| - I, ending with atom 2 back on {g, e}.

    The reflection is Z_1 Z_2 followed by the |ei> phase flip of a transit,
    which is diag(1, -1, -1, -1) exactly.
    """
    return Schedule([
        hadamard(1),
        hadamard(2),
        transfer_ei(2),
        Checkpoint("pre_diffusion"),
        phase_flip(1, ("g", "e")),
        phase_flip(2, ("g", "i")),
        transit or PhaseGateTransit(),
        transfer_ie(2),
        Checkpoint("post_diffusion"),
    ])


def readout_schedule(target: str) -> Schedule:
    _, b2 = _check_target(target)
    steps = [hadamard(1), hadamard(2)]
    if b2 == 1:
        steps.append(transfer_ei(2))
    steps.append(Checkpoint("final"))
    return Schedule(steps)


def search_schedule(target: str, transit=None) -> Schedule:
    """Two-atom part of the search, from the prepared data register to readout."""
    return oracle_schedule(target, transit) + diffusion_schedule(transit) + readout_schedule(target)


def prepare_data_register(fock_dim: int = 2) -> tuple[StateVector, StateVector]:
    """Run the three-atom preparation and discard the auxiliary atom 3.

    Returns (three-atom prepared state, two-atom data register).
    """
    start = tensor_state("g", "g", "e", 0, fock_dim=fock_dim)
    prepared = run_schedule(start, preparation_schedule()).state
    data, _aux = drop_auxiliary(prepared)
    return prepared, data


# -- reports ------------------------------------------------------------------------

def _target_ket(target: str, fock_dim: int) -> StateVector:
    return ket(f"{target},0", fock_dim=fock_dim)


def _target_probability(s: StateVector, target: str) -> float:
    b1, b2 = TARGETS[target]
    want = (b1, 2 * b2)
    probs = partition_probabilities(s, lambda b: b.atoms[:2] == want)
    return float(probs.get(True, 0.0))


def _vacuum_probability(s: StateVector) -> float:
    probs = partition_probabilities(s, lambda b: b.photons == 0)
    return float(probs.get(True, 0.0))


def _outcome(final: StateVector, target: str) -> tuple[float, float, float]:
    """(unconditional target probability, conditional fidelity, loss-free vacuum weight)."""
    survival = final.norm() ** 2
    cond = final.normalized()
    return (
        _target_probability(final, target),
        fidelity(cond, _target_ket(target, final.fock_dim)),
        survival * _vacuum_probability(cond),
    )


def grover_physical(
    target: str = "eg",
    ideal: bool = True,
    decay: DecayParams | None = None,
    fock_dim: int = 2,
) -> RunReport:
    """Pulse-level two-qubit search.

    ``ideal=True`` runs lossless gate transits. ``ideal=False`` propagates
    every transit under the non-Hermitian generator with ``decay`` (default
    kappa = tau = 0.1 g1) and no compensation.
    """
    _check_target(target)
    if ideal:
        transit = PhaseGateTransit()
    else:
        transit = CavityTransit(GATE_TIME, CouplingParams.reference(), decay or DecayParams.reference())
    prepared, data = prepare_data_register(fock_dim)
    sched = search_schedule(target, transit)
    result = run_schedule(data, sched)
    p_success, fid, p_post = _outcome(result.state, target)
    params: dict[str, Any] = {
        "target": target,
        "ideal": ideal,
        "fock_dim": fock_dim,
        "g1": 1.0,
        "g2": CouplingParams.reference().g2,
        "transit_time": GATE_TIME,
    }
    if not ideal:
        d = decay or DecayParams.reference()
        params.update(kappa=d.kappa, tau=d.tau)
    checkpoints = {"preparation": prepared, **result.checkpoints}
    notes = [
        "atom 2 encoding per stage: "
        + ", ".join(f"{k}={v}" for k, v in STAGE_ENCODING.items() if k in checkpoints),
        "diffusion pulses are reconstructed: Z on atom 1 and on atom 2's {g,i} pair before the second transit",
    ]
    return RunReport(
        final_state=result.state,
        success_probability=p_success,
        fidelity_vs_target=fid,
        postselect_probability=p_post,
        parameters=params,
        notes=notes,
        checkpoints=checkpoints,
        extras={"schedule": sched.to_list(), "survival_norm": result.survival_norm},
    )


def frame_alignment_schedule() -> Schedule:
    """Z on both atoms; takes the decayed search state to the printed sign pattern."""
    return Schedule([phase_flip(1), phase_flip(2), Checkpoint("pre_compensation")])


def grover_physical_decay(target: str = "eg", decay: DecayParams | None = None) -> RunReport:
    """Search with the tabulated decaying gate and compensating final rotations.

    Both transits attenuate |eg> and |ei> by ``a``. The decayed state before
    readout is a product state; it is brought into the printed frame by
    Z on both atoms, then rotated onto the target by the solved local
    unitaries. The renormalized result reaches the target exactly, while the
    unconditional weight of that branch is ((1 + a^2)/2)^2.
    """
    b1, b2 = _check_target(target)
    decay = decay or DecayParams.reference()
    a = phenomenological_factor(decay)
    transit = PhaseGateTransit(decay)

    prepared, data = prepare_data_register()
    front = oracle_schedule(target, transit) + diffusion_schedule(transit) + frame_alignment_schedule()
    pre = run_schedule(data, front)
    block = two_atom_block(pre.state, "e")
    block_n = block / np.linalg.norm(block)
    if target == "eg":
        pair = comp.solve_compensation(a)
        if np.linalg.norm(pair.apply(block_n)[1, 0]) < 1 - 1e-9:
            raise RuntimeError("solved compensation does not match the decayed state")
    else:
        pair = comp.compensation_for_block(block_n, (b1, b2))

    tail = [custom(1, pair.rotation1, label="compensation_1"), custom(2, pair.rotation2, label="compensation_2")]
    if b2 == 1:
        tail.append(transfer_ei(2))
    tail.append(Checkpoint("final"))
    post = run_schedule(pre.state, tail)
    final = post.state
    p_success, fid, p_post = _outcome(final, target)

    derived_post = ((1 + a * a) / 2) ** 2
    printed = comp.printed_compensation(a)
    fp_amp = first_principles_gate_amplitude(decay)
    uncompensated = grover_physical(target, ideal=False, decay=decay)
    checkpoints = {"preparation": prepared, **pre.checkpoints, **post.checkpoints}
    pre_norm = checkpoints["pre_compensation"].normalized()
    extras: dict[str, Any] = {
        "phenomenological_amplitude": a,
        "first_principles_amplitude": abs(fp_amp),
        "first_principles_amplitude_complex": [fp_amp.real, fp_amp.imag],
        "pre_compensation_amplitudes": {
            k: [c.real, c.imag] for k, c in zip(("gg", "ge", "eg", "ee"), logical_vector(pre_norm, "e"))
        },
        "derived_postselect_probability": derived_post,
        "claimed_success_probability": 1.0,
        "success_probability_discrepancy": abs(derived_post - 1.0) > 1e-9,
        "compensation": {
            "rotation1": [[[z.real, z.imag] for z in row] for row in pair.rotation1],
            "rotation2": [[[z.real, z.imag] for z in row] for row in pair.rotation2],
        },
        "first_principles_uncompensated_success_probability": uncompensated.success_probability,
        "survival_norm": pre.survival_norm * post.survival_norm,
    }
    notes = [
        "decaying transits use the tabulated factor a = 10^(-pi/20) on |eg> and |ei>",
        f"first-principles non-Hermitian transit gives |<eg|U|eg>| = {abs(fp_amp):.6f} instead of a = {a:.6f}",
        "claimed success probability 1.0 holds only conditionally; the unconditional branch weight is ((1+a^2)/2)^2",
        "a Z rotation on each atom aligns the decayed state with the printed sign pattern before compensation",
    ]
    if target == "eg":
        extras["printed_rotation_column_signs"] = comp.column_sign_differences(pair, printed)
        out = printed.apply(block_n)
        extras["printed_rotation_fidelity"] = float(abs(out[1, 0]) ** 2 / np.sum(np.abs(out) ** 2))
        notes.append("compensation solved from the product factorization; printed rotations differ by column signs")
    return RunReport(
        final_state=final,
        success_probability=p_success,
        fidelity_vs_target=fid,
        postselect_probability=p_post,
        parameters={"target": target, "kappa": decay.kappa, "tau": decay.tau, "g1": 1.0,
                    "g2": CouplingParams.reference().g2, "transit_time": GATE_TIME},
        notes=notes,
        checkpoints=checkpoints,
        extras=extras,
    )


def physical_logical_state(report: RunReport) -> np.ndarray:
    """Final two-atom state as a normalized logical 4-vector, atom 2 read on {g, i}."""
    v = logical_vector(report.final_state, "i")
    return v / np.linalg.norm(v)


def grover_cross_check(target: str) -> float:
    """Fidelity between the gate-level n = 2 search output and the pulse-level one."""
    phys = grover_physical(target)
    gate = grover_gate_reference(2, TARGET_INDEX[target])
    leak = 1.0 - np.linalg.norm(logical_vector(phys.final_state, "i")) ** 2
    return float(abs(np.vdot(gate.final_state, physical_logical_state(phys))) ** 2 * (1.0 - leak))


# -- Deutsch-Jozsa ------------------------------------------------------------------

def dj_oracle_schedule(case: OracleCase, transit=None) -> Schedule:
    """U_f on (query atom 1, auxiliary atom 2).

    For f(x) = x the auxiliary's e component is parked in i, a transit flips
    |ei>, atom 2 swaps g <-> i (three transfers), a second transit flips |ei>
    again, and i is returned to e. With the auxiliary in (g - e)/√2 the net
    effect is the phase (-1)^f(x) on the query.
    """
    if case.is_constant:
        return Schedule([swap_ge(2)] if case.f0 == 1 else [])
    transit = transit or PhaseGateTransit()
    steps = [
        transfer_ei(2),
        transit,
        transfer_ie(2),
        swap_ge(2),
        transfer_ei(2),
        transit,
        transfer_ie(2),
    ]
    if case.f0 == 1:
        steps.append(swap_ge(2))
    return Schedule(steps)


def dj_schedule(case: OracleCase, transit=None) -> Schedule:
    return (
        Schedule([hadamard_plus(1), hadamard_minus(2), Checkpoint("prepared")])
        + dj_oracle_schedule(case, transit)
        + [Checkpoint("oracle"), hadamard(1), Checkpoint("final")]
    )


def dj_physical(case: OracleCase, fock_dim: int = 2) -> RunReport:
    """Two-qubit Deutsch-Jozsa; atom 1 read out in g means constant, e balanced."""
    start = tensor_state("g", "e", 0, fock_dim=fock_dim)
    sched = dj_schedule(case)
    result = run_schedule(start, sched)
    final = result.state
    probs = atom_level_probabilities(final, 1)
    classification = "constant" if probs["g"] > probs["e"] else "balanced"
    correct = probs["g"] if case.is_constant else probs["e"]
    expected_query = "g" if case.is_constant else "e"
    aux = final.normalized()
    return RunReport(
        final_state=final,
        success_probability=correct,
        fidelity_vs_target=correct,
        postselect_probability=_vacuum_probability(aux),
        parameters={"f0": case.f0, "f1": case.f1, "oracle": case.name, "fock_dim": fock_dim},
        notes=[f"query atom expected in {expected_query}"],
        checkpoints=result.checkpoints,
        extras={
            "classification": classification,
            "expected_classification": case.expected,
            "query_probabilities": probs,
            "gate_reference_classification": dj_gate_reference(case),
            "schedule": sched.to_list(),
        },
    )
