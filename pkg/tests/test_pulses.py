import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonant_cqed.dynamics import DecayParams
from resonant_cqed.hilbert import DimensionError, fidelity, ket, random_state, superposition, tensor_state
from resonant_cqed.pulses import (
    CavityTransit,
    Checkpoint,
    PhaseGateTransit,
    PulseError,
    PulseStep,
    Schedule,
    apply_pulse,
    custom,
    hadamard,
    hadamard_minus,
    hadamard_plus,
    phase_flip,
    rotation_ge,
    run_schedule,
    schedule_from_list,
    swap_ge,
    transfer_ei,
    transfer_ie,
)

R2 = 1 / math.sqrt(2)


def test_hadamard_plus_on_g():
    out = apply_pulse(ket("gg,0"), hadamard_plus(1))
    assert out.amplitude("gg,0") == pytest.approx(R2)
    assert out.amplitude("eg,0") == pytest.approx(R2)


def test_hadamard_minus_on_e():
    out = apply_pulse(ket("ge,0"), hadamard_minus(2))
    assert out.amplitude("gg,0") == pytest.approx(R2)
    assert out.amplitude("ge,0") == pytest.approx(-R2)


def test_g_to_i_composite():
    # g -> (g+e)/√2 -> (g+i)/√2
    s = run_schedule(ket("gg,0"), [hadamard_plus(2), transfer_ei(2)]).state
    want = superposition({"gg,0": R2, "gi,0": R2})
    np.testing.assert_allclose(s.amplitudes, want.amplitudes, atol=1e-15)


def test_transfers_and_swap_are_involutions():
    for p in (transfer_ei(1), transfer_ie(2), swap_ge(1)):
        m = p.matrix()
        np.testing.assert_allclose(m @ m, np.eye(3), atol=1e-15)


def test_transfer_ie_then_swap_maps_gate_output_to_marked():
    s = superposition({"gg,0": 0.5, "gi,0": 0.5, "eg,0": 0.5, "ei,0": -0.5})
    out = run_schedule(s, [transfer_ie(2), swap_ge(2)]).state
    want = superposition({"gg,0": 0.5, "ge,0": 0.5, "eg,0": -0.5, "ee,0": 0.5})
    np.testing.assert_allclose(out.amplitudes, want.amplitudes, atol=1e-15)


def test_phase_flip_pairs():
    out = apply_pulse(ket("ei,0"), phase_flip(2, ("g", "i")))
    assert out.amplitude("ei,0") == pytest.approx(-1)
    out = apply_pulse(ket("ei,0"), phase_flip(2, ("g", "e")))
    assert out.amplitude("ei,0") == pytest.approx(1)


@settings(max_examples=50)
@given(st.floats(-10, 10), st.floats(-10, 10), st.integers(1, 2))
def test_rotation_unitary_and_inverse(theta, phi, atom):
    p = rotation_ge(atom, theta, phi)
    m = p.matrix()
    np.testing.assert_allclose(m.conj().T @ m, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(p.inverse().matrix() @ m, np.eye(3), atol=1e-12)
    assert m[2, 2] == 1


def test_rotation_pi_over_two_is_hadamard_up_to_phases():
    m = rotation_ge(1, math.pi / 2, -math.pi / 2).matrix()[:2, :2]
    np.testing.assert_allclose(np.abs(m), np.full((2, 2), R2), atol=1e-15)


def test_custom_rejects_non_unitary():
    with pytest.raises(PulseError):
        custom(1, np.array([[1, 1], [0, 1]]))


def test_pulse_rejects_bad_atom_and_kind():
    with pytest.raises(PulseError):
        swap_ge(4)
    with pytest.raises(PulseError):
        PulseStep("laser", 1)


def test_pulse_on_missing_atom():
    with pytest.raises(DimensionError):
        apply_pulse(ket("gg,0"), swap_ge(3))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_pulses_preserve_norm(seed):
    s = random_state(np.random.default_rng(seed))
    sched = [hadamard(1), transfer_ei(2), rotation_ge(2, 0.3, 1.1), phase_flip(1)]
    assert run_schedule(s, sched).state.norm() == pytest.approx(1.0, abs=1e-12)


def test_pulse_does_not_touch_cavity_or_other_atom():
    s = tensor_state("g", "i", 1)
    out = apply_pulse(s, hadamard(1))
    assert out.amplitude("gi,1") == pytest.approx(R2)
    assert out.amplitude("ei,1") == pytest.approx(R2)


def test_schedule_checkpoints_and_survival():
    sched = Schedule([hadamard(1), Checkpoint("a"), PhaseGateTransit(), Checkpoint("b")])
    r = run_schedule(ket("gg,0"), sched)
    assert set(r.checkpoints) == {"a", "b"}
    assert r.survival_norm == 1.0
    assert len(sched) == 4 and sched.atoms_referenced() == {1}


def test_decay_transit_survival_matches_norm():
    s = superposition({"eg,0": R2, "gg,0": R2})
    r = run_schedule(s, [CavityTransit(decay=DecayParams.reference())])
    assert r.survival_norm == pytest.approx(r.state.norm(), abs=1e-14)
    assert r.survival_norm < 1


def test_schedule_round_trip():
    block = np.array([[0.6, -0.8], [0.8, 0.6]])
    sched = Schedule([
        PhaseGateTransit(DecayParams.reference()), hadamard_plus(1), transfer_ei(2), phase_flip(2, ("g", "i")),
        rotation_ge(1, 0.4, 0.2), custom(2, block, label="c"), CavityTransit(1.0), Checkpoint("x"),
    ])
    back = schedule_from_list(sched.to_list())
    assert back.to_list() == sched.to_list()
    s = superposition({"gg,0": 0.5, "gi,0": 0.5, "eg,0": 0.5, "ei,0": 0.5})
    a = run_schedule(s, sched).state
    b = run_schedule(s, back).state
    assert fidelity(a.normalized(), b.normalized()) == pytest.approx(1.0, abs=1e-12)
