import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonant_cqed.hilbert import (
    BasisIndex,
    DimensionError,
    HilbertError,
    NormalizationError,
    StateVector,
    TruncationError,
    apply_operator,
    atom_level_probabilities,
    basis,
    creation_operator,
    drop_auxiliary,
    fidelity,
    inner,
    ket,
    logical_vector,
    postselect,
    random_state,
    superposition,
    tensor_state,
    two_atom_block,
)

A = 10 ** (-math.pi / 20)


def test_flat_index_layout():
    # ((a1*3)+a2)*fock_dim + n
    assert BasisIndex((1, 0), 0).flat_index == 6
    assert BasisIndex((1, 2), 1).flat_index == 11
    assert BasisIndex.parse("ei,1").flat_index == 11
    assert BasisIndex.from_flat(11).label == "ei,1"


@given(st.integers(0, 3**3 * 3 - 1))
def test_flat_index_round_trip(k):
    b = BasisIndex.from_flat(k, n_atoms=3, fock_dim=3)
    assert b.flat_index == k
    assert BasisIndex.parse(b.label, fock_dim=3) == b


def test_basis_order_matches_flat_index():
    for k, b in enumerate(basis(2, 3)):
        assert b.flat_index == k


def test_tensor_state_product():
    s = tensor_state("e", "g", 0)
    assert s.amplitude("eg,0") == 1
    assert s.norm() == pytest.approx(1.0)


def test_tensor_state_superposition_factor():
    plus = {"g": 1 / math.sqrt(2), "e": 1 / math.sqrt(2)}
    s = tensor_state(plus, "g", 0)
    assert s.amplitude("gg,0") == pytest.approx(1 / math.sqrt(2))
    assert s.amplitude("eg,0") == pytest.approx(1 / math.sqrt(2))


def test_tensor_state_rejects_photon_beyond_cutoff():
    with pytest.raises(TruncationError):
        tensor_state("g", "g", 2, fock_dim=2)


def test_tensor_state_rejects_unnormalized_factor():
    with pytest.raises(NormalizationError):
        tensor_state({"g": 1, "e": 1}, "g", 0)


def test_state_vector_dimension_check():
    with pytest.raises(DimensionError):
        StateVector(np.ones(7), n_atoms=2, fock_dim=2)


def test_state_amplitudes_read_only():
    s = ket("gg,0")
    with pytest.raises(ValueError):
        s.amplitudes[0] = 2


def test_fidelity_requires_normalized():
    bad = superposition({"gg,0": 1, "eg,0": 1})
    with pytest.raises(NormalizationError):
        fidelity(bad, ket("gg,0"))


def test_fidelity_decayed_vs_reflected_by_hand():
    # oracle: 4-term inner product evaluated by hand
    reflected = superposition({"gg,0": 0.5, "ge,0": 0.5, "eg,0": -0.5, "ee,0": -0.5})
    decayed = superposition({"gg,0": 1, "ge,0": -A, "eg,0": A, "ee,0": -A * A}).normalized()
    overlap = (1 - A - A + A * A) / (2 * (1 + A * A))
    assert fidelity(decayed, reflected) == pytest.approx(overlap**2, abs=1e-14)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_fidelity_symmetric_and_bounded(seed):
    rng = np.random.default_rng(seed)
    a, b = random_state(rng), random_state(rng)
    f = fidelity(a, b)
    assert 0 <= f <= 1
    assert f == pytest.approx(fidelity(b, a), abs=1e-14)
    assert fidelity(a, a) == pytest.approx(1.0, abs=1e-12)


def test_inner_conjugates_bra():
    a = superposition({"gg,0": 1j})
    assert inner(a, ket("gg,0")) == pytest.approx(-1j)


def test_postselect_branch():
    s = superposition({"gg,0": 0.6, "gg,1": 0.8})
    cond, p = postselect(s, lambda b: b.photons == 0)
    assert p == pytest.approx(0.36)
    assert fidelity(cond, ket("gg,0")) == pytest.approx(1.0)


def test_postselect_empty_branch():
    cond, p = postselect(ket("gg,0"), lambda b: b.photons == 1)
    assert cond is None and p == 0.0


def test_drop_auxiliary_recovers_factor():
    minus = {"g": 1 / math.sqrt(2), "e": -1 / math.sqrt(2)}
    plus = {"g": 1 / math.sqrt(2), "e": 1 / math.sqrt(2)}
    s = tensor_state(plus, "i", minus, 0)
    data, aux = drop_auxiliary(s)
    assert fidelity(data, tensor_state(plus, "i", 0)) == pytest.approx(1.0)
    # phase convention: first nonzero auxiliary amplitude is real positive
    np.testing.assert_allclose(aux, [1 / math.sqrt(2), -1 / math.sqrt(2), 0], atol=1e-12)
    assert data.amplitude("gi,0") == pytest.approx(1 / math.sqrt(2))


def test_drop_auxiliary_rejects_entangled():
    s = superposition({"ggg,0": 1, "gge,0": 0, "gee,0": 1}).normalized()
    s = StateVector(s.amplitudes, n_atoms=3, fock_dim=2)
    with pytest.raises(HilbertError):
        drop_auxiliary(s)


def test_two_atom_block_and_logical_vector():
    s = superposition({"gg,0": 1, "gi,0": 2, "eg,0": 3, "ei,0": 4})
    np.testing.assert_array_equal(two_atom_block(s, "i"), [[1, 2], [3, 4]])
    np.testing.assert_array_equal(logical_vector(s, "i"), [1, 2, 3, 4])
    np.testing.assert_array_equal(logical_vector(s, "e"), [1, 0, 3, 0])


def test_atom_level_probabilities():
    s = superposition({"gg,0": 0.6, "ei,0": 0.8})
    p = atom_level_probabilities(s, 2)
    assert p == pytest.approx({"g": 0.36, "e": 0.0, "i": 0.64})


def test_creation_operator_on_vacuum():
    out = apply_operator(creation_operator(), ket("eg,0"))
    assert out.amplitude("eg,1") == pytest.approx(1.0)


def test_ket_unknown_level():
    with pytest.raises(HilbertError):
        ket("xg,0")
