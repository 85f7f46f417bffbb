import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from intelligent_states import nonlinearity as nl
from intelligent_states.errors import InvalidParam, NegativeVariance, OutOfValidRange
from intelligent_states.fock import (
    FockState,
    clamp_variance,
    commutator_expectation,
    deformed_moments,
    deformed_quadrature_stats,
    dump_state,
    ladder_moments,
    load_state,
    moments,
    state_from_dict,
    state_to_dict,
)


def coherent(alpha, dim=40):
    n = np.arange(dim)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    c = np.exp(-abs(alpha) ** 2 / 2 - 0.5 * log_fact) * alpha**n
    return FockState.from_amplitudes(c)


def random_state(rng, dim=32):
    return FockState.from_amplitudes(rng.normal(size=dim) + 1j * rng.normal(size=dim))


# FockState -----------------------------------------------------------------

def test_from_amplitudes_normalizes_and_freezes():
    s = FockState.from_amplitudes([3.0, 4.0])
    assert math.fsum(s.probabilities) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 1.0


def test_unnormalized_direct_construction_rejected():
    with pytest.raises(InvalidParam):
        FockState(np.array([1.0, 1.0], dtype=complex))


@pytest.mark.parametrize("bad", [[], [0.0, 0.0], [1.0, np.nan], [[1.0]]])
def test_bad_amplitudes(bad):
    with pytest.raises(InvalidParam):
        FockState.from_amplitudes(bad)


def test_fock_and_vacuum():
    s = FockState.fock(3, 6)
    assert s.n_top == 5 and s.truncation_dim == 6 and len(s) == 6
    assert s.probabilities[3] == 1.0
    assert FockState.vacuum().n_top == 0
    with pytest.raises(InvalidParam):
        FockState.fock(4, 3)


# ladder moments ---------------------------------------------------------------

def test_vacuum_moments():
    m = ladder_moments(FockState.vacuum(5))
    assert m.mean_a == 0 and m.mean_a2 == 0 and m.mean_n == 0


def test_fock_one_moments():
    m = ladder_moments(FockState.fock(1, 4))
    assert m.mean_a == 0 and m.mean_n == 1 and m.mean_n2 == 1


def test_coherent_moments():
    m = ladder_moments(coherent(0.5))
    assert m.mean_a == pytest.approx(0.5, abs=1e-14)
    assert m.mean_n == pytest.approx(0.25, abs=1e-14)
    assert m.mean_a2 == pytest.approx(0.25, abs=1e-14)


def test_complex_coherent_mean_a():
    alpha = 0.4 - 0.3j
    m = ladder_moments(coherent(alpha))
    assert abs(m.mean_a - alpha) < 1e-14


# deformed moments --------------------------------------------------------------

def test_identity_reduction_bitwise():
    rng = np.random.default_rng(7)
    for _ in range(20):
        s = random_state(rng)
        lm = ladder_moments(s)
        dm = deformed_moments(s, nl.identity())
        assert dm.mean_A == lm.mean_a
        assert dm.mean_A2 == lm.mean_a2
        assert dm.mean_AdagA == lm.mean_n


def test_vacuum_deformed(catalog_f):
    dm = deformed_moments(FockState.vacuum(4), catalog_f)
    assert dm.mean_A == 0 and dm.mean_AdagA == 0
    assert dm.mean_comm_XP == pytest.approx(nl.eval_f(catalog_f, 1) ** 2, rel=1e-15)


def test_harmonious_fock_one():
    dm = deformed_moments(FockState.fock(1, 3), nl.harmonious())
    assert dm.mean_AdagA == pytest.approx(1.0, rel=1e-15)
    assert dm.mean_AAdag == pytest.approx(1.0, rel=1e-15)
    assert dm.mean_comm_XP == pytest.approx(0.0, abs=1e-15)


def test_deformed_needs_f_beyond_top():
    f = nl.trapped_ion(0.2)  # valid up to n = 35
    deformed_moments(FockState.vacuum(35), f)  # N = 34 needs f(35)
    with pytest.raises(OutOfValidRange):
        deformed_moments(FockState.vacuum(36), f)


def test_moment_set_fields():
    s = coherent(0.3)
    ms = moments(s, nl.hydrogen())
    assert ms.mean_a == ladder_moments(s).mean_a
    assert ms.mean_comm_XP == deformed_moments(s, nl.hydrogen()).mean_comm_XP


# quadrature stats -------------------------------------------------------------

def test_identity_vacuum_quadratures():
    dX, dP, comm = deformed_quadrature_stats(FockState.vacuum(3), nl.identity())
    assert dX == pytest.approx(1 / math.sqrt(2)) and dP == pytest.approx(1 / math.sqrt(2))
    assert comm == 1.0


def test_identity_coherent_quadratures():
    dX, dP, _ = deformed_quadrature_stats(coherent(0.5), nl.identity())
    assert dX == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert dP == pytest.approx(1 / math.sqrt(2), abs=1e-12)


def test_harmonious_vacuum_quadratures():
    dX, dP, comm = deformed_quadrature_stats(FockState.vacuum(3), nl.harmonious())
    assert dX**2 == pytest.approx(0.5) and dP**2 == pytest.approx(0.5)
    assert comm == pytest.approx(1.0)


def test_clamp_variance():
    assert clamp_variance(-5e-11) == 0.0
    assert clamp_variance(0.25) == 0.25
    with pytest.raises(NegativeVariance):
        clamp_variance(-1e-9)


# property tests on random states ------------------------------------------------

amplitude_arrays = arrays(
    np.complex128,
    st.integers(min_value=2, max_value=32),
    elements=st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
).filter(lambda a: np.sum(np.abs(a) ** 2) > 1e-6)

fs = st.sampled_from([nl.identity(), nl.harmonious(), nl.hydrogen(), nl.trapped_ion(0.2)])


@settings(max_examples=100, deadline=None)
@given(amplitude_arrays, fs)
def test_hermiticity_properties(amps, f):
    s = FockState.from_amplitudes(amps)
    lm = ladder_moments(s)
    dm = deformed_moments(s, f)
    assert lm.mean_n >= 0 and dm.mean_AdagA >= 0
    assert lm.mean_n2 - lm.mean_n**2 >= -1e-10 * max(1.0, lm.mean_n2)
    dX, dP, _ = deformed_quadrature_stats(s, f)
    assert dX >= 0 and dP >= 0


def test_hermiticity_seeded_trials():
    rng = np.random.default_rng(2024)
    f = nl.hydrogen()
    for _ in range(100):
        s = random_state(rng, 32)
        dm = deformed_moments(s, f)
        lm = ladder_moments(s)
        assert lm.mean_n >= 0 and dm.mean_AdagA >= 0
        assert np.isreal(dm.mean_AdagA) and np.isreal(dm.mean_comm_XP)
        deformed_quadrature_stats(s, f)


@settings(max_examples=100, deadline=None)
@given(amplitude_arrays, fs)
def test_uncertainty_relation(amps, f):
    s = FockState.from_amplitudes(amps)
    dX, dP, comm = deformed_quadrature_stats(s, f)
    assert dX * dP >= 0.5 * abs(comm) - 1e-10


@settings(max_examples=100, deadline=None)
@given(amplitude_arrays, fs)
def test_commutator_two_paths(amps, f):
    s = FockState.from_amplitudes(amps)
    a = deformed_moments(s, f).mean_comm_XP
    b = commutator_expectation(s, f)
    assert abs(a - b) <= 1e-14 * max(abs(b), 1.0)


@settings(max_examples=50, deadline=None)
@given(amplitude_arrays)
def test_identity_reduction_property(amps):
    s = FockState.from_amplitudes(amps)
    lm = ladder_moments(s)
    dm = deformed_moments(s, nl.identity())
    assert (dm.mean_A, dm.mean_A2, dm.mean_AdagA) == (lm.mean_a, lm.mean_a2, lm.mean_n)


# JSON dump --------------------------------------------------------------------

def test_dump_layout():
    s = coherent(0.5, dim=10)
    d = state_to_dict(s, "identity", 1.0, 0.5)
    assert list(d) == ["name", "lambda", "z", "N", "tail_mass", "amplitudes"]
    assert d["N"] == 9 and len(d["amplitudes"]) == 10
    assert d["z"] == [0.5, 0.0]


def test_dump_round_trip():
    rng = np.random.default_rng(1)
    s = random_state(rng, 12)
    text = dump_state(s, "hydrogen", 0.5, 0.3 + 0.1j)
    back, name, lam, z = load_state(text)
    np.testing.assert_array_equal(back.amplitudes, s.amplitudes)
    assert (name, lam, z) == ("hydrogen", 0.5, 0.3 + 0.1j)


def test_dump_mismatched_n():
    d = state_to_dict(FockState.vacuum(3), "identity", 1.0, 0)
    d["N"] = 5
    with pytest.raises(InvalidParam):
        state_from_dict(d)
