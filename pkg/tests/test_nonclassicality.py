
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intelligent_states import nonlinearity as nl
from intelligent_states.errors import VacuumUndefined
from intelligent_states.fock import FockState
from intelligent_states.nonclassicality import (
    REPORT_FIELDS,
    full_report,
    is_sub_poissonian,
    mandel_q,
    photon_number_stats,
    quadrature_report,
    uncertainty_product,
)
from intelligent_states.states import IntelligentStateRequest, TruncationPolicy, build


def state(f, lam, z, **kw):
    return build(IntelligentStateRequest(f, lam, z, **kw))


def test_fock_three_q_is_minus_one():
    assert mandel_q(FockState.fock(3, 6)) == -1.0


def test_vacuum_q_is_error():
    with pytest.raises(VacuumUndefined):
        mandel_q(FockState.vacuum(4))


def test_vacuum_quadratures():
    r = quadrature_report(FockState.vacuum(4))
    assert (r.var_x, r.var_p, r.q1, r.q2) == (0.5, 0.5, 0.0, 0.0)


@pytest.mark.parametrize("z", [0.2, 0.7, 1.5, 3.0, 0.5 - 0.5j])
def test_coherent_baseline(z):
    s = state(nl.identity(), 1, z)
    r = quadrature_report(s)
    assert abs(mandel_q(s)) <= 1e-9
    assert abs(r.q1) <= 1e-9 and abs(r.q2) <= 1e-9


@pytest.mark.parametrize("z", [0.1, 0.3, 0.6, 0.9])
def test_harmonious_q_closed_form(z):
    # near the disc edge the geometric tail is long; tighten the tail budget
    pol = TruncationPolicy(epsilon_tail=1e-15, n_max=1024)
    q = mandel_q(state(nl.harmonious(), 1, z, truncation=pol))
    exact = z * z / (1 - z * z)
    assert abs(q - exact) / exact <= 1e-8


def test_harmonious_example_value():
    assert mandel_q(state(nl.harmonious(), 1, 0.6)) == pytest.approx(0.5625, rel=1e-9)


def test_squeezed_vacuum_variances():
    r = quadrature_report(state(nl.identity(), 3, 0))
    assert abs(r.var_p - 1 / 6) <= 1e-8 and abs(r.var_x - 1.5) <= 1e-8
    assert r.q2 == pytest.approx(-2 / 3, abs=1e-8) and r.q1 == pytest.approx(2.0, abs=1e-8)


def test_trapped_ion_example():
    s = state(nl.trapped_ion(0.2), 1, 2)
    assert mandel_q(s) < 0 and quadrature_report(s).q1 < 0


def test_hydrogen_example():
    s = state(nl.hydrogen(), 1, 0.8)
    assert mandel_q(s) > 0 and quadrature_report(s).q2 < 0


def test_full_report_coherent():
    f = nl.identity()
    rep = full_report(state(f, 1, 0.5), f, 1, 0.5)
    assert tuple(rep.as_dict()) == REPORT_FIELDS
    assert abs(rep.mandel_q) < 1e-9 and abs(rep.q1) < 1e-9 and abs(rep.q2) < 1e-9
    assert abs(rep.intelligence_residual) < 1e-9
    assert rep.mean_n == pytest.approx(0.25)


def test_full_report_vacuum_raises():
    f = nl.identity()
    with pytest.raises(VacuumUndefined):
        full_report(FockState.vacuum(3), f, 1, 0)


GRID = [
    (f, lam, z)
    for f in (nl.identity(), nl.harmonious(), nl.hydrogen(), nl.trapped_ion(0.1))
    for lam in (0.5, 0.9, 1.0, 1.5, 3.0)
    for z in (0.0, 0.3, 0.5)
    if not (lam == 1.0 and z == 0.0)
]


@pytest.mark.parametrize("f,lam,z", GRID, ids=lambda v: getattr(v, "name", str(v)))
def test_grid_invariants(f, lam, z):
    s = state(f, lam, z)
    rep = full_report(s, f, lam, z)
    assert rep.q1 >= -1 and rep.q2 >= -1 and rep.mandel_q >= -1
    assert rep.var_x * rep.var_p >= 0.25 - 1e-10
    assert (rep.mandel_q < 0) == (rep.var_n < rep.mean_n) == is_sub_poissonian(s)
    assert uncertainty_product(s) == pytest.approx(rep.var_x * rep.var_p)


amps = st.lists(
    st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=2, max_size=24
).filter(lambda a: sum(abs(x) ** 2 for x in a) > 1e-6)


@settings(max_examples=100, deadline=None)
@given(amps)
def test_random_state_bounds(a):
    s = FockState.from_amplitudes(a)
    r = quadrature_report(s)
    assert r.q1 >= -1 and r.q2 >= -1
    assert r.var_x * r.var_p >= 0.25 - 1e-10
    mean_n, var_n = photon_number_stats(s)
    if mean_n > 1e-14:
        q = mandel_q(s)
        assert q >= -1 - 1e-12
        assert (q < 0) == (var_n < mean_n)
