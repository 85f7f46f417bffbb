"""Photon statistics and quadrature squeezing of a truncated state.

Squeezing is reported for the undeformed quadratures x = (a + a^dag)/sqrt(2)
and p = (a - a^dag)/(i sqrt(2)). The deformed uncertainties enter only the
intelligence residual ``dX dP - |<[X, P]>|/2``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import NamedTuple

from .errors import VacuumUndefined
from .fock import FockState, clamp_variance, deformed_quadrature_stats, ladder_moments
from .nonlinearity import NonlinearityFunction

__all__ = [
    "StatsReport",
    "QuadratureReport",
    "REPORT_FIELDS",
    "photon_number_stats",
    "mandel_q",
    "quadrature_report",
    "full_report",
    "is_sub_poissonian",
    "uncertainty_product",
]

VACUUM_TOL = 1e-14


@dataclass(frozen=True)
class StatsReport:
    mean_n: float
    var_n: float
    mandel_q: float
    var_x: float
    var_p: float
    q1: float
    q2: float
    dX: float
    dP: float
    comm_abs: float
    intelligence_residual: float

    def as_dict(self) -> dict:
        return asdict(self)


REPORT_FIELDS = tuple(StatsReport.__dataclass_fields__)


class QuadratureReport(NamedTuple):
    var_x: float
    var_p: float
    q1: float
    q2: float


def photon_number_stats(state: FockState) -> tuple[float, float]:
    """Return ``(<n>, <(dn)^2>)``."""
    m = ladder_moments(state)
    var_n = clamp_variance(m.mean_n2 - m.mean_n ** 2, "(dn)^2")
    return m.mean_n, var_n


def mandel_q(state: FockState) -> float:
    """Q = (<(dn)^2> - <n>) / <n>; negative means sub-Poissonian light.

    Raises
    ------
    VacuumUndefined
        If <n> < 1e-14.
    """
    mean_n, var_n = photon_number_stats(state)
    if mean_n < VACUUM_TOL:
        raise VacuumUndefined(f"<n> = {mean_n:.3g}; Q needs a nonvacuum state")
    return (var_n - mean_n) / mean_n


def quadrature_report(state: FockState) -> QuadratureReport:
    """Variances of x and p and the squeezing parameters q_i = 2 var - 1.

    ``-1 < q_i < 0`` means the state is squeezed in that quadrature.
    """
    m = ladder_moments(state)
    var_x = 0.5 + m.mean_a2.real + m.mean_n - 2.0 * m.mean_a.real ** 2
    var_p = 0.5 - m.mean_a2.real + m.mean_n - 2.0 * m.mean_a.imag ** 2
    var_x = clamp_variance(var_x, "(dx)^2")
    var_p = clamp_variance(var_p, "(dp)^2")
    return QuadratureReport(var_x, var_p, (var_x - 0.5) / 0.5, (var_p - 0.5) / 0.5)


def full_report(state: FockState, f: NonlinearityFunction, lam: float, z: complex) -> StatsReport:
    """All diagnostics of one state.

    ``lam`` and ``z`` identify the state for the caller; the numbers are
    computed from the amplitudes alone.
    """
    mean_n, var_n = photon_number_stats(state)
    q = mandel_q(state)
    quad = quadrature_report(state)
    dX, dP, comm = deformed_quadrature_stats(state, f)
    return StatsReport(
        mean_n=mean_n,
        var_n=var_n,
        mandel_q=q,
        var_x=quad.var_x,
        var_p=quad.var_p,
        q1=quad.q1,
        q2=quad.q2,
        dX=dX,
        dP=dP,
        comm_abs=abs(comm),
        intelligence_residual=dX * dP - 0.5 * abs(comm),
    )


def is_sub_poissonian(state: FockState) -> bool:
    mean_n, var_n = photon_number_stats(state)
    return var_n < mean_n


def uncertainty_product(state: FockState) -> float:
    """(dx)^2 (dp)^2, which is at least 1/4."""
    quad = quadrature_report(state)
    return quad.var_x * quad.var_p

