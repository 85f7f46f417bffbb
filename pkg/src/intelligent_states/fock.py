"""Truncated Fock-space states and their moments.

Amplitudes ``c_0 ... c_N`` are stored as a read-only complex array. All
expectation values are sums of real products and are accumulated with
``math.fsum`` so that the result is the correctly rounded sum, whatever the
spread in magnitude of the terms.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidParam, NegativeVariance
from .nonlinearity import NonlinearityFunction

__all__ = [
    "FockState",
    "LadderMoments",
    "DeformedMoments",
    "MomentSet",
    "QuadratureStats",
    "ladder_moments",
    "deformed_moments",
    "moments",
    "commutator_expectation",
    "deformed_quadrature_stats",
    "clamp_variance",
    "state_to_dict",
    "state_from_dict",
    "dump_state",
    "load_state",
]

NORM_TOL = 1e-12
VARIANCE_FLOOR = -1e-10


@dataclass(frozen=True)
class FockState:
    """Normalized pure state truncated to ``c_0 ... c_N``.

    Use :meth:`from_amplitudes` to build one; it normalizes and freezes the
    amplitude array. ``tail_mass`` is the probability estimated beyond n = N
    at construction time; moment routines take it as given.
    """

    amplitudes: np.ndarray
    tail_mass: float = 0.0

    def __post_init__(self):
        amps = self.amplitudes
        if amps.ndim != 1 or amps.size == 0:
            raise InvalidParam("amplitudes must be a nonempty 1-d array")
        norm2 = math.fsum(np.abs(amps) ** 2)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidParam(f"state is not normalized (norm^2 = {norm2!r})")

    @classmethod
    def from_amplitudes(cls, amplitudes, tail_mass: float = 0.0) -> FockState:
        amps = np.array(amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise InvalidParam("amplitudes must be a nonempty 1-d array")
        if not np.all(np.isfinite(amps)):
            raise InvalidParam("amplitudes must be finite")
        norm = math.sqrt(math.fsum(np.abs(amps) ** 2))
        if norm == 0.0:
            raise InvalidParam("cannot normalize the zero vector")
        amps = amps / norm
        amps.setflags(write=False)
        return cls(amps, float(tail_mass))

    @classmethod
    def fock(cls, n: int, dim: int | None = None) -> FockState:
        """Number state |n> in a space of dimension ``dim`` (default n + 1)."""
        dim = n + 1 if dim is None else dim
        if not 0 <= n < dim:
            raise InvalidParam("need 0 <= n < dim")
        amps = np.zeros(dim, dtype=complex)
        amps[n] = 1.0
        return cls.from_amplitudes(amps)

    @classmethod
    def vacuum(cls, dim: int = 1) -> FockState:
        return cls.fock(0, dim)

    @property
    def truncation_dim(self) -> int:
        return self.amplitudes.size

    @property
    def n_top(self) -> int:
        """Largest photon number N carried by the truncated state."""
        return self.amplitudes.size - 1

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __len__(self):
        return self.amplitudes.size


class LadderMoments(NamedTuple):
    mean_a: complex
    mean_a2: complex
    mean_n: float
    mean_n2: float


class DeformedMoments(NamedTuple):
    mean_A: complex
    mean_A2: complex
    mean_AdagA: float
    mean_AAdag: float
    mean_comm_XP: float


class MomentSet(NamedTuple):
    """Undeformed and deformed first and second moments of one state."""

    mean_a: complex
    mean_a2: complex
    mean_n: float
    mean_n2: float
    mean_A: complex
    mean_A2: complex
    mean_AdagA: float
    mean_AAdag: float
    mean_comm_XP: float


class QuadratureStats(NamedTuple):
    dX: float
    dP: float
    comm: float


def _csum(weights, left, right) -> complex:
    """sum_n weights[n] * conj(left[n]) * right[n], compensated."""
    prod = np.conj(left) * right
    re = math.fsum(weights * prod.real)
    im = math.fsum(weights * prod.imag)
    return complex(re, im)


def _moment_pair(c: np.ndarray, w1: np.ndarray, w2: np.ndarray):
    first = _csum(w1, c[:-1], c[1:]) if c.size > 1 else 0j
    second = _csum(w2, c[:-2], c[2:]) if c.size > 2 else 0j
    return first, second


def ladder_moments(state: FockState) -> LadderMoments:
    """<a>, <a^2>, <n>, <n^2> of a truncated state."""
    c = state.amplitudes
    p = state.probabilities
    n = np.arange(c.size, dtype=float)
    w1 = np.sqrt(n[1:])
    w2 = np.sqrt(n[1:-1] * n[2:])
    mean_a, mean_a2 = _moment_pair(c, w1, w2)
    return LadderMoments(
        mean_a, mean_a2, math.fsum(n * p), math.fsum(n * n * p)
    )


def _deformed_factors(f: NonlinearityFunction, n_top: int):
    """Return f(1..N+1) and the diagonal weights k f(k)^2 for k = 0..N+1."""
    fv = f.values(n_top + 1)
    k = np.arange(1, n_top + 2, dtype=float)
    e = np.concatenate(([0.0], k * fv * fv))
    return fv, e


def deformed_moments(state: FockState, f: NonlinearityFunction) -> DeformedMoments:
    """Moments of the deformed ladder operators A = a f(n), A^dagger.

    Needs f(1) ... f(N+1); raises ``OutOfValidRange`` otherwise, since
    <A A^dagger> picks up the term (N+1) f(N+1)^2 |c_N|^2.
    """
    c = state.amplitudes
    p = state.probabilities
    n_top = state.n_top
    fv, e = _deformed_factors(f, n_top)
    n = np.arange(c.size, dtype=float)
    w1 = np.sqrt(n[1:]) * fv[:n_top]
    w2 = np.sqrt(n[1:-1] * n[2:]) * (fv[: n_top - 1] * fv[1:n_top])
    mean_A, mean_A2 = _moment_pair(c, w1, w2)
    adag_a = math.fsum(e[:-1] * p)
    a_adag = math.fsum(e[1:] * p)
    return DeformedMoments(mean_A, mean_A2, adag_a, a_adag, a_adag - adag_a)


def moments(state: FockState, f: NonlinearityFunction) -> MomentSet:
    return MomentSet(*ladder_moments(state), *deformed_moments(state, f))


def commutator_expectation(state: FockState, f: NonlinearityFunction) -> float:
    """-i <[X, P]> summed directly as sum |c_n|^2 [(n+1) f^2(n+1) - n f^2(n)]."""
    _, e = _deformed_factors(f, state.n_top)
    return math.fsum((e[1:] - e[:-1]) * state.probabilities)


def clamp_variance(value: float, label: str = "variance") -> float:
    """Clamp rounding-level negatives to zero; larger negatives are an error."""
    if value < VARIANCE_FLOOR:
        raise NegativeVariance(
            f"{label} = {value:.3e} is below {VARIANCE_FLOOR:g}; "
            "the truncation is too short"
        )
    return max(value, 0.0)


def deformed_quadrature_stats(state: FockState, f: NonlinearityFunction) -> QuadratureStats:
    """Uncertainties of X = (A + A^dag)/sqrt(2), P = (A - A^dag)/(i sqrt(2)).

    Returns ``(dX, dP, comm)`` where ``comm`` is <[X, P]> with the factor i
    removed. <X> and <P> are taken from <A>.
    """
    m = deformed_moments(state, f)
    sym = 0.5 * (m.mean_AAdag + m.mean_AdagA)
    var_x = sym + m.mean_A2.real - 2.0 * m.mean_A.real ** 2
    var_p = sym - m.mean_A2.real - 2.0 * m.mean_A.imag ** 2
    var_x = clamp_variance(var_x, "(dX)^2")
    var_p = clamp_variance(var_p, "(dP)^2")
    return QuadratureStats(math.sqrt(var_x), math.sqrt(var_p), m.mean_comm_XP)


# ---------------------------------------------------------------------------
# JSON state dump


def state_to_dict(state: FockState, name: str, lam: float, z: complex) -> dict:
    """Dump layout shared with the command line tool.

    ``N`` is the largest photon number carried, so ``amplitudes`` holds N + 1
    ``[re, im]`` pairs listed from n = 0 upward.
    """
    z = complex(z)
    return {
        "name": name,
        "lambda": float(lam),
        "z": [z.real, z.imag],
        "N": state.n_top,
        "tail_mass": state.tail_mass,
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def state_from_dict(data: dict) -> tuple[FockState, str, float, complex]:
    amps = np.array([complex(re, im) for re, im in data["amplitudes"]])
    if amps.size != int(data["N"]) + 1:
        raise InvalidParam("N does not match the number of amplitudes")
    z = complex(*data["z"])
    # a dump is already normalized; keep its bits, only validate
    amps.setflags(write=False)
    state = FockState(amps, float(data.get("tail_mass", 0.0)))
    return state, data["name"], float(data["lambda"]), z


def dump_state(state: FockState, name: str, lam: float, z: complex, **kwargs) -> str:
    return json.dumps(state_to_dict(state, name, lam, z), **kwargs)


def load_state(text: str):
    return state_from_dict(json.loads(text))
