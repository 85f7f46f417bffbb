"""Construction of f-deformed intelligent states.

The states solve ``[(1 - lam) A^dag + (1 + lam) A] |psi> = 2 z |psi>`` for real
``lam`` and complex ``z``. Three families are normalizable:

* case (i), ``lam = 1``: nonlinear coherent states,
  ``c_n ~ z^n / sqrt(n! [f(n)]!^2)``;
* case (iii), ``z = 0``: only even photon numbers, built from the ratio
  ``c_2n / c_2n-2 = r sqrt((2n-1)/(2n)) f(2n-1)/f(2n)`` with
  ``r = (lam - 1)/(lam + 1)``;
* case (iv), general ``lam`` and ``z != 0``: a log-space prefactor times an
  alternating sum over the nested-chain function S(n, h).

``lam = -1`` with ``z != 0`` has no solution. :func:`recursion_oracle` builds
the same vectors from the three-term recursion of the eigenvalue equation and
is kept as an independent cross-check; it is not the production path.

Every generator here returns unnormalized amplitudes rescaled so that the
largest magnitude is one. Normalization happens in :class:`FockState`.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import (
    CaseTwoNoSolution,
    DivergentSeries,
    IndexOutOfRange,
    InvalidParam,
    NumericallySingular,
    OutsideConvergenceDisc,
    TruncationNotConverged,
)
from .fock import FockState
from .nonlinearity import NonlinearityFunction

__all__ = [
    "CaseTag",
    "TruncationPolicy",
    "IntelligentStateRequest",
    "resolve_case",
    "build",
    "nonlinear_coherent",
    "intelligent_zero_z",
    "intelligent_general",
    "recursion_oracle",
    "coherent_amplitudes",
    "zero_z_amplitudes",
    "general_amplitudes",
    "recursion_amplitudes",
    "s_function",
    "s_table",
    "residual_check",
    "coherent_normalization",
    "zero_z_c0",
    "general_c0",
    "tail_estimate",
]

SINGULAR_TOL = 1e-6
START_DIM = 32
TAIL_WINDOW = 8
# extra decimal digits carried by the extended-precision bracket evaluation
GUARD_DIGITS = 20
# relative magnitude below which amplitudes are not resolved individually
RESOLVE_FLOOR = 1e-25


class CaseTag(str, enum.Enum):
    CASE_I = "i"
    CASE_III = "iii"
    CASE_IV = "iv"


@dataclass(frozen=True)
class TruncationPolicy:
    """Tail budget and hard dimension cap for adaptive truncation."""

    epsilon_tail: float = 1e-12
    n_max: int = 512

    def __post_init__(self):
        if not (0.0 < self.epsilon_tail < 1.0):
            raise InvalidParam("epsilon_tail must lie in (0, 1)")
        if int(self.n_max) != self.n_max or self.n_max < 4:
            raise InvalidParam("n_max must be an integer >= 4")


def resolve_case(lam: float, z: complex) -> CaseTag:
    """Pick the construction family for ``(lam, z)``.

    ``lam = 1, z = 0`` resolves to case (iii), whose result is the vacuum.
    """
    lam = float(lam)
    z = complex(z)
    if lam == -1.0 and z != 0:
        raise CaseTwoNoSolution(
            "lambda = -1 with z != 0 is the eigenproblem of A^dagger, "
            "which has no normalizable solution"
        )
    if abs(1.0 + lam) < SINGULAR_TOL:
        raise NumericallySingular(f"|1 + lambda| = {abs(1.0 + lam):.3g} is too small")
    if z == 0:
        return CaseTag.CASE_III
    if lam == 1.0:
        return CaseTag.CASE_I
    return CaseTag.CASE_IV


@dataclass(frozen=True)
class IntelligentStateRequest:
    """Everything :func:`build` needs, with the case resolved up front.

    ``case`` may be ``"auto"`` or a forced :class:`CaseTag` (or its string
    value); forcing lets callers cross-compare construction paths, for
    example case (iv) at ``lam = 1`` against case (i).
    """

    f: NonlinearityFunction
    lam: float
    z: complex
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)
    case: str = "auto"
    case_tag: CaseTag = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "z", complex(self.z))
        tag = resolve_case(self.lam, self.z)
        if self.case != "auto":
            tag = _forced_case(self.case, self.lam, self.z)
        if tag is CaseTag.CASE_I and abs(self.z) >= self.f.convergence_radius:
            raise OutsideConvergenceDisc(
                f"{self.f.name}: |z| = {abs(self.z):g} is outside the disc of "
                f"radius {self.f.convergence_radius:g}"
            )
        object.__setattr__(self, "case_tag", tag)


def _forced_case(case, lam: float, z: complex) -> CaseTag:
    try:
        tag = CaseTag(case)
    except ValueError:
        raise InvalidParam(f"unknown case {case!r}") from None
    if tag is CaseTag.CASE_I and lam != 1.0:
        raise InvalidParam("case (i) requires lambda = 1")
    if tag is CaseTag.CASE_III and z != 0:
        raise InvalidParam("case (iii) requires z = 0")
    if tag is CaseTag.CASE_IV and z == 0:
        raise InvalidParam("case (iv) requires z != 0")
    return tag


# ---------------------------------------------------------------------------
# amplitude generators (unnormalized, max |c_n| = 1)


def _from_log(logmag: np.ndarray, phase: np.ndarray | None = None) -> np.ndarray:
    shift = np.max(logmag)
    mag = np.exp(logmag - shift)
    if phase is None:
        return mag.astype(complex)
    return mag * np.exp(1j * phase)


def coherent_amplitudes(f: NonlinearityFunction, z: complex, dim: int) -> np.ndarray:
    """Case (i): ``c_n = z^n / sqrt([n f^2(n)]!)`` for n < dim."""
    z = complex(z)
    out = np.zeros(dim, dtype=complex)
    if z == 0:
        out[0] = 1.0
        return out
    n = np.arange(dim)
    logf = np.concatenate(([0.0], np.cumsum(np.log(f.values(dim - 1)))))
    lgam = np.array([math.lgamma(k + 1) for k in range(dim)])
    logmag = n * math.log(abs(z)) - 0.5 * lgam - logf
    return _from_log(logmag, n * np.angle(z))


def zero_z_amplitudes(f: NonlinearityFunction, lam: float, dim: int) -> np.ndarray:
    """Case (iii): even amplitudes from the incremental ratio, odd ones zero.

    The empty-product conventions make the n = 0 term equal to c_0.
    """
    r = (lam - 1.0) / (lam + 1.0)
    out = np.zeros(dim, dtype=complex)
    half = (dim - 1) // 2
    if r == 0.0 or half == 0:
        out[0] = 1.0
        return out
    fv = f.values(2 * half)
    k = np.arange(1, half + 1)
    step = (
        math.log(abs(r))
        + 0.5 * (np.log(2 * k - 1.0) - np.log(2.0 * k))
        + np.log(fv[2 * k - 2]) - np.log(fv[2 * k - 1])
    )
    logmag = np.concatenate(([0.0], np.cumsum(step)))
    even = _from_log(logmag).real
    if r < 0:
        even[1::2] *= -1.0
    out[0 : 2 * half + 1 : 2] = even
    return out


def s_table(f: NonlinearityFunction, n_stop: int) -> np.ndarray:
    """Table ``S[n, h]`` for ``0 <= n <= n_stop``, ``0 <= h <= n_stop // 2``.

    Two-term recurrence ``S(n,h) = S(n-1,h) + (n-1) f^2(n-1) S(n-2,h-1)``
    with ``S(n, 0) = 1`` and ``S(n, h) = 0`` for ``n < 2h``. Entries are
    plain doubles and are exact while they stay integers below 2^53.
    """
    h_stop = n_stop // 2
    S = np.zeros((n_stop + 1, h_stop + 1))
    S[:, 0] = 1.0
    if n_stop < 2:
        return S
    fv = f.values(n_stop - 1)
    e = np.arange(1, n_stop) * fv * fv
    for n in range(2, n_stop + 1):
        S[n, 1:] = S[n - 1, 1:] + e[n - 2] * S[n - 2, :-1]
    return S


def s_function(f: NonlinearityFunction, n: int, h: int) -> float:
    """Nested chain sum S(n, h) over ``1 <= m_1, m_{i+1} >= m_i + 2, m_h <= n-1``
    of ``prod m_i f^2(m_i)``."""
    if n < 0 or h < 0 or h > n // 2:
        raise IndexOutOfRange(f"S(n, h) needs 0 <= h <= n // 2, got n={n}, h={h}")
    return float(s_table(f, n)[n, h])


def _log_s_table(e: np.ndarray, n_stop: int) -> np.ndarray:
    h_stop = n_stop // 2
    L = np.full((n_stop + 1, h_stop + 1), -np.inf)
    L[:, 0] = 0.0
    loge = np.log(e)
    for n in range(2, n_stop + 1):
        L[n, 1:] = np.logaddexp(L[n - 1, 1:], loge[n - 2] + L[n - 2, :-1])
    return L


def general_amplitudes(
    f: NonlinearityFunction, lam: float, z: complex, dim: int
) -> np.ndarray:
    """Case (iv) closed form.

    ``c_n = w^n / (sqrt(n!) [f(n)]!) * sum_h v^h S(n, h)`` with
    ``w = 2z/(1+lam)``, ``v = -(1-lam^2)/(2z)^2`` and h running from 0 to
    n // 2. The prefactor and S are combined in log space. The bracket is an
    alternating sum whenever v > 0 in the real case and can cancel by many
    orders of magnitude; a first double-precision pass measures the loss and,
    when it is significant, the bracket is re-evaluated with mpmath at a
    precision chosen to cover it.
    """
    z = complex(z)
    lam = float(lam)
    if z == 0:
        raise InvalidParam("case (iv) requires z != 0")
    n_top = dim - 1
    # w = 2z/(1+lam), v = -(1-lam^2)/(2z)^2 kept as (log modulus, phase):
    # for tiny |z| the plain doubles underflow or overflow
    log_2z = math.log(2.0) + math.log(abs(z))
    log_w = log_2z - math.log(abs(1.0 + lam))
    arg_w = cmath.phase(z) + (math.pi if lam < -1.0 else 0.0)
    fv = f.values(n_top)
    e = np.arange(1, n_top + 1) * fv * fv

    n = np.arange(dim)
    logf = np.concatenate(([0.0], np.cumsum(np.log(fv))))
    lgam = np.array([math.lgamma(k + 1) for k in range(dim)])
    log_pref = n * log_w - 0.5 * lgam - logf
    if lam * lam == 1.0:
        return _from_log(log_pref, n * arg_w)
    log_v = math.log(abs(1.0 - lam * lam)) - 2.0 * log_2z
    arg_v = (math.pi if lam * lam < 1.0 else 0.0) - 2.0 * cmath.phase(z)

    L = _log_s_table(e, n_top)
    h = np.arange(L.shape[1])
    logmag = log_pref[:, None] + h[None, :] * log_v + L
    phase = n[:, None] * arg_w + h[None, :] * arg_v
    shift = np.max(logmag)
    mag = np.exp(logmag - shift)
    terms = mag * np.exp(1j * phase)
    c = np.array(
        [complex(math.fsum(row.real), math.fsum(row.imag)) for row in terms]
    )
    scale = mag.sum(axis=1)
    cmax = np.max(np.abs(c))
    floor = np.maximum(np.abs(c), RESOLVE_FLOOR * cmax)
    loss = float(np.max(scale / floor))
    if loss > 1e3:
        dps = GUARD_DIGITS + int(math.ceil(math.log10(loss)))
        c = _general_amplitudes_mp(fv, e, lam, z, dim, dps)
    return c / np.max(np.abs(c))


def _general_amplitudes_mp(fv, e, lam, z, dim, dps) -> np.ndarray:
    with mpmath.workdps(dps):
        lam = mpmath.mpf(lam)
        z = mpmath.mpc(z)
        w = 2 * z / (1 + lam)
        v = -(1 - lam * lam) / (2 * z) ** 2
        e = [mpmath.mpf(float(x)) for x in e]
        h_stop = (dim - 1) // 2
        zero = mpmath.mpf(0)
        rows = [[mpmath.mpf(1)] + [zero] * h_stop, [mpmath.mpf(1)] + [zero] * h_stop]
        vpow = [mpmath.mpf(1)]
        for _ in range(h_stop):
            vpow.append(vpow[-1] * v)
        pref = mpmath.mpf(1)
        out = [mpmath.mpc(1)]
        for n in range(1, dim):
            pref = pref * w / (mpmath.sqrt(n) * mpmath.mpf(float(fv[n - 1])))
            if n >= 2:
                prev, prev2 = rows[n - 1], rows[n - 2]
                en = e[n - 2]
                row = [mpmath.mpf(1)] + [
                    prev[k] + en * prev2[k - 1] for k in range(1, h_stop + 1)
                ]
                rows.append(row)
            row = rows[n]
            bracket = mpmath.fsum(vpow[k] * row[k] for k in range(n // 2 + 1))
            out.append(pref * bracket)
        top = max(abs(x) for x in out)
        return np.array([complex(x / top) for x in out])


def recursion_amplitudes(
    f: NonlinearityFunction, lam: float, z: complex, dim: int
) -> np.ndarray:
    """Forward three-term recursion of the eigenvalue equation, ``c_0 = 1``.

    ``c_{n+1} = [2z c_n - (1-lam) sqrt(n) f(n) c_{n-1}] / [(1+lam) sqrt(n+1) f(n+1)]``
    """
    lam = float(lam)
    z = complex(z)
    if abs(1.0 + lam) < SINGULAR_TOL:
        raise NumericallySingular("recursion denominator vanishes at lambda = -1")
    fv = f.values(dim - 1)
    g = np.concatenate(([0.0], np.sqrt(np.arange(1, dim)) * fv))
    c = np.zeros(dim, dtype=complex)
    c[0] = 1.0
    for n in range(dim - 1):
        back = (1.0 - lam) * g[n] * c[n - 1] if n > 0 else 0.0
        c[n + 1] = (2.0 * z * c[n] - back) / ((1.0 + lam) * g[n + 1])
        if abs(c[n + 1]) > 1e200:
            c[: n + 2] *= 1e-200
    return c / np.max(np.abs(c))


# ---------------------------------------------------------------------------
# truncation


def tail_estimate(p: np.ndarray) -> float:
    """Probability beyond the last entry, extrapolated geometrically.

    The last two pairs of entries give a decay ratio per two steps (pairs keep
    parity-alternating sequences honest). Returns ``inf`` when they do not
    decay.
    """
    if p.size < 4:
        return math.inf
    a = p[-1] + p[-2]
    b = p[-3] + p[-4]
    if a == 0.0:
        return 0.0
    if b == 0.0:
        return math.inf
    rho = a / b
    if rho >= 1.0:
        return math.inf
    return float(a * rho / (1.0 - rho))


def _dimension_cap(f: NonlinearityFunction, policy: TruncationPolicy) -> tuple[int, bool]:
    # dim <= max_valid_n keeps f(N + 1) available to <A A^dag>
    if f.max_valid_n is not None and f.max_valid_n < policy.n_max:
        return f.max_valid_n, True
    return policy.n_max, False


def _truncate(generate, f, policy: TruncationPolicy, divergent: bool = False) -> FockState:
    """Grow the dimension (x2 from 32) until the tail criterion holds.

    Converged means: the extrapolated tail is below ``epsilon_tail`` and so is
    the mass in the last ``TAIL_WINDOW`` entries. At the validity wall of f
    the window cannot be pushed further out and only the extrapolation is
    required.
    """
    cap, at_f_wall = _dimension_cap(f, policy)
    if cap < 4:
        raise TruncationNotConverged(f"{f.name}: only {cap} valid levels")
    eps = policy.epsilon_tail
    dim = min(START_DIM, cap)
    while True:
        c = generate(dim)
        p = np.abs(c) ** 2
        total = math.fsum(p)
        if not math.isfinite(total):
            break
        window = math.fsum(p[-TAIL_WINDOW:]) / total
        tail = tail_estimate(p) / total
        wall = dim == cap and at_f_wall
        if tail < eps and (window < eps or wall):
            return FockState.from_amplitudes(c, tail_mass=tail)
        if dim == cap:
            break
        dim = min(2 * dim, cap)
    cls = DivergentSeries if divergent else TruncationNotConverged
    raise cls(
        f"{f.name}: tail mass above {eps:g} at dimension {dim} "
        f"(cap {cap}{', validity limit of f' if at_f_wall else ''})"
    )


def _fixed(generate, f, dim: int) -> FockState:
    c = generate(dim)
    p = np.abs(c) ** 2
    return FockState.from_amplitudes(c, tail_mass=tail_estimate(p) / math.fsum(p))


def _policy(truncation):
    return TruncationPolicy() if truncation is None else truncation


def nonlinear_coherent(
    f: NonlinearityFunction, z: complex, truncation: TruncationPolicy | None = None,
    dim: int | None = None,
) -> FockState:
    """Case (i) state, the eigenstate of A with eigenvalue z.

    Pass ``dim`` to fix the truncation instead of searching for it.
    """
    z = complex(z)
    if abs(z) >= f.convergence_radius:
        raise OutsideConvergenceDisc(
            f"{f.name}: |z| = {abs(z):g} outside disc of radius {f.convergence_radius:g}"
        )

    def gen(d):
        return coherent_amplitudes(f, z, d)

    if dim is not None:
        return _fixed(gen, f, dim)
    return _truncate(gen, f, _policy(truncation))


def intelligent_zero_z(
    f: NonlinearityFunction, lam: float, truncation: TruncationPolicy | None = None,
    dim: int | None = None,
) -> FockState:
    """Case (iii) state (z = 0); odd amplitudes are exactly zero."""
    lam = float(lam)
    resolve_case(lam, 0)

    def gen(d):
        return zero_z_amplitudes(f, lam, d)

    if dim is not None:
        return _fixed(gen, f, dim)
    divergent = abs((lam - 1.0) / (lam + 1.0)) >= 1.0
    return _truncate(gen, f, _policy(truncation), divergent=divergent)


def intelligent_general(
    f: NonlinearityFunction, lam: float, z: complex,
    truncation: TruncationPolicy | None = None, dim: int | None = None,
) -> FockState:
    """Case (iv) state from the closed form."""
    lam = float(lam)
    z = complex(z)
    if z == 0:
        raise InvalidParam("case (iv) requires z != 0")
    resolve_case(lam, z)

    def gen(d):
        return general_amplitudes(f, lam, z, d)

    if dim is not None:
        return _fixed(gen, f, dim)
    return _truncate(gen, f, _policy(truncation))


def recursion_oracle(
    f: NonlinearityFunction, lam: float, z: complex,
    truncation: TruncationPolicy | None = None, dim: int | None = None,
) -> FockState:
    """Same state as :func:`build`, from the three-term recursion."""
    lam = float(lam)
    z = complex(z)
    resolve_case(lam, z)

    def gen(d):
        return recursion_amplitudes(f, lam, z, d)

    if dim is not None:
        return _fixed(gen, f, dim)
    divergent = z == 0 and abs((lam - 1.0) / (lam + 1.0)) >= 1.0
    return _truncate(gen, f, _policy(truncation), divergent=divergent)


def build(request: IntelligentStateRequest) -> FockState:
    """Construct the state for a resolved request."""
    f, lam, z, pol = request.f, request.lam, request.z, request.truncation
    tag = request.case_tag
    if tag is CaseTag.CASE_I:
        return nonlinear_coherent(f, z, pol)
    if tag is CaseTag.CASE_III:
        return intelligent_zero_z(f, lam, pol)
    return intelligent_general(f, lam, z, pol)


# ---------------------------------------------------------------------------
# certificates


def residual_check(state: FockState, f: NonlinearityFunction, lam: float, z: complex) -> float:
    """Norm of ``(X + i lam P)|psi> - sqrt(2) z |psi>``.

    Uses the tridiagonal action of ``[(1-lam) A^dag + (1+lam) A - 2z] / sqrt(2)``
    on rows 0 .. N-1. Row N needs c_{N+1} and carries only truncation error,
    so it is left out.
    """
    c = state.amplitudes
    n_top = state.n_top
    if n_top == 0:
        return abs(2.0 * complex(z) * c[0]) / math.sqrt(2.0)
    fv = f.values(n_top)
    g = np.concatenate(([0.0], np.sqrt(np.arange(1, n_top + 1)) * fv))
    rows = (1.0 + lam) * g[1:] * c[1:] - 2.0 * complex(z) * c[:-1]
    rows[1:] += (1.0 - lam) * g[1:-1] * c[:-2]
    return math.sqrt(math.fsum(np.abs(rows) ** 2)) / math.sqrt(2.0)


def coherent_normalization(
    f: NonlinearityFunction, z: complex, rel_tol: float = 1e-17, max_terms: int = 100_000
) -> float:
    """``N(|z|^2) = sum_n |z|^{2n} / [n f^2(n)]!``, summed term by term."""
    x = abs(complex(z)) ** 2
    if x == 0:
        return 1.0
    limit = max_terms if f.max_valid_n is None else min(max_terms, f.max_valid_n)
    terms = [1.0]
    log_term = 0.0
    for n in range(1, limit + 1):
        fn = float(f.evaluator(np.array([n]))[0])
        log_term += math.log(x) - math.log(n * fn * fn)
        t = math.exp(log_term)
        terms.append(t)
        if t < rel_tol * math.fsum(terms) and n > 2 and terms[-2] > t:
            return math.fsum(terms)
    raise TruncationNotConverged(f"{f.name}: normalization series did not converge")


def zero_z_c0(
    f: NonlinearityFunction, lam: float, rel_tol: float = 1e-17, max_terms: int = 100_000
) -> float:
    """c_0 of the case (iii) state from its normalization series."""
    r = (lam - 1.0) / (lam + 1.0)
    if abs(r) >= 1.0:
        raise DivergentSeries("case (iii) normalization series diverges for |r| >= 1")
    limit = max_terms if f.max_valid_n is None else min(max_terms, f.max_valid_n // 2)
    terms = [1.0]
    log_term = 0.0
    for k in range(1, limit + 1):
        if r == 0:
            break
        f_odd = float(f.evaluator(np.array([2 * k - 1]))[0])
        f_even = float(f.evaluator(np.array([2 * k]))[0])
        log_term += (
            2.0 * math.log(abs(r)) + math.log((2 * k - 1) / (2 * k))
            + 2.0 * (math.log(f_odd) - math.log(f_even))
        )
        t = math.exp(log_term)
        terms.append(t)
        if t < rel_tol * math.fsum(terms):
            break
    return 1.0 / math.sqrt(math.fsum(terms))


def general_c0(
    f: NonlinearityFunction, lam: float, z: float, n_terms: int, dps: int = 60
) -> float:
    """c_0 of the case (iv) state from its normalization series, real z only.

    The series is evaluated term by term with mpmath, independently of
    :func:`general_amplitudes`; ``n_terms`` sets where it is cut.
    """
    if complex(z).imag != 0:
        raise InvalidParam("the case (iv) normalization series is used for real z only")
    z = float(complex(z).real)
    fv = f.values(n_terms)
    with mpmath.workdps(dps):
        lam_m = mpmath.mpf(lam)
        ratio = (1 - lam_m ** 2) / (2 * mpmath.mpf(z)) ** 2
        w2 = (2 * mpmath.mpf(z) / (lam_m + 1)) ** 2
        e = [k * mpmath.mpf(float(fv[k - 1])) ** 2 for k in range(1, n_terms + 1)]
        memo = {}

        def chain(n, h):
            # split on whether the last index of the chain equals n - 1
            if h == 0:
                return mpmath.mpf(1)
            if n < 2 * h:
                return mpmath.mpf(0)
            if (n, h) not in memo:
                memo[n, h] = chain(n - 1, h) + e[n - 2] * chain(n - 2, h - 1)
            return memo[n, h]

        total = mpmath.mpf(0)
        pref = mpmath.mpf(1)  # |w|^{2n} / (n! [f(n)]!^2)
        for n in range(n_terms + 1):
            if n > 0:
                pref = pref * w2 / e[n - 1]
            bracket = mpmath.mpf(1)
            for h in range(1, n // 2 + 1):
                bracket += (-1) ** h * ratio ** h * chain(n, h)
            total += pref * bracket ** 2
        return float(1 / mpmath.sqrt(total))
