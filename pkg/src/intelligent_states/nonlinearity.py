"""Nonlinearity functions f(n) of deformed ladder operators.

A :class:`NonlinearityFunction` wraps a vectorized evaluator together with
two pieces of metadata that every consumer must respect:

* ``max_valid_n``: the largest n for which f(n) is finite, nonzero and of
  stable sign (``None`` when unbounded).
* ``convergence_radius``: radius of the disc in |z| on which the nonlinear
  coherent state series converges (``math.inf`` when unbounded).

Factorial-like products are always handled in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (
    InvalidParam,
    NonPositiveSpectrum,
    OutOfValidRange,
    SpectrumFileError,
    ZeroCoefficient,
)

__all__ = [
    "NonlinearityFunction",
    "eval_f",
    "laguerre",
    "laguerre_sequence",
    "identity",
    "trapped_ion",
    "harmonious",
    "hydrogen",
    "penson_solomon",
    "dual",
    "f_from_spectrum",
    "f_from_coefficients",
    "read_spectrum_file",
    "log_f_factorial",
    "log_spectrum_factorial",
    "from_name",
    "CATALOG",
]

# Largest order scanned when locating the trapped-ion pole.
TRAPPED_ION_SCAN_LIMIT = 4096


@dataclass(frozen=True)
class NonlinearityFunction:
    """Named real nonlinearity function f(n), n >= 1.

    Parameters
    ----------
    name : str
        Short identifier, e.g. ``"hydrogen"`` or ``"dual:harmonious"``.
    evaluator : callable
        Maps an integer array of n >= 1 to the float array f(n). Callers go
        through :meth:`values` or :func:`eval_f`, which enforce the range.
    params : mapping
        Real parameters (``eta``, ``q``, ...).
    max_valid_n : int or None
        Largest admissible n; ``None`` means unbounded.
    convergence_radius : float
        Radius of convergence of the case (i) normalization series.
    base : NonlinearityFunction, optional
        For a dual, the function it was built from.
    """

    name: str
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    params: Mapping[str, float] = field(default_factory=dict)
    max_valid_n: int | None = None
    convergence_radius: float = math.inf
    base: NonlinearityFunction | None = field(default=None, repr=False, compare=False)

    def __call__(self, n):
        return eval_f(self, n)

    def check_range(self, n_stop: int) -> None:
        if self.max_valid_n is not None and n_stop > self.max_valid_n:
            raise OutOfValidRange(
                f"{self.name}: f(n) requested up to n={n_stop}, "
                f"valid only for n <= {self.max_valid_n}"
            )

    def values(self, n_stop: int) -> np.ndarray:
        """Return ``f(1), ..., f(n_stop)`` as a float array of length n_stop."""
        if n_stop <= 0:
            return np.empty(0)
        self.check_range(n_stop)
        n = np.arange(1, n_stop + 1)
        return np.asarray(self.evaluator(n), dtype=float)

    @property
    def bounded(self) -> bool:
        return self.max_valid_n is not None


def eval_f(f: NonlinearityFunction, n: int) -> float:
    """Evaluate f(n) for a single positive integer n."""
    n = int(n)
    if n < 1:
        raise OutOfValidRange(f"{f.name}: f(n) is defined for n >= 1, got n={n}")
    f.check_range(n)
    return float(f.evaluator(np.array([n]))[0])


# ---------------------------------------------------------------------------
# Laguerre polynomials


def laguerre(n: int, k: int, x: float) -> float:
    """Associated Laguerre polynomial L_n^k(x) by upward recurrence.

    ``(m+1) L_{m+1} = (2m+1+k-x) L_m - (m+k) L_{m-1}`` seeded with
    ``L_0 = 1`` and ``L_1 = 1+k-x``.
    """
    if n < 0 or k < 0:
        raise InvalidParam("laguerre: n and k must be nonnegative")
    prev, cur = 1.0, 1.0 + k - x
    if n == 0:
        return prev
    for m in range(1, n):
        prev, cur = cur, ((2 * m + 1 + k - x) * cur - (m + k) * prev) / (m + 1)
    return cur


def laguerre_sequence(n_stop: int, k: int, x: float) -> np.ndarray:
    """Return ``[L_0^k(x), ..., L_{n_stop}^k(x)]`` from one recurrence pass."""
    out = np.empty(n_stop + 1)
    out[0] = 1.0
    if n_stop >= 1:
        out[1] = 1.0 + k - x
    for m in range(1, n_stop):
        out[m + 1] = ((2 * m + 1 + k - x) * out[m] - (m + k) * out[m - 1]) / (m + 1)
    return out


# ---------------------------------------------------------------------------
# catalog


def identity() -> NonlinearityFunction:
    """f(n) = 1, the undeformed oscillator."""
    return NonlinearityFunction("identity", lambda n: np.ones(np.shape(n)))


def harmonious() -> NonlinearityFunction:
    """f(n) = 1/sqrt(n); the lowering operator is the Susskind-Glogower phase."""
    return NonlinearityFunction(
        "harmonious", lambda n: 1.0 / np.sqrt(n), convergence_radius=1.0
    )


def hydrogen() -> NonlinearityFunction:
    """f(n) = sqrt(n+2)/(n+1), induced by the spectrum e_n = 1 - 1/(n+1)^2."""
    return NonlinearityFunction(
        "hydrogen",
        lambda n: np.sqrt(np.asarray(n, dtype=float) + 2.0) / (np.asarray(n) + 1.0),
        convergence_radius=1.0,
    )


def trapped_ion(eta: float) -> NonlinearityFunction:
    """Center-of-mass motion of a trapped ion with Lamb-Dicke parameter eta.

    ``f(n) = L_n^1(eta^2) / ((n+1) L_n^0(eta^2))``.

    Both Laguerre factors eventually change sign as n grows. The first n at
    which either is nonpositive is located here, and ``max_valid_n`` is set one
    below it; the region past the pole is refused. If no sign change occurs up
    to ``TRAPPED_ION_SCAN_LIMIT`` (eta = 0 or tiny eta), that limit is used.
    """
    eta = float(eta)
    if not math.isfinite(eta) or eta < 0:
        raise InvalidParam(f"trapped-ion: eta must be >= 0, got {eta}")
    x = eta * eta
    l0 = laguerre_sequence(TRAPPED_ION_SCAN_LIMIT + 1, 0, x)
    l1 = laguerre_sequence(TRAPPED_ION_SCAN_LIMIT + 1, 1, x)
    bad = np.flatnonzero((l0[1:] <= 0) | (l1[1:] <= 0))
    max_valid = int(bad[0]) if bad.size else TRAPPED_ION_SCAN_LIMIT
    n_all = np.arange(max_valid + 1)
    table = l1[: max_valid + 1] / ((n_all + 1) * l0[: max_valid + 1])

    def evaluator(n):
        return table[np.asarray(n)]

    return NonlinearityFunction(
        "trapped-ion", evaluator, params={"eta": eta}, max_valid_n=max_valid
    )


def penson_solomon(q: float) -> NonlinearityFunction:
    """f(n) = q^(1-n) for 0 < q <= 1.

    ``max_valid_n`` keeps n f(n)^2 inside the double range.
    """
    q = float(q)
    if not (0.0 < q <= 1.0):
        raise InvalidParam(f"penson-solomon: q must lie in (0, 1], got {q}")
    if q == 1.0:
        max_valid = None
    else:
        # n f^2 = n q^(2-2n); leave headroom for the factor n
        max_valid = int(690.0 / (2.0 * -math.log(q)))
    return NonlinearityFunction(
        "penson-solomon",
        lambda n: q ** (1.0 - np.asarray(n, dtype=float)),
        params={"q": q},
        max_valid_n=max_valid,
    )


CATALOG: dict[str, Callable[..., NonlinearityFunction]] = {
    "identity": identity,
    "trapped-ion": trapped_ion,
    "harmonious": harmonious,
    "hydrogen": hydrogen,
    "penson-solomon": penson_solomon,
}


def _dual_radius(f: NonlinearityFunction) -> float:
    # R^2 = lim e_n; the dual has e_n -> n^2 / e_n
    if math.isfinite(f.convergence_radius):
        return math.inf
    if f.name == "penson-solomon" and f.params["q"] < 1.0:
        return 0.0
    return math.inf


def dual(f: NonlinearityFunction) -> NonlinearityFunction:
    """Return the dual function 1/f(n); the validity range is inherited.

    Dualizing a dual returns the original object unchanged.
    """
    if f.base is not None:
        return f.base
    base_eval = f.evaluator
    return NonlinearityFunction(
        "dual:" + f.name,
        lambda n: 1.0 / base_eval(n),
        params=dict(f.params),
        max_valid_n=f.max_valid_n,
        convergence_radius=_dual_radius(f),
        base=f,
    )


def f_from_spectrum(
    e: Sequence[float],
    source: str = "array",
    convergence_radius: float = math.inf,
) -> NonlinearityFunction:
    """Nonlinearity induced by a discrete spectrum via e_n = n f(n)^2.

    Parameters
    ----------
    e : sequence of float
        ``e[0]`` is e_1, ``e[1]`` is e_2, and so on. All entries must be
        positive.
    source : str
        Label used in the function name ``spectrum:<source>``.
    convergence_radius : float
        Declared disc radius; a finite spectrum cannot reveal it.
    """
    e = np.asarray(e, dtype=float)
    if e.ndim != 1 or e.size == 0:
        raise InvalidParam("spectrum must be a nonempty 1-d sequence")
    bad = np.flatnonzero(~(e > 0))
    if bad.size:
        raise NonPositiveSpectrum(
            f"spectrum entry e_{bad[0] + 1} = {e[bad[0]]!r} is not positive"
        )
    table = np.concatenate(([np.nan], np.sqrt(e / np.arange(1, e.size + 1))))
    return NonlinearityFunction(
        f"spectrum:{source}",
        lambda n: table[np.asarray(n)],
        max_valid_n=int(e.size),
        convergence_radius=convergence_radius,
    )


def f_from_coefficients(
    coefficients: Sequence[float], convergence_radius: float = math.inf
) -> NonlinearityFunction:
    """Recover f from the expansion coefficients C_n of a nonlinear coherent state.

    ``f(n) = C_{n-1} / (sqrt(n) C_n)``; ``coefficients[0]`` is C_0 (1 by
    convention, though only ratios matter).
    """
    c = np.asarray(coefficients, dtype=float)
    if c.ndim != 1 or c.size < 2:
        raise InvalidParam("need at least C_0 and C_1")
    zero = np.flatnonzero(c == 0)
    if zero.size:
        raise ZeroCoefficient(f"C_{zero[0]} is zero")
    n = np.arange(1, c.size)
    table = np.concatenate(([np.nan], c[:-1] / (np.sqrt(n) * c[1:])))
    return NonlinearityFunction(
        "coefficients",
        lambda k: table[np.asarray(k)],
        max_valid_n=int(c.size - 1),
        convergence_radius=convergence_radius,
    )


def read_spectrum_file(path: str | Path) -> np.ndarray:
    """Read a spectrum file: one positive decimal e_n per line, n = 1, 2, ...

    Blank, non-numeric and nonpositive lines are rejected with their line
    number.
    """
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                raise SpectrumFileError(f"{path}:{lineno}: blank line")
            try:
                value = float(text)
            except ValueError:
                raise SpectrumFileError(
                    f"{path}:{lineno}: not a number: {text!r}"
                ) from None
            if not (value > 0 and math.isfinite(value)):
                raise SpectrumFileError(
                    f"{path}:{lineno}: spectrum value must be positive, got {text}"
                )
            values.append(value)
    if not values:
        raise SpectrumFileError(f"{path}: empty spectrum file")
    return np.array(values)


def log_f_factorial(f: NonlinearityFunction, n: int) -> float:
    """ln [f(n)]! = sum_{k=1}^{n} ln f(k); zero for n = 0."""
    if n < 0:
        raise InvalidParam("n must be nonnegative")
    if n == 0:
        return 0.0
    return math.fsum(np.log(f.values(n)))


def log_spectrum_factorial(f: NonlinearityFunction, n: int) -> float:
    """ln [n f^2(n)]! = ln n! + 2 ln [f(n)]!."""
    return math.lgamma(n + 1) + 2.0 * log_f_factorial(f, n)


def from_name(name: str, eta: float | None = None, q: float | None = None) -> NonlinearityFunction:
    """Resolve a command-line style name.

    Accepts catalog names, ``dual:<name>`` and ``spectrum:<file>``.
    """
    if name.startswith("dual:"):
        return dual(from_name(name[len("dual:"):], eta=eta, q=q))
    if name.startswith("spectrum:"):
        path = name[len("spectrum:"):]
        return f_from_spectrum(read_spectrum_file(path), source=path)
    if name == "trapped-ion":
        if eta is None:
            raise InvalidParam("trapped-ion requires eta")
        return trapped_ion(eta)
    if name == "penson-solomon":
        if q is None:
            raise InvalidParam("penson-solomon requires q")
        return penson_solomon(q)
    try:
        return CATALOG[name]()
    except KeyError:
        raise InvalidParam(f"unknown nonlinearity {name!r}") from None
