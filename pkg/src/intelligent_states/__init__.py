"""Intelligent states of f-deformed oscillators in a truncated Fock basis.

Build a state with :func:`build` from an :class:`IntelligentStateRequest`,
then inspect it with :func:`full_report`.
"""

from . import nonlinearity
from .errors import *  # noqa: F401,F403
from .errors import __all__ as _error_names
from .fock import FockState, deformed_quadrature_stats, dump_state, load_state, moments
from .nonclassicality import StatsReport, full_report, mandel_q, quadrature_report
from .nonlinearity import NonlinearityFunction, from_name
from .states import (
    CaseTag,
    IntelligentStateRequest,
    TruncationPolicy,
    build,
    recursion_oracle,
    residual_check,
)

__version__ = "0.1.0"

__all__ = [
    "nonlinearity",
    "NonlinearityFunction",
    "from_name",
    "FockState",
    "moments",
    "deformed_quadrature_stats",
    "dump_state",
    "load_state",
    "CaseTag",
    "TruncationPolicy",
    "IntelligentStateRequest",
    "build",
    "recursion_oracle",
    "residual_check",
    "StatsReport",
    "full_report",
    "mandel_q",
    "quadrature_report",
    *_error_names,
]
