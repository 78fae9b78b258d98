"""Exact arithmetic: rationals, the ring Z[sqrt2], and rational LP feasibility."""

from holokit.exactnum.quadint import QuadInt, dot, is_zero_vector
from holokit.exactnum.rational import Q, format_rational, parse_rational
from holokit.exactnum.simplex import (
    Feasible,
    Infeasible,
    LinearSystem,
    MalformedSystemError,
    check_farkas,
    check_witness,
    lp_feasible,
)

__all__ = [
    "Q",
    "QuadInt",
    "dot",
    "is_zero_vector",
    "parse_rational",
    "format_rational",
    "LinearSystem",
    "Feasible",
    "Infeasible",
    "MalformedSystemError",
    "lp_feasible",
    "check_witness",
    "check_farkas",
]
