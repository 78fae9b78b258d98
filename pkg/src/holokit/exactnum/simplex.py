"""Exact feasibility of ``A x = b, x >= 0`` by phase-one simplex.

Arithmetic is over :class:`fractions.Fraction` and pivoting follows Bland's
rule, so the method terminates and every verdict is exact.  The result is
always checkable by substitution: a feasible verdict carries a witness
``x``, an infeasible one carries a Farkas vector ``y`` with ``y^T A <= 0``
and ``y^T b > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from holokit.exactnum.rational import parse_rational


class MalformedSystemError(ValueError):
    pass


@dataclass(frozen=True)
class LinearSystem:
    """Equality constraints ``A x = b`` over nonnegative variables."""

    A: tuple
    b: tuple
    n_vars: int

    def __init__(self, A: Sequence[Sequence], b: Sequence, n_vars: int | None = None):
        rows = [tuple(_coerce(v) for v in row) for row in A]
        rhs = tuple(_coerce(v) for v in b)
        if len(rows) != len(rhs):
            raise MalformedSystemError(f"{len(rows)} rows but {len(rhs)} right-hand sides")
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise MalformedSystemError(f"rows have different lengths: {sorted(widths)}")
        if n_vars is None:
            if not rows:
                raise MalformedSystemError("n_vars is required for a system without rows")
            n_vars = widths.pop()
        elif rows and widths.pop() != n_vars:
            raise MalformedSystemError("row length does not match n_vars")
        if n_vars < 0:
            raise MalformedSystemError("n_vars must be nonnegative")
        object.__setattr__(self, "A", tuple(rows))
        object.__setattr__(self, "b", rhs)
        object.__setattr__(self, "n_vars", n_vars)

    @property
    def n_rows(self) -> int:
        return len(self.A)


def _coerce(v) -> Fraction:
    try:
        return parse_rational(v)
    except (TypeError, ValueError) as exc:
        raise MalformedSystemError(str(exc)) from exc


@dataclass(frozen=True)
class Feasible:
    witness: tuple
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return True


@dataclass(frozen=True)
class Infeasible:
    certificate: tuple
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return False


def check_witness(system: LinearSystem, x: Sequence) -> bool:
    if len(x) != system.n_vars or any(v < 0 for v in x):
        return False
    return all(sum(a * v for a, v in zip(row, x)) == rhs for row, rhs in zip(system.A, system.b))


def check_farkas(system: LinearSystem, y: Sequence) -> bool:
    """True iff ``y`` proves infeasibility: ``y^T A <= 0`` and ``y^T b > 0``."""
    if len(y) != system.n_rows:
        return False
    for j in range(system.n_vars):
        if sum(yi * row[j] for yi, row in zip(y, system.A)) > 0:
            return False
    return sum(yi * bi for yi, bi in zip(y, system.b)) > 0


def lp_feasible(system: LinearSystem) -> Feasible | Infeasible:
    if not isinstance(system, LinearSystem):
        raise MalformedSystemError("lp_feasible expects a LinearSystem")
    n, m = system.n_vars, system.n_rows

    # rows with negative rhs are negated so the artificial basis starts feasible
    signs = [(-1 if bi < 0 else 1) for bi in system.b]
    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    for i, (row, bi) in enumerate(zip(system.A, system.b)):
        s = signs[i]
        r = {j: s * a for j, a in enumerate(row) if a}
        r[n + i] = Fraction(1)
        rows.append(r)
        rhs.append(s * bi)
    basis = [n + i for i in range(m)]

    # reduced costs of min sum(artificials); artificial columns start at 0
    cost: dict[int, Fraction] = {}
    for r in rows:
        for j, a in r.items():
            if j < n:
                cost[j] = cost.get(j, Fraction(0)) - a
    cost = {j: c for j, c in cost.items() if c}

    pivots = 0
    while True:
        entering = min((j for j, c in cost.items() if c < 0), default=None)
        if entering is None:
            break
        leave = None
        best = None
        for i, r in enumerate(rows):
            a = r.get(entering)
            if a is None or a <= 0:
                continue
            ratio = rhs[i] / a
            if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                best, leave = ratio, i
        if leave is None:
            # phase one is bounded below by zero, so this cannot happen
            raise AssertionError("unbounded phase-one problem")
        _pivot(rows, rhs, cost, leave, entering)
        basis[leave] = entering
        pivots += 1

    value = sum((rhs[i] for i in range(m) if basis[i] >= n), Fraction(0))
    if value > 0:
        # y_i = 1 - reduced cost of artificial i, then undo the row negation
        y = tuple(signs[i] * (1 - cost.get(n + i, Fraction(0))) for i in range(m))
        return Infeasible(y, pivots)
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = rhs[i]
    return Feasible(tuple(x), pivots)


def _pivot(rows, rhs, cost, r, j):
    prow = rows[r]
    p = prow[j]
    if p != 1:
        for k in prow:
            prow[k] /= p
        rhs[r] /= p
    for i, row in enumerate(rows):
        if i == r:
            continue
        f = row.get(j)
        if f is None:
            continue
        _axpy(row, prow, f)
        rhs[i] -= f * rhs[r]
    f = cost.get(j)
    if f is not None:
        _axpy(cost, prow, f)


def _axpy(row, prow, f):
    """row -= f * prow, dropping entries that cancel."""
    for k, v in prow.items():
        nv = row.get(k, 0) - f * v
        if nv:
            row[k] = nv
        else:
            row.pop(k, None)
