"""Pairwise-comparison (PC) matrices with entries in a group.

Entries are stored for ``i < j`` only.  For a reciprocal matrix the lower
triangle is implied (``a_ji = a_ij^-1``, ``a_ii = 1``).  Non-reciprocal
matrices, which arise naturally from noisy evaluations, additionally keep an
independent lower triangle; every consistency analysis reads the upper
triangle as the canonical orientation and the disagreement with the lower
triangle is reported separately by :meth:`PCMatrix.reciprocity_defect`.
"""

from __future__ import annotations

import csv
import io
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from holokit import groups
from holokit.groups import AddReal, GroupElement, GroupMismatchError, PosReal
from holokit.holonomy import (
    DiscreteConnection,
    DisconnectedGraphError,
    Graph,
    spanning_tree,
)

log = logging.getLogger(__name__)

RECIPROCITY_TOL = 1e-9


class PCMatrixError(ValueError):
    pass


class PCMatrix:
    def __init__(
        self,
        n: int,
        entries: Mapping[tuple[int, int], GroupElement],
        group: str | None = None,
        labels: Sequence[str] | None = None,
        lower: Mapping[tuple[int, int], GroupElement] | None = None,
    ):
        if n < 1:
            raise PCMatrixError("a PC matrix needs at least one item")
        self.n = n
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        if len(self.labels) != n:
            raise PCMatrixError(f"{len(self.labels)} labels for {n} items")
        tags = {g.tag for g in entries.values()} | {g.tag for g in (lower or {}).values()}
        if len(tags) > 1:
            raise GroupMismatchError(f"mixed groups in one matrix: {sorted(tags)}")
        self.group = group or (tags.pop() if tags else "posreal")
        if tags and tags != {self.group}:
            raise GroupMismatchError(f"entries are {tags}, matrix is {self.group}")
        upper: dict[tuple[int, int], GroupElement] = {}
        for (i, j), g in entries.items():
            if not (0 <= i < n and 0 <= j < n) or i == j:
                raise PCMatrixError(f"bad entry position ({i}, {j})")
            key = (min(i, j), max(i, j))
            if key in upper:
                raise PCMatrixError(f"entry {key} given twice")
            upper[key] = g if i < j else g.inverse()
        self._upper = upper
        low: dict[tuple[int, int], GroupElement] = {}
        for (i, j), g in (lower or {}).items():
            if not i > j:
                raise PCMatrixError(f"lower entries need i > j, got ({i}, {j})")
            if (j, i) not in upper:
                raise PCMatrixError(f"lower entry ({i}, {j}) has no upper partner")
            low[(i, j)] = g
        self._lower = low

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows, group: str = "posreal", labels=None, reciprocal: bool = True):
        """Build from a full square matrix; ``None`` or ``0`` marks a hole."""
        n = len(rows)
        cls_ = {"posreal": PosReal, "addreal": AddReal}.get(group)
        entries, lower = {}, {}
        for i in range(n):
            if len(rows[i]) != n:
                raise PCMatrixError("matrix is not square")
            for j in range(i + 1, n):
                v = rows[i][j]
                if v is None or (group == "posreal" and not isinstance(v, GroupElement) and v in (0, "0")):
                    continue
                g = v if isinstance(v, GroupElement) else cls_(v)
                entries[(i, j)] = g
                w = rows[j][i]
                if w is None:
                    continue
                gw = w if isinstance(w, GroupElement) else cls_(w)
                defect = g.compose(gw).dist_identity()
                if defect > (0.0 if g.exact and gw.exact else RECIPROCITY_TOL):
                    if reciprocal:
                        raise PCMatrixError(f"entries ({i},{j}) and ({j},{i}) are not reciprocal")
                    lower[(j, i)] = gw
        return cls(n, entries, group, labels, lower or None)

    @classmethod
    def from_weights(cls, weights: Sequence, group: str = "posreal", labels=None):
        """Consistent matrix ``a_ij = w_i / w_j`` (or ``w_i - w_j`` additively)."""
        n = len(weights)
        if group == "posreal":
            ws = [PosReal(w) for w in weights]
        elif group == "addreal":
            ws = [AddReal(w) for w in weights]
        else:
            ws = list(weights)
        entries = {(i, j): ws[i].compose(ws[j].inverse()) for i in range(n) for j in range(i + 1, n)}
        return cls(n, entries, group, labels)

    # access -------------------------------------------------------------

    @property
    def reciprocal(self) -> bool:
        return not self._lower

    def has(self, i: int, j: int) -> bool:
        return i == j or (min(i, j), max(i, j)) in self._upper

    def __call__(self, i: int, j: int) -> GroupElement | None:
        return self.get(i, j)

    def get(self, i: int, j: int) -> GroupElement | None:
        """Entry ``a_ij``; identity on the diagonal, ``None`` for a hole."""
        if i == j:
            return groups.identity(self.group)
        if i < j:
            return self._upper.get((i, j))
        if (i, j) in self._lower:
            return self._lower[(i, j)]
        g = self._upper.get((j, i))
        return None if g is None else g.inverse()

    def reciprocal_get(self, i: int, j: int) -> GroupElement | None:
        """Entry read through the upper triangle, ignoring any lower data."""
        if i == j:
            return groups.identity(self.group)
        g = self._upper.get((min(i, j), max(i, j)))
        if g is None or i < j:
            return g
        return g.inverse()

    def entries(self) -> dict:
        return dict(self._upper)

    def lower_entries(self) -> dict:
        return dict(self._lower)

    @property
    def graph(self) -> Graph:
        return Graph(self.n, self._upper.keys())

    @property
    def exact(self) -> bool:
        return all(g.exact for g in self._upper.values())

    def triads(self):
        """All ``i < j < k`` with the three upper entries present."""
        up = self._upper
        for i, j, k in itertools.combinations(range(self.n), 3):
            if (i, j) in up and (j, k) in up and (i, k) in up:
                yield i, j, k

    def triad_holonomy(self, i: int, j: int, k: int) -> GroupElement:
        a = self.reciprocal_get
        return a(i, j).compose(a(j, k)).compose(a(k, i))

    def reciprocity_defect(self) -> dict:
        """``a_ij * a_ji`` for every stored non-reciprocal pair."""
        return {(j, i): self._upper[(j, i)].compose(g) for (i, j), g in self._lower.items()}

    def permuted(self, perm: Sequence[int]) -> PCMatrix:
        """Relabel item ``i`` as ``perm[i]``."""
        entries = {}
        for (i, j), g in self._upper.items():
            entries[(perm[i], perm[j])] = g
        lower = {}
        for (i, j), g in self._lower.items():
            pi, pj = perm[i], perm[j]
            if pi > pj:
                lower[(pi, pj)] = g
            else:
                # the pair flips orientation: old lower becomes the new upper side
                raise PCMatrixError("permuting non-reciprocal matrices is not supported")
        labels = [None] * self.n
        for i, lab in enumerate(self.labels):
            labels[perm[i]] = lab
        return PCMatrix(self.n, entries, self.group, labels, lower or None)

    def to_rows(self):
        return [[self.get(i, j) for j in range(self.n)] for i in range(self.n)]

    def __repr__(self):
        return f"PCMatrix(n={self.n}, group={self.group!r}, entries={len(self._upper)})"


# analysis ---------------------------------------------------------------


def to_connection(A: PCMatrix) -> DiscreteConnection:
    """The comparison graph with ``a_ij`` on the oriented edge ``i -> j``."""
    return DiscreteConnection(A.graph, A.entries(), A.group)


def from_connection(conn: DiscreteConnection, labels=None) -> PCMatrix:
    return PCMatrix(conn.n, dict(conn.items()), conn.group, labels)


@dataclass(frozen=True)
class ConsistencyReport:
    consistent: bool
    tol: float
    worst_triad: tuple | None
    worst_distance: float
    triads_checked: int


def triad_distances(A: PCMatrix, weight: float = 1.0) -> dict:
    """Per-triad inconsistency ``dist_identity(a_ij a_jk a_ki)``."""
    return {t: A.triad_holonomy(*t).dist_identity(weight) for t in A.triads()}


def is_consistent(A: PCMatrix, tol: float | None = None, weight: float = 1.0) -> ConsistencyReport:
    if tol is None:
        tol = groups.default_tol(A.group)
    worst, worst_d, count = None, 0.0, 0
    for t, d in triad_distances(A, weight).items():
        count += 1
        if worst is None or d > worst_d:
            worst, worst_d = t, d
    return ConsistencyReport(worst_d <= tol, tol, worst, worst_d, count)


def koczkodaj_ii(A: PCMatrix):
    """Koczkodaj's inconsistency indicator.

    ``max`` over complete triads of
    ``min(|1 - a_ik / (a_ij a_jk)|, |1 - a_ij a_jk / a_ik|)``.
    Exact (a Fraction) when every entry is rational.
    """
    if A.group != "posreal":
        raise GroupMismatchError(f"Koczkodaj's indicator needs a posreal matrix, not {A.group}")
    best = Fraction(0) if A.exact else 0.0
    for i, j, k in A.triads():
        path = A.reciprocal_get(i, j).value * A.reciprocal_get(j, k).value
        direct = A.reciprocal_get(i, k).value
        v = min(abs(1 - direct / path), abs(1 - path / direct))
        if v > best:
            best = v
    return best


def inconsistency_sup(A: PCMatrix, weight: float = 1.0) -> float:
    return max(triad_distances(A, weight).values(), default=0.0)


def inconsistency_quadratic(A: PCMatrix, weight: float = 1.0) -> float:
    d = list(triad_distances(A, weight).values())
    if not d:
        return 0.0
    return sum(x * x for x in d) / len(d)


@dataclass(frozen=True)
class PriorityVector:
    weights: tuple
    method: str

    def __post_init__(self):
        if any(not w > 0 for w in self.weights):
            raise ValueError("priority weights must be positive")
        if abs(float(sum(self.weights)) - 1.0) > 1e-12:
            raise ValueError("priority weights must sum to 1")

    @property
    def exact(self) -> bool:
        return all(isinstance(w, Fraction) for w in self.weights)

    def matrix(self, labels=None) -> PCMatrix:
        return PCMatrix.from_weights(self.weights, "posreal", labels)


def _normalize(ws):
    total = sum(ws)
    return tuple(w / total for w in ws)


def _tree_weights(A: PCMatrix):
    """Weights propagated along the min-index spanning tree from node 0.

    With ``w_0 = 1`` and ``w_j = w_i / a_ij`` for tree edge ``i -> j``,
    every tree entry satisfies ``a_ij = w_i / w_j`` exactly.
    """
    order, parent = spanning_tree(A.graph, 0)
    one = Fraction(1) if A.exact else 1.0
    w = [None] * A.n
    w[0] = one
    for v in order[1:]:
        u = parent[v]
        w[v] = w[u] / A.reciprocal_get(u, v).value
    return w


def priority_vector(A: PCMatrix) -> PriorityVector:
    """Priority weights.

    Complete inexact matrices use row geometric means.  Exact consistent
    matrices and partial matrices use tree propagation, which coincides
    with the geometric mean whenever the matrix is consistent and keeps the
    result rational.
    """
    if A.group != "posreal":
        raise GroupMismatchError("priority vectors are defined for posreal matrices")
    g = A.graph
    if not g.connected:
        raise DisconnectedGraphError(g.unreachable)
    complete = len(A.entries()) == A.n * (A.n - 1) // 2
    if A.exact and is_consistent(A, 0.0).consistent:
        return PriorityVector(_normalize(_tree_weights(A)), "tree")
    if complete:
        logs = np.zeros(A.n)
        for i in range(A.n):
            logs[i] = sum(math.log(A.reciprocal_get(i, j).value) for j in range(A.n)) / A.n
        ws = np.exp(logs - logs.max())
        return PriorityVector(_normalize([float(w) for w in ws]), "geometric_mean")
    ws = [float(w) for w in _tree_weights(A)]
    return PriorityVector(_normalize(ws), "tree")


# random generation ------------------------------------------------------


@dataclass(frozen=True)
class NoiseLaw:
    """Perturbation law for random PC matrices.

    ``kind`` is ``"gaussian"`` (multiplicative: entries times
    ``exp(N(0, sigma^2))``) or ``"uniform"`` (additive: entries plus
    ``U(-half_width, half_width)``, clamped to ``clamp_eps`` from below).
    """

    kind: str = "gaussian"
    sigma: float = 0.1
    half_width: float = 0.5
    reciprocal: bool = True
    seed: int = 0
    clamp_eps: float = 1e-6

    def __post_init__(self):
        if self.kind not in ("gaussian", "uniform"):
            raise ValueError(f"unknown noise law {self.kind!r}")
        if self.kind == "gaussian" and not self.sigma > 0:
            raise ValueError("sigma must be > 0")
        if self.kind == "uniform" and not self.half_width > 0:
            raise ValueError("half_width must be > 0")
        if not self.clamp_eps > 0:
            raise ValueError("clamp_eps must be > 0")


@dataclass(frozen=True)
class RandomPC:
    matrix: PCMatrix
    clamps: int


def random_pc(n: int, law: NoiseLaw, base: PriorityVector | Sequence | None = None) -> RandomPC:
    if n < 2:
        raise PCMatrixError("random_pc needs n >= 2")
    w = [1.0] * n if base is None else [float(x) for x in getattr(base, "weights", base)]
    if len(w) != n:
        raise PCMatrixError(f"base has {len(w)} weights for n={n}")
    rng = np.random.default_rng(law.seed)
    clamps = 0

    def perturb(v: float) -> float:
        nonlocal clamps
        if law.kind == "gaussian":
            return v * math.exp(rng.normal(0.0, law.sigma))
        out = v + rng.uniform(-law.half_width, law.half_width)
        if out < law.clamp_eps:
            clamps += 1
            out = law.clamp_eps
        return out

    entries, lower = {}, {}
    for i in range(n):
        for j in range(i + 1, n):
            entries[(i, j)] = PosReal(perturb(w[i] / w[j]))
    if not law.reciprocal:
        for i in range(n):
            for j in range(i + 1, n):
                lower[(j, i)] = PosReal(perturb(w[j] / w[i]))
    if clamps:
        log.info("random_pc clamped %d entries to %g", clamps, law.clamp_eps)
    return RandomPC(PCMatrix(n, entries, "posreal", None, lower or None), clamps)


# serialization ----------------------------------------------------------


def matrix_to_json(A: PCMatrix) -> dict:
    def enc(g):
        d = g.to_json()
        d.pop("group")
        return d["value"] if set(d) == {"value"} else d

    out = {
        "n": A.n,
        "group": A.group,
        "labels": list(A.labels),
        "entries": [{"i": i, "j": j, "a": enc(g)} for (i, j), g in sorted(A.entries().items())],
    }
    if A.lower_entries():
        out["lower"] = [{"i": i, "j": j, "a": enc(g)} for (i, j), g in sorted(A.lower_entries().items())]
    return out


def matrix_from_json(obj) -> PCMatrix:
    group = obj.get("group", "posreal")
    n = int(obj["n"])

    def dec(items):
        out = {}
        for e in items:
            out[(int(e["i"]), int(e["j"]))] = groups.element_from_json(e["a"], group)
        return out

    if "rows" in obj:
        rows = [[None if v is None else v for v in r] for r in obj["rows"]]
        return PCMatrix.from_rows(rows, group, obj.get("labels"), obj.get("reciprocal", True))
    return PCMatrix(n, dec(obj.get("entries", [])), group, obj.get("labels"), dec(obj.get("lower", [])) or None)


def matrix_from_csv(text: str) -> PCMatrix:
    """Complete posreal matrix from CSV; an optional header row gives labels."""
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    labels = None
    try:
        Fraction(rows[0][0].strip())
    except (ValueError, ZeroDivisionError):
        labels = [c.strip() for c in rows[0]]
        rows = rows[1:]
    values = [[c.strip() for c in r] for r in rows]
    return PCMatrix.from_rows(values, "posreal", labels)
