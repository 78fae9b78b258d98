"""Discrete connections on graphs.

A connection assigns a group element to every oriented edge, with the
reverse orientation carrying the inverse.  Loop holonomies measure
curvature; a connection is flat when every loop holonomy is the identity.
Flatness is decided on a fundamental cycle basis (one cycle per non-tree
edge of a spanning tree), which suffices because every closed walk's
holonomy is a product of conjugates of basis-cycle holonomies.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from holokit import groups
from holokit.groups import GroupElement, GroupMismatchError


class GraphError(ValueError):
    pass


class DisconnectedGraphError(GraphError):
    def __init__(self, node: int):
        super().__init__(f"graph is disconnected: node {node} is unreachable from the base")
        self.node = node


class PathError(GraphError):
    pass


class Graph:
    """Simple undirected graph on nodes ``0..n-1``."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("node count must be nonnegative")
        self.n = n
        adj: list[set[int]] = [set() for _ in range(n)]
        seen = set()
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i}, {j}) out of range for {n} nodes")
            if i == j:
                raise GraphError(f"self-loop at node {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise GraphError(f"duplicate edge {key}")
            seen.add(key)
            adj[i].add(j)
            adj[j].add(i)
        self._adj = tuple(frozenset(a) for a in adj)
        self.edges = tuple(sorted(seen))

    def neighbors(self, i: int) -> frozenset:
        return self._adj[i]

    def has_edge(self, i: int, j: int) -> bool:
        return 0 <= i < self.n and j in self._adj[i]

    @cached_property
    def unreachable(self) -> int | None:
        """First node not reachable from node 0, or None if connected."""
        if self.n == 0:
            return None
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in self._adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return next((v for v in range(self.n) if v not in seen), None)

    @property
    def connected(self) -> bool:
        return self.unreachable is None

    def __repr__(self):
        return f"Graph(n={self.n}, edges={list(self.edges)})"


class DiscreteConnection:
    """A graph with a group element on each oriented edge.

    Only one orientation per edge is stored; ``holonomy(j, i)`` returns the
    inverse of ``holonomy(i, j)``.
    """

    def __init__(self, graph: Graph, holonomies: Mapping[tuple[int, int], GroupElement], group: str | None = None):
        self.graph = graph
        stored: dict[tuple[int, int], GroupElement] = {}
        tags = {g.tag for g in holonomies.values()}
        if len(tags) > 1:
            raise GroupMismatchError(f"mixed groups in one connection: {sorted(tags)}")
        self.group = group or (tags.pop() if tags else "posreal")
        if tags and group and tags != {group}:
            raise GroupMismatchError(f"elements are {tags}, connection is {group}")
        for (i, j), g in holonomies.items():
            if not graph.has_edge(i, j):
                raise GraphError(f"holonomy given for non-edge ({i}, {j})")
            key = (min(i, j), max(i, j))
            if key in stored:
                raise GraphError(f"holonomy for edge {key} given twice")
            stored[key] = g if i < j else g.inverse()
        missing = [e for e in graph.edges if e not in stored]
        if missing:
            raise GraphError(f"missing holonomy for edges {missing}")
        self._hol = stored

    @classmethod
    def from_edges(cls, n: int, edges: Mapping[tuple[int, int], GroupElement], group: str | None = None):
        return cls(Graph(n, edges.keys()), edges, group)

    @classmethod
    def from_potentials(cls, graph: Graph, potentials: Sequence[GroupElement]):
        """Pure-gauge connection ``g_ij = p_i * p_j^-1`` (flat by construction)."""
        hol = {(i, j): potentials[i].compose(potentials[j].inverse()) for i, j in graph.edges}
        return cls(graph, hol, potentials[0].tag if potentials else None)

    @property
    def n(self) -> int:
        return self.graph.n

    def holonomy(self, i: int, j: int) -> GroupElement:
        if i < j:
            g = self._hol.get((i, j))
            if g is not None:
                return g
        else:
            g = self._hol.get((j, i))
            if g is not None:
                return g.inverse()
        raise PathError(f"nodes {i} and {j} are not adjacent")

    def items(self):
        """Stored orientations, ``((i, j), g)`` with ``i < j``."""
        return self._hol.items()

    def identity(self) -> GroupElement:
        return groups.identity(self.group)


def loop_holonomy(conn: DiscreteConnection, path: Sequence[int]) -> GroupElement:
    """Ordered product of edge holonomies along a closed path."""
    path = list(path)
    if len(path) < 2 or path[0] != path[-1]:
        raise PathError(f"path {path} is not closed")
    acc = conn.identity()
    for u, v in zip(path, path[1:]):
        if not conn.graph.has_edge(u, v):
            raise PathError(f"step {u} -> {v} is not an edge")
        acc = acc.compose(conn.holonomy(u, v))
    return acc


def triad_curvature(conn: DiscreteConnection, i: int, j: int, k: int) -> GroupElement:
    for u, v in ((i, j), (j, k), (k, i)):
        if not conn.graph.has_edge(u, v):
            raise PathError(f"triad ({i}, {j}, {k}) is missing edge ({u}, {v})")
    return loop_holonomy(conn, [i, j, k, i])


@dataclass(frozen=True)
class GaugePotential:
    """Node potentials from a spanning tree rooted at ``base``.

    ``potential[base]`` is the identity and for each tree edge
    ``parent -> child``, ``potential[child] = potential[parent] * g(parent, child)``.
    ``order`` is the attachment order and ``parent[v]`` the tree parent.
    """

    base: int
    potential: tuple
    order: tuple
    parent: tuple

    def tree_edges(self) -> list[tuple[int, int]]:
        return [(self.parent[v], v) for v in self.order if v != self.base]


def spanning_tree(graph: Graph, base: int = 0) -> tuple[tuple[int, ...], tuple[int | None, ...]]:
    """Grow a tree by the min-index rule.

    At each step the smallest-index unvisited node adjacent to the visited
    set joins, attached through its smallest-index visited neighbour.
    """
    if not 0 <= base < graph.n:
        raise GraphError(f"base {base} out of range")
    visited = [False] * graph.n
    visited[base] = True
    order = [base]
    parent: list[int | None] = [None] * graph.n
    frontier = set(graph.neighbors(base))
    while frontier:
        j = min(frontier)
        frontier.discard(j)
        visited[j] = True
        parent[j] = min(k for k in graph.neighbors(j) if visited[k])
        order.append(j)
        frontier.update(k for k in graph.neighbors(j) if not visited[k])
    if len(order) < graph.n:
        raise DisconnectedGraphError(next(v for v in range(graph.n) if not visited[v]))
    return tuple(order), tuple(parent)


def gauge_transform(conn: DiscreteConnection, potential: Sequence[GroupElement]) -> DiscreteConnection:
    """Change of frame: ``g'_ij = p_i * g_ij * p_j^-1``.

    Loop holonomies based at node ``v`` become ``p_v * h * p_v^-1``.
    """
    hol = {
        (i, j): potential[i].compose(g).compose(potential[j].inverse())
        for (i, j), g in conn.items()
    }
    return DiscreteConnection(conn.graph, hol, conn.group)


def spanning_tree_gauge(conn: DiscreteConnection, base: int = 0) -> tuple[GaugePotential, DiscreteConnection]:
    order, parent = spanning_tree(conn.graph, base)
    pot: list[GroupElement | None] = [None] * conn.n
    pot[base] = conn.identity()
    for v in order[1:]:
        u = parent[v]
        pot[v] = pot[u].compose(conn.holonomy(u, v))
    fixed = gauge_transform(conn, pot)
    # tree edges are the identity by construction; pin them so float noise cannot leak in
    ident = conn.identity()
    hol = dict(fixed.items())
    for v in order[1:]:
        u = parent[v]
        hol[(min(u, v), max(u, v))] = ident
    gauge = GaugePotential(base, tuple(pot), order, parent)
    return gauge, DiscreteConnection(conn.graph, hol, conn.group)


def _tree_path_to_root(parent, v):
    path = [v]
    while parent[v] is not None:
        v = parent[v]
        path.append(v)
    return path


def fundamental_cycles(graph: Graph, base: int = 0) -> list[list[int]]:
    """One simple closed path per non-tree edge ``(u, v)``, ``u < v``.

    Each cycle starts at the lowest common ancestor, walks down the tree to
    ``u``, crosses to ``v`` and returns up the tree.
    """
    order, parent = spanning_tree(graph, base)
    tree = {(min(parent[v], v), max(parent[v], v)) for v in order[1:]}
    cycles = []
    for u, v in graph.edges:
        if (u, v) in tree:
            continue
        up_u = _tree_path_to_root(parent, u)
        up_v = _tree_path_to_root(parent, v)
        on_u = set(up_u)
        lca = next(x for x in up_v if x in on_u)
        down_to_u = list(reversed(up_u[: up_u.index(lca) + 1]))
        back_from_v = up_v[: up_v.index(lca) + 1]
        cycles.append(down_to_u + back_from_v)
    return cycles


@dataclass(frozen=True)
class FlatnessReport:
    flat: bool
    tol: float
    worst_cycle: tuple | None = None
    worst_distance: float = 0.0
    cycles_checked: int = 0
    distances: tuple = field(default=(), repr=False)


def is_flat(conn: DiscreteConnection, tol: float | None = None, weight: float = 1.0, base: int = 0) -> FlatnessReport:
    if tol is None:
        tol = groups.default_tol(conn.group)
    if not conn.graph.connected:
        raise DisconnectedGraphError(conn.graph.unreachable)
    cycles = fundamental_cycles(conn.graph, base)
    worst, worst_d = None, 0.0
    dists = []
    for cyc in cycles:
        d = loop_holonomy(conn, cyc).dist_identity(weight)
        dists.append(d)
        if worst is None or d > worst_d:
            worst, worst_d = tuple(cyc), d
    return FlatnessReport(worst_d <= tol, tol, worst, worst_d, len(cycles), tuple(dists))


def conjugate_within(g: GroupElement, h: GroupElement, candidates: Iterable[GroupElement], tol: float = 0.0) -> GroupElement | None:
    """Return some ``c`` among ``candidates`` with ``c g c^-1 == h`` up to ``tol``.

    Holonomy classes of a non-abelian group are only defined up to
    conjugation; this compares two loop holonomies against a finite set of
    frame changes (typically the node potentials of two gauges).
    """
    for c in candidates:
        if groups.conjugate(g, c).compose(h.inverse()).dist_identity() <= tol:
            return c
    return None
