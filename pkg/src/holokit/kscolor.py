"""Kochen-Specker colourability of ray sets in R^3.

Rays have components in Z[sqrt2] so orthogonality is an exact predicate.
A KS colouring maps rays to {0, 1} such that

1. every orthogonal pair has at most one ray coloured 0, and
2. every mutually orthogonal triple has exactly one ray coloured 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from holokit import kernels
from holokit.exactnum.quadint import QuadInt, content, dot


class DuplicateRayError(ValueError):
    pass


@dataclass(frozen=True)
class Ray:
    components: tuple  # three QuadInt, canonical

    def __init__(self, components: Sequence):
        comps = [QuadInt.coerce(c) if not isinstance(c, (tuple, list)) else QuadInt(*c) for c in components]
        if len(comps) != 3:
            raise ValueError("a ray needs 3 components")
        g = content(comps)
        if g == 0:
            raise ValueError("the zero vector is not a ray")
        comps = [QuadInt(c.a // g, c.b // g) for c in comps]
        lead = next(c for c in comps if c)
        if lead.sign() < 0:
            comps = [-c for c in comps]
        object.__setattr__(self, "components", tuple(comps))

    def dot(self, other: Ray) -> QuadInt:
        return dot(self.components, other.components)

    def transformed(self, perm: Sequence[int], signs: Sequence[int]) -> Ray:
        """Apply ``v -> (s_0 v[perm[0]], s_1 v[perm[1]], s_2 v[perm[2]])``."""
        return Ray([self.components[p] * s for p, s in zip(perm, signs)])

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def to_json(self):
        return [c.to_json() for c in self.components]

    @classmethod
    def from_json(cls, obj):
        return cls([QuadInt.from_json(c) for c in obj])


@dataclass(frozen=True)
class OrthoStructure:
    rays: tuple
    pairs: tuple  # (i, j), i < j
    triples: tuple  # (i, j, k), i < j < k


def ortho_structure(rays: Sequence[Ray]) -> OrthoStructure:
    rays = tuple(r if isinstance(r, Ray) else Ray(r) for r in rays)
    seen: dict[Ray, int] = {}
    for i, r in enumerate(rays):
        if r in seen:
            raise DuplicateRayError(f"rays {seen[r]} and {i} are the same ray {r}")
        seen[r] = i
    n = len(rays)
    adj = [set() for _ in range(n)]
    pairs = []
    for i, j in itertools.combinations(range(n), 2):
        if not rays[i].dot(rays[j]):
            pairs.append((i, j))
            adj[i].add(j)
            adj[j].add(i)
    triples = [(i, j, k) for i, j in pairs for k in sorted(adj[i] & adj[j]) if k > j]
    return OrthoStructure(rays, tuple(pairs), tuple(sorted(triples)))


@dataclass(frozen=True)
class Colorable:
    assignment: tuple
    nodes: int = 0
    colorable = True


@dataclass(frozen=True)
class Uncolorable:
    nodes: int
    max_depth: int
    colorable = False


def _csr(n, pairs, triples):
    nbrs = [[] for _ in range(n)]
    for i, j in pairs:
        nbrs[i].append(j)
        nbrs[j].append(i)
    tris = [[] for _ in range(n)]
    for t, tri in enumerate(triples):
        for m in tri:
            tris[m].append(t)
    pair_ptr, pair_nbr, tri_ptr, tri_ids = [0], [], [0], []
    for r in range(n):
        pair_nbr.extend(nbrs[r])
        pair_ptr.append(len(pair_nbr))
        tri_ids.extend(tris[r])
        tri_ptr.append(len(tri_ids))
    flat = [m for tri in triples for m in tri]
    return pair_ptr, pair_nbr, tri_ptr, tri_ids, flat, nbrs, tris


def ks_colorable(os: OrthoStructure, backend: str | None = None) -> Colorable | Uncolorable:
    """Backtracking with unit propagation.

    Rays are branched in decreasing order of constraint count (triples
    first, then pairs, then index), trying colour 0 before 1.
    """
    n = len(os.rays)
    pair_ptr, pair_nbr, tri_ptr, tri_ids, flat, nbrs, tris = _csr(n, os.pairs, os.triples)
    order = sorted(range(n), key=lambda r: (-len(tris[r]), -len(nbrs[r]), r))
    mod = kernels.get_backend(backend)
    found, colours, nodes, depth = mod.ks_search(n, pair_ptr, pair_nbr, tri_ptr, tri_ids, flat, order)
    if found:
        return Colorable(tuple(colours), nodes)
    return Uncolorable(nodes, depth)


def check_coloring(os: OrthoStructure, colours: Sequence[int]) -> bool:
    if len(colours) != len(os.rays) or any(c not in (0, 1) for c in colours):
        return False
    if any(colours[i] == 0 and colours[j] == 0 for i, j in os.pairs):
        return False
    return all(sum(colours[m] == 0 for m in t) == 1 for t in os.triples)


def substructure(os: OrthoStructure, keep: Sequence[int]) -> OrthoStructure:
    keep = sorted(set(keep))
    return ortho_structure([os.rays[i] for i in keep])


def signed_permutations(proper: bool = True) -> list[tuple[tuple, tuple]]:
    """Signed coordinate permutations; ``proper`` keeps the 24 rotations of the cube."""
    out = []
    for perm in itertools.permutations(range(3)):
        inversions = sum(1 for i, j in itertools.combinations(range(3), 2) if perm[i] > perm[j])
        for signs in itertools.product((1, -1), repeat=3):
            det = (-1) ** inversions * signs[0] * signs[1] * signs[2]
            if not proper or det == 1:
                out.append((perm, signs))
    return out


def peres_rays() -> list[Ray]:
    """Peres' 33 rays: components in {0, +-1, +-sqrt2}.

    They are the orbits, under signed coordinate permutations, of
    ``(0,0,1)``, ``(0,1,1)``, ``(0,1,sqrt2)`` and ``(1,1,sqrt2)``.
    """
    r2 = QuadInt(0, 1)
    seeds = [(0, 0, 1), (0, 1, 1), (0, 1, r2), (1, 1, r2)]
    found: dict[Ray, None] = {}
    for seed in seeds:
        base = Ray(seed)
        for perm, signs in signed_permutations(proper=False):
            found.setdefault(base.transformed(perm, signs))
    rays = sorted(found, key=lambda r: tuple((c.a, c.b) for c in r.components))
    # standard basis first for readability
    basis = [Ray((1, 0, 0)), Ray((0, 1, 0)), Ray((0, 0, 1))]
    rest = [r for r in rays if r not in basis]
    return basis + rest


def rays_to_json(rays: Sequence[Ray]) -> dict:
    return {"rays": [r.to_json() for r in rays]}


def rays_from_json(obj) -> list[Ray]:
    return [Ray.from_json(r) for r in obj["rays"]]
