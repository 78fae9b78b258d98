"""Independent reference implementations used only by the tests.

Nothing here imports holokit: each oracle solves the same problem by a
different (slower, simpler) method so agreement is meaningful.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import numpy as np


# --- linear feasibility by Fourier-Motzkin ------------------------------------


def fm_feasible(A, b) -> bool:
    """Decide ``A x = b, x >= 0`` by substitution then Fourier-Motzkin.

    Equalities are eliminated by Gaussian substitution, which turns the
    sign constraint of each solved variable into an inequality.  The
    remaining system ``C x <= d`` is projected one variable at a time,
    dropping combinations that violate Chernikov's history bound.
    """
    n = len(A[0]) if A else 0
    eqs = [([Fraction(v) for v in row], Fraction(r)) for row, r in zip(A, b)]
    # each variable is an affine expression in the free variables: coeffs, const
    expr = {j: ({j: Fraction(1)}, Fraction(0)) for j in range(n)}
    while eqs:
        row, r = eqs.pop()
        k = next((j for j, v in enumerate(row) if v), None)
        if k is None:
            if r != 0:
                return False
            continue
        # x_k = (r - sum_{j != k} row_j x_j) / row_k
        piv = row[k]
        sub = {j: -v / piv for j, v in enumerate(row) if v and j != k}
        sc = r / piv

        def substitute(coeffs, const):
            c = coeffs.pop(k, Fraction(0))
            if c:
                for j, v in sub.items():
                    coeffs[j] = coeffs.get(j, Fraction(0)) + c * v
                const += c * sc
            return {j: v for j, v in coeffs.items() if v}, const

        for j in list(expr):
            expr[j] = substitute(dict(expr[j][0]), expr[j][1])
        new = []
        for row2, r2 in eqs:
            c = row2[k]
            if c:
                row2 = [v - c * row[j] / piv for j, v in enumerate(row2)]
                r2 = r2 - c * r / piv
            new.append((row2, r2))
        eqs = new
    # x_j >= 0 becomes  -coeffs . x <= const
    ineqs = []
    for idx, (coeffs, const) in enumerate(expr.values()):
        ineqs.append(({j: -v for j, v in coeffs.items()}, const, frozenset([idx])))
    free = sorted({j for coeffs, _, _ in ineqs for j in coeffs})
    for step, var in enumerate(free, start=1):
        pos, neg, rest = [], [], []
        for c, d, h in ineqs:
            v = c.get(var, 0)
            (pos if v > 0 else neg if v < 0 else rest).append((c, d, h))
        out = rest
        seen = set()
        for (cp, dp, hp), (cn, dn, hn) in itertools.product(pos, neg):
            h = hp | hn
            if len(h) > step + 1:
                continue
            lp, ln = cp[var], -cn[var]
            c = {}
            for j in set(cp) | set(cn):
                if j == var:
                    continue
                val = cp.get(j, 0) * ln + cn.get(j, 0) * lp
                if val:
                    c[j] = val
            d = dp * ln + dn * lp
            key = (tuple(sorted(c.items())), d)
            if key in seen:
                continue
            seen.add(key)
            out.append((c, d, h))
        ineqs = out
    return all(d >= 0 for c, d, _ in ineqs if not c)


# --- pairwise comparisons -----------------------------------------------------


def koczkodaj_bruteforce(rows) -> Fraction:
    """Max over all ordered triples of distinct indices with entries present."""
    n = len(rows)
    worst = Fraction(0)
    for i, j, k in itertools.permutations(range(n), 3):
        aij, ajk, aik = rows[i][j], rows[j][k], rows[i][k]
        if aij is None or ajk is None or aik is None:
            continue
        t = min(abs(1 - aik / (aij * ajk)), abs(1 - aij * ajk / aik))
        worst = max(worst, t)
    return worst


# --- graphs and cycles --------------------------------------------------------


def all_simple_cycles(n, edges):
    """Every simple cycle (length >= 3) of an undirected graph, as closed node lists."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    return [c + [c[0]] for c in nx.simple_cycles(g) if len(c) >= 3]


def loop_product_posreal(weights, path):
    """Product of ``g_ij`` along a path where ``weights[(i, j)]`` is given for i<j."""
    out = Fraction(1)
    for u, v in zip(path, path[1:]):
        out *= weights[(u, v)] if u < v else 1 / weights[(v, u)]
    return out


# --- Kochen-Specker -----------------------------------------------------------


def ks_plain_search(n, pairs, triples):
    """Chronological backtracking with no propagation; constraints are checked
    only once every member is assigned."""
    by_last_pair = [[] for _ in range(n)]
    for i, j in pairs:
        by_last_pair[max(i, j)].append((i, j))
    by_last_tri = [[] for _ in range(n)]
    for t in triples:
        by_last_tri[max(t)].append(t)
    col = [None] * n

    def ok(v):
        if any(col[i] == 0 and col[j] == 0 for i, j in by_last_pair[v]):
            return False
        return all(sum(col[m] == 0 for m in t) == 1 for t in by_last_tri[v])

    def rec(v):
        if v == n:
            return True
        for c in (0, 1):
            col[v] = c
            if ok(v) and rec(v + 1):
                return True
        col[v] = None
        return False

    return rec(0), (list(col) if all(c is not None for c in col) else None)


def ks_exhaustive_numpy(n, pairs, triples) -> bool:
    """Test all 2**n colourings at once (n <= 20)."""
    if n == 0:
        return True
    codes = np.arange(1 << n, dtype=np.int64)
    zero = [((codes >> i) & 1) == 0 for i in range(n)]
    good = np.ones(1 << n, dtype=bool)
    for i, j in pairs:
        good &= ~(zero[i] & zero[j])
    for i, j, k in triples:
        good &= (zero[i].astype(np.int8) + zero[j] + zero[k]) == 1
    return bool(good.any())


# --- games --------------------------------------------------------------------


def best_deterministic_bruteforce(nx_, ny, na, nb, win, pi) -> Fraction:
    best = Fraction(-1)
    for fa in itertools.product(range(na), repeat=nx_):
        for fb in itertools.product(range(nb), repeat=ny):
            v = sum(
                (Fraction(pi[x][y]) for x in range(nx_) for y in range(ny) if win[x][y][fa[x]][fb[y]]),
                Fraction(0),
            )
            best = max(best, v)
    return best
