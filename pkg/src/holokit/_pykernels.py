"""Pure-Python combinatorial kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is unavailable or ``HOLOKIT_PURE_PYTHON`` is set.  All inputs
are flat integer sequences so both backends share one calling convention.
"""

from __future__ import annotations

import itertools


def ks_search(n, pair_ptr, pair_nbr, tri_ptr, tri_ids, triples, order):
    """Backtracking search for a KS colouring with unit propagation.

    Returns ``(found, colours, nodes, max_depth)``; ``colours`` is a list of
    0/1 when ``found`` and empty otherwise.
    """
    color = [-1] * n
    trail = []
    stats = [0, 0]

    def assign(r0, v0):
        stack = [(r0, v0)]
        while stack:
            r, v = stack.pop()
            c = color[r]
            if c != -1:
                if c != v:
                    return False
                continue
            color[r] = v
            trail.append(r)
            if v == 0:
                for k in range(pair_ptr[r], pair_ptr[r + 1]):
                    nb = pair_nbr[k]
                    if color[nb] == 0:
                        return False
                    if color[nb] == -1:
                        stack.append((nb, 1))
            else:
                for k in range(tri_ptr[r], tri_ptr[r + 1]):
                    t = 3 * tri_ids[k]
                    zeros = 0
                    free = -1
                    nfree = 0
                    for m in (triples[t], triples[t + 1], triples[t + 2]):
                        cm = color[m]
                        if cm == 0:
                            zeros += 1
                        elif cm == -1:
                            nfree += 1
                            free = m
                    if zeros == 0:
                        if nfree == 0:
                            return False
                        if nfree == 1:
                            stack.append((free, 0))
        return True

    def undo(mark):
        while len(trail) > mark:
            color[trail.pop()] = -1

    def search(pos, depth):
        while pos < n and color[order[pos]] != -1:
            pos += 1
        if pos == n:
            return True
        stats[0] += 1
        if depth > stats[1]:
            stats[1] = depth
        r = order[pos]
        for v in (0, 1):
            mark = len(trail)
            if assign(r, v) and search(pos + 1, depth + 1):
                return True
            undo(mark)
        return False

    found = search(0, 1)
    return found, (list(color) if found else []), stats[0], stats[1]


def best_deterministic(nx, ny, na, nb, weights):
    """Maximise ``sum_{x,y} w[x,y,fA(x),fB(y)]`` over answer functions.

    ``weights`` is flat with index ``((x*ny + y)*na + a)*nb + b``.  For each
    ``fA`` (in lexicographic order) the best ``fB`` decomposes per question
    ``y``; ties keep the smallest answer, and a later ``fA`` only wins on a
    strict improvement, so the returned pair is the lexicographically first
    argmax.  Returns ``(value, fA, fB)``.
    """
    best = None
    best_fa = best_fb = None
    for fa in itertools.product(range(na), repeat=nx):
        total = 0
        fb = []
        for y in range(ny):
            top = None
            arg = 0
            for b in range(nb):
                s = 0
                for x in range(nx):
                    s += weights[((x * ny + y) * na + fa[x]) * nb + b]
                if top is None or s > top:
                    top, arg = s, b
            total += top
            fb.append(arg)
        if best is None or total > best:
            best, best_fa, best_fb = total, list(fa), fb
    return best, best_fa, best_fb


def global_sections(radix, ctx_ptr, ctx_obs, sup_ptr, support):
    """Enumerate global assignments compatible with every context support.

    ``radix[i]`` is the outcome count of observable ``i``.  Context ``c``
    covers observables ``ctx_obs[ctx_ptr[c]:ctx_ptr[c+1]]`` and its support
    is the 0/1 table ``support[sup_ptr[c]:sup_ptr[c+1]]`` indexed by the
    mixed-radix code of the local section (first observable most
    significant).  Returns ``(count, covered, first)`` where ``covered`` flags
    which support entries extend to a compatible global assignment and
    ``first`` is the lexicographically first compatible assignment (or an
    empty list).
    """
    n_ctx = len(ctx_ptr) - 1
    covered = [0] * len(support)
    count = 0
    first = []
    for g in itertools.product(*(range(r) for r in radix)):
        codes = []
        ok = True
        for c in range(n_ctx):
            code = 0
            for k in range(ctx_ptr[c], ctx_ptr[c + 1]):
                o = ctx_obs[k]
                code = code * radix[o] + g[o]
            if not support[sup_ptr[c] + code]:
                ok = False
                break
            codes.append(sup_ptr[c] + code)
        if ok:
            count += 1
            if not first:
                first = list(g)
            for idx in codes:
                covered[idx] = 1
    return count, covered, first
