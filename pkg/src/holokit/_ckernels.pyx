# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``."""

from libc.stdlib cimport malloc, free


cdef struct KSState:
    int n
    int *pair_ptr
    int *pair_nbr
    int *tri_ptr
    int *tri_ids
    int *triples
    int *order
    signed char *color
    int *trail
    int trail_len
    int *stack_r
    signed char *stack_v
    long long nodes
    int max_depth


cdef int *_ints(seq) except NULL:
    cdef Py_ssize_t m = len(seq)
    cdef int *out = <int *> malloc((m + 1) * sizeof(int))
    if out == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(m):
        out[i] = seq[i]
    return out


cdef bint _assign(KSState *s, int r0, signed char v0) nogil:
    cdef int top = 0
    cdef int r, k, t, m, nb, zeros, nfree, free_m, j
    cdef signed char v, c
    s.stack_r[0] = r0
    s.stack_v[0] = v0
    top = 1
    while top > 0:
        top -= 1
        r = s.stack_r[top]
        v = s.stack_v[top]
        c = s.color[r]
        if c != -1:
            if c != v:
                return False
            continue
        s.color[r] = v
        s.trail[s.trail_len] = r
        s.trail_len += 1
        if v == 0:
            for k in range(s.pair_ptr[r], s.pair_ptr[r + 1]):
                nb = s.pair_nbr[k]
                if s.color[nb] == 0:
                    return False
                if s.color[nb] == -1:
                    s.stack_r[top] = nb
                    s.stack_v[top] = 1
                    top += 1
        else:
            for k in range(s.tri_ptr[r], s.tri_ptr[r + 1]):
                t = 3 * s.tri_ids[k]
                zeros = 0
                nfree = 0
                free_m = -1
                for j in range(3):
                    m = s.triples[t + j]
                    if s.color[m] == 0:
                        zeros += 1
                    elif s.color[m] == -1:
                        nfree += 1
                        free_m = m
                if zeros == 0:
                    if nfree == 0:
                        return False
                    if nfree == 1:
                        s.stack_r[top] = free_m
                        s.stack_v[top] = 0
                        top += 1
    return True


cdef void _undo(KSState *s, int mark) nogil:
    while s.trail_len > mark:
        s.trail_len -= 1
        s.color[s.trail[s.trail_len]] = -1


cdef bint _search(KSState *s, int pos, int depth) nogil:
    cdef int r, mark
    cdef signed char v
    while pos < s.n and s.color[s.order[pos]] != -1:
        pos += 1
    if pos == s.n:
        return True
    s.nodes += 1
    if depth > s.max_depth:
        s.max_depth = depth
    r = s.order[pos]
    for v in range(2):
        mark = s.trail_len
        if _assign(s, r, v) and _search(s, pos + 1, depth + 1):
            return True
        _undo(s, mark)
    return False


def ks_search(n, pair_ptr, pair_nbr, tri_ptr, tri_ids, triples, order):
    cdef KSState s
    cdef int i
    cdef bint found
    # each propagation step pushes at most one entry per incidence
    cdef Py_ssize_t cap = len(pair_nbr) + len(tri_ids) + n + 1
    s.n = n
    s.pair_ptr = _ints(pair_ptr)
    s.pair_nbr = _ints(pair_nbr)
    s.tri_ptr = _ints(tri_ptr)
    s.tri_ids = _ints(tri_ids)
    s.triples = _ints(triples)
    s.order = _ints(order)
    s.color = <signed char *> malloc((n + 1) * sizeof(signed char))
    s.trail = <int *> malloc((n + 1) * sizeof(int))
    s.stack_r = <int *> malloc(cap * sizeof(int))
    s.stack_v = <signed char *> malloc(cap * sizeof(signed char))
    s.trail_len = 0
    s.nodes = 0
    s.max_depth = 0
    try:
        for i in range(n):
            s.color[i] = -1
        with nogil:
            found = _search(&s, 0, 1)
        colours = [int(s.color[i]) for i in range(n)] if found else []
        return bool(found), colours, int(s.nodes), int(s.max_depth)
    finally:
        free(s.pair_ptr); free(s.pair_nbr); free(s.tri_ptr); free(s.tri_ids)
        free(s.triples); free(s.order); free(s.color); free(s.trail)
        free(s.stack_r); free(s.stack_v)


def best_deterministic(int nx, int ny, int na, int nb, weights):
    cdef Py_ssize_t size = len(weights)
    cdef long long *w = <long long *> malloc((size + 1) * sizeof(long long))
    cdef int *fa = <int *> malloc((nx + 1) * sizeof(int))
    cdef int *fb = <int *> malloc((ny + 1) * sizeof(int))
    cdef int *best_fa = <int *> malloc((nx + 1) * sizeof(int))
    cdef int *best_fb = <int *> malloc((ny + 1) * sizeof(int))
    cdef Py_ssize_t i
    cdef int x, y, b, arg, k
    cdef long long s, top, total, best = 0
    cdef bint have = False, done = False
    try:
        for i in range(size):
            w[i] = weights[i]
        for x in range(nx):
            fa[x] = 0
        with nogil:
            while not done:
                total = 0
                for y in range(ny):
                    arg = 0
                    top = 0
                    for b in range(nb):
                        s = 0
                        for x in range(nx):
                            s += w[((x * ny + y) * na + fa[x]) * nb + b]
                        if b == 0 or s > top:
                            top = s
                            arg = b
                    total += top
                    fb[y] = arg
                if not have or total > best:
                    have = True
                    best = total
                    for x in range(nx):
                        best_fa[x] = fa[x]
                    for y in range(ny):
                        best_fb[y] = fb[y]
                # next fA in lexicographic order, last question least significant
                k = nx - 1
                while k >= 0:
                    fa[k] += 1
                    if fa[k] < na:
                        break
                    fa[k] = 0
                    k -= 1
                if k < 0:
                    done = True
        return int(best), [best_fa[x] for x in range(nx)], [best_fb[y] for y in range(ny)]
    finally:
        free(w); free(fa); free(fb); free(best_fa); free(best_fb)


def global_sections(radix, ctx_ptr, ctx_obs, sup_ptr, support):
    cdef int n = len(radix)
    cdef int n_ctx = len(ctx_ptr) - 1
    cdef int *rad = _ints(radix)
    cdef int *cp = _ints(ctx_ptr)
    cdef int *co = _ints(ctx_obs)
    cdef int *sp = _ints(sup_ptr)
    cdef int *sup = _ints(support)
    cdef Py_ssize_t n_sup = len(support)
    cdef signed char *cov = <signed char *> malloc((n_sup + 1) * sizeof(signed char))
    cdef int *g = <int *> malloc((n + 1) * sizeof(int))
    cdef int *first = <int *> malloc((n + 1) * sizeof(int))
    cdef int *codes = <int *> malloc((n_ctx + 1) * sizeof(int))
    cdef long long count = 0
    cdef int c, k, code, o, i
    cdef bint ok, done = False, have_first = False
    try:
        for i in range(n_sup):
            cov[i] = 0
        for i in range(n):
            g[i] = 0
            if rad[i] <= 0:
                done = True
        with nogil:
            while not done:
                ok = True
                for c in range(n_ctx):
                    code = 0
                    for k in range(cp[c], cp[c + 1]):
                        o = co[k]
                        code = code * rad[o] + g[o]
                    if not sup[sp[c] + code]:
                        ok = False
                        break
                    codes[c] = sp[c] + code
                if ok:
                    count += 1
                    if not have_first:
                        have_first = True
                        for i in range(n):
                            first[i] = g[i]
                    for c in range(n_ctx):
                        cov[codes[c]] = 1
                k = n - 1
                while k >= 0:
                    g[k] += 1
                    if g[k] < rad[k]:
                        break
                    g[k] = 0
                    k -= 1
                if k < 0:
                    done = True
        return (
            int(count),
            [int(cov[i]) for i in range(n_sup)],
            [first[i] for i in range(n)] if have_first else [],
        )
    finally:
        free(rad); free(cp); free(co); free(sp); free(sup)
        free(cov); free(g); free(first); free(codes)
