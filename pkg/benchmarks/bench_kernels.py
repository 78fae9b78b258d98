"""Compare the compiled and pure-Python kernels on representative inputs.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import timeit

from holokit import contextuality, kernels, kscolor
from holokit.kscolor import _csr


def ks_case():
    os_ = kscolor.ortho_structure(kscolor.peres_rays())
    n = len(os_.rays)
    pair_ptr, pair_nbr, tri_ptr, tri_ids, flat, nbrs, tris = _csr(n, os_.pairs, os_.triples)
    order = sorted(range(n), key=lambda r: (-len(tris[r]), -len(nbrs[r]), r))
    return "ks_search (Peres, 33 rays)", "ks_search", (n, pair_ptr, pair_nbr, tri_ptr, tri_ids, flat, order)


def game_case(nx=6, ny=6, na=3, nb=3, seed=1):
    rng = random.Random(seed)
    weights = [rng.randrange(2) * rng.randrange(1, 50) for _ in range(nx * ny * na * nb)]
    return f"best_deterministic ({nx}x{ny} questions, {na}x{nb} answers)", "best_deterministic", (nx, ny, na, nb, weights)


def sections_case():
    m = contextuality.tensor(contextuality.pr_box_model(), contextuality.chsh_model())
    sc = m.scenario
    pos = {o: i for i, o in enumerate(sc.observables)}
    radix = [len(sc.outcomes[o]) for o in sc.observables]
    ctx_ptr, ctx_obs, sup_ptr, support = [0], [], [0], []
    for ctx in sc.contexts:
        ctx_obs.extend(pos[o] for o in ctx)
        ctx_ptr.append(len(ctx_obs))
        support.extend(1 if m.tables[ctx][s] else 0 for s in sc.sections(ctx))
        sup_ptr.append(len(support))
    label = f"global_sections ({len(radix)} observables, {len(sc.contexts)} contexts)"
    return label, "global_sections", (radix, ctx_ptr, ctx_obs, sup_ptr, support)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "c" not in backends:
        print("compiled kernels not built; only the Python backend is available")
    print(f"{'kernel':<52}" + "".join(f"{b:>12}" for b in backends) + ("    speedup" if len(backends) > 1 else ""))
    for label, fn, case in (ks_case(), game_case(), sections_case()):
        times, results = {}, {}
        for b in backends:
            f = getattr(kernels.get_backend(b), fn)
            results[b] = f(*case)
            number = 1 if b == "python" else 20
            times[b] = min(timeit.repeat(lambda: f(*case), number=number, repeat=args.repeat)) / number
        same = len({repr(r) for r in results.values()}) == 1
        row = f"{label:<52}" + "".join(f"{times[b] * 1e3:>10.3f}ms" for b in backends)
        if len(backends) > 1:
            row += f"   {times['python'] / times['c']:>7.1f}x"
        print(row + ("" if same else "   RESULTS DIFFER"))


if __name__ == "__main__":
    main()
