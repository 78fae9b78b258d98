"""Command-line front end.

Every command prints a single JSON report on stdout (or ``key: value``
lines with ``--format text``).  Exit status: 0 on success, 1 when a
``--fail-on-*`` flag meets a negative verdict, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from fractions import Fraction

from holokit import __version__, contextuality, games, holonomy, kernels, kscolor, pairwise, spectra
from holokit.exactnum.rational import format_rational
from holokit.io import (
    InputError,
    Source,
    connection_to_json,
    load_connection,
    load_game,
    load_matrix,
    load_model,
    load_rays,
    load_strategy,
)


class NegativeVerdict(Exception):
    pass


def _num(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, float):
        return float(repr(v))
    return v


def _element(g):
    d = g.to_json()
    return {k: _num(v) if not isinstance(v, list) else [_num(x) for x in v] for k, v in d.items()}


def _sections(secs):
    return ["".join(s) if all(len(x) == 1 for x in s) else list(s) for s in secs]


# pc ---------------------------------------------------------------------------


def cmd_pc_check(args, srcs):
    src = Source(args.file)
    srcs.append(src)
    A = load_matrix(src)
    rep = pairwise.is_consistent(A, args.tol, args.weight)
    out = {
        "n": A.n,
        "group": A.group,
        "reciprocal": A.reciprocal,
        "consistent": rep.consistent,
        "tol": rep.tol,
        "worst_triad": list(rep.worst_triad) if rep.worst_triad else None,
        "worst_distance": rep.worst_distance,
        "triads_checked": rep.triads_checked,
        "inconsistency_sup": pairwise.inconsistency_sup(A, args.weight),
        "inconsistency_quadratic": pairwise.inconsistency_quadratic(A, args.weight),
    }
    if A.group == "posreal":
        out["koczkodaj_ii"] = _num(pairwise.koczkodaj_ii(A))
    flat = holonomy.is_flat(pairwise.to_connection(A), args.tol, args.weight) if A.graph.connected else None
    out["flat"] = None if flat is None else flat.flat
    if args.fail_on_inconsistent and not rep.consistent:
        raise NegativeVerdict(out)
    return out


def cmd_pc_rank(args, srcs):
    src = Source(args.file)
    srcs.append(src)
    A = load_matrix(src)
    pv = pairwise.priority_vector(A)
    order = sorted(range(A.n), key=lambda i: (-pv.weights[i], i))
    return {
        "n": A.n,
        "method": pv.method,
        "exact": pv.exact,
        "weights": {A.labels[i]: _num(pv.weights[i]) for i in range(A.n)},
        "ranking": [A.labels[i] for i in order],
    }


def cmd_pc_random(args, srcs):
    law = pairwise.NoiseLaw(
        kind=args.law,
        sigma=args.sigma,
        half_width=args.half_width,
        reciprocal=not args.nonreciprocal,
        seed=args.seed,
    )
    res = pairwise.random_pc(args.n, law)
    A = res.matrix
    return {
        "law": {"kind": law.kind, "sigma": law.sigma, "half_width": law.half_width, "reciprocal": law.reciprocal, "seed": law.seed},
        "clamps": res.clamps,
        "matrix": pairwise.matrix_to_json(A),
        "koczkodaj_ii": pairwise.koczkodaj_ii(A),
    }


# holonomy ---------------------------------------------------------------------


def cmd_hol_flat(args, srcs):
    src = Source(args.file)
    srcs.append(src)
    conn = load_connection(src)
    rep = holonomy.is_flat(conn, args.tol, args.weight, args.base)
    out = {
        "group": conn.group,
        "flat": rep.flat,
        "tol": rep.tol,
        "cycles_checked": rep.cycles_checked,
        "worst_cycle": list(rep.worst_cycle) if rep.worst_cycle else None,
        "worst_distance": rep.worst_distance,
    }
    if rep.worst_cycle:
        out["worst_holonomy"] = _element(holonomy.loop_holonomy(conn, rep.worst_cycle))
    if args.fail_on_curved and not rep.flat:
        raise NegativeVerdict(out)
    return out


def cmd_hol_gauge(args, srcs):
    src = Source(args.file)
    srcs.append(src)
    conn = load_connection(src)
    gauge, fixed = holonomy.spanning_tree_gauge(conn, args.base)
    return {
        "base": gauge.base,
        "order": list(gauge.order),
        "tree_edges": [list(e) for e in gauge.tree_edges()],
        "potentials": [_element(p) for p in gauge.potential],
        "connection": json.loads(json.dumps(connection_to_json(fixed), default=_num)),
    }


def cmd_hol_loop(args, srcs):
    src = Source(args.file)
    srcs.append(src)
    conn = load_connection(src)
    path = [int(v) for v in args.path.split(",")]
    h = holonomy.loop_holonomy(conn, path)
    return {"path": path, "holonomy": _element(h), "distance": h.dist_identity(args.weight)}


# ctx --------------------------------------------------------------------------


def cmd_ctx_check(args, srcs):
    src = Source(args.file)
    srcs.append(src)
    model = load_model(src)
    vs = contextuality.local_coherence_violations(model)
    out = {"model": model.name, "coherent": not vs}
    if vs:
        v = vs[0]
        out["violation"] = {
            "contexts": [list(v.context), list(v.other)],
            "overlap": list(v.overlap),
            "section": list(v.section),
            "values": [format_rational(v.value), format_rational(v.other_value)],
        }
        out["violations"] = len(vs)
    if args.fail_on_incoherent and vs:
        raise NegativeVerdict(out)
    return out


def cmd_ctx_classify(args, srcs):
    src = Source(args.file)
    srcs.append(src)
    model = load_model(src)
    res = contextuality.classify(model)
    out = {
        "model": model.name,
        "observable_order": list(model.scenario.observables),
        "verdict": res.verdict,
        "contextual": res.contextual,
        "logically_contextual": res.logically_contextual,
        "strongly_contextual": res.strongly_contextual,
        "compatible_global_sections": res.compatible_global_sections,
        "verified": contextuality.verify_classification(model, res),
    }
    if res.witness is not None:
        out["witness"] = {
            "".join(s) if all(len(x) == 1 for x in s) else ",".join(s): format_rational(p)
            for s, p in sorted(res.witness.probs.items())
        }
    if res.certificate is not None:
        out["certificate"] = {
            "rows": [
                "normalization" if r == ("normalization",) else f"{','.join(r[0])}={''.join(r[1])}"
                for r in res.certificate.rows
            ],
            "y": [format_rational(v) for v in res.certificate.y],
        }
    if args.fail_on_contextual and res.contextual:
        raise NegativeVerdict(out)
    return out


def cmd_ctx_builtin(args, srcs):
    srcs.append(Source("builtin:" + args.name))
    models = contextuality.builtin_models()
    if args.name not in models:
        raise InputError(f"unknown builtin model {args.name!r}; known: {', '.join(sorted(models))}")
    return contextuality.model_to_json(models[args.name])


# game -------------------------------------------------------------------------


def _pairing(args):
    if args.alice and args.bob:
        return args.alice.split(","), args.bob.split(",")
    return None, None


def cmd_game_value(args, srcs):
    gsrc, ssrc = Source(args.game), Source(args.strategy)
    srcs.extend([gsrc, ssrc])
    game = load_game(gsrc)
    strat = load_strategy(ssrc, *_pairing(args))
    table = games.lower(strat, game)
    ns = games.check_no_signalling(table, game.shape)
    return {
        "game": game.name,
        "value": format_rational(games.strategy_value(game, strat)),
        "no_signalling": ns.ok,
    }


def cmd_game_best(args, srcs):
    src = Source(args.game)
    srcs.append(src)
    game = load_game(src)
    value, strat = games.best_deterministic_value(game)
    return {
        "game": game.name,
        "value": format_rational(value),
        "witness": games.strategy_to_json(strat),
        "backend": kernels.backend_name(),
    }


def cmd_game_from_model(args, srcs):
    src = Source(args.model)
    srcs.append(src)
    strat = load_strategy(src, *_pairing(args))
    ns = games.check_no_signalling(strat)
    out = games.strategy_to_json(strat)
    out["no_signalling"] = ns.ok
    return out


# ks ---------------------------------------------------------------------------


def _ks_report(rays, args):
    os_ = kscolor.ortho_structure(rays)
    res = kscolor.ks_colorable(os_)
    out = {
        "rays": len(os_.rays),
        "orthogonal_pairs": len(os_.pairs),
        "orthogonal_triples": len(os_.triples),
        "colorable": res.colorable,
        "backend": kernels.backend_name(),
    }
    if res.colorable:
        out["assignment"] = list(res.assignment)
        out["verified"] = kscolor.check_coloring(os_, res.assignment)
    else:
        out["search"] = {"nodes": res.nodes, "max_depth": res.max_depth}
    if getattr(args, "fail_on_uncolorable", False) and not res.colorable:
        raise NegativeVerdict(out)
    return out


def cmd_ks_check(args, srcs):
    src = Source(args.file)
    srcs.append(src)
    return _ks_report(load_rays(src), args)


def cmd_ks_peres(args, srcs):
    srcs.append(Source("builtin:peres"))
    rays = kscolor.peres_rays()
    out = _ks_report(rays, args)
    if args.list:
        out["ray_list"] = kscolor.rays_to_json(rays)["rays"]
    return out


# spectrum ---------------------------------------------------------------------

_PI_RE = re.compile(r"^\s*([+-]?[0-9./]*)\s*\*?\s*pi\s*(?:/\s*([0-9]+))?\s*$")


def parse_theta(theta: str | None, turns: str | None) -> spectra.Twist:
    """``--theta`` accepts radians or multiples of pi (``pi``, ``3pi/2``); ``--theta-over-2pi`` a rational."""
    if (theta is None) == (turns is None):
        raise InputError("give exactly one of --theta or --theta-over-2pi")
    if turns is not None:
        try:
            return spectra.Twist(Fraction(turns))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"--theta-over-2pi must be rational, got {turns!r}") from exc
    m = _PI_RE.match(theta)
    if m:
        coef = m.group(1)
        coef = Fraction(1) if coef in ("", "+") else Fraction(-1) if coef == "-" else Fraction(coef)
        if m.group(2):
            coef /= int(m.group(2))
        return spectra.Twist(coef / 2)
    try:
        return spectra.Twist.from_radians(float(theta))
    except ValueError as exc:
        raise InputError(f"cannot parse --theta {theta!r}") from exc


def cmd_spec_alpha(args, srcs):
    tw = parse_theta(args.theta, args.theta_over_2pi)
    a, n = spectra.alpha(tw)
    return {"theta_over_2pi": _num(tw.turns), "alpha": _num(a), "minimizing_n": n, "exact": tw.exact}


def cmd_spec_hardy(args, srcs):
    tw = parse_theta(args.theta, args.theta_over_2pi)
    c = spectra.hardy_constant(spectra.StatisticsSpec(args.d, tw))
    return {"d": args.d, "theta_over_2pi": _num(tw.turns), "hardy_constant": _num(c), "exact": tw.exact}


def cmd_spec_circle(args, srcs):
    tw = parse_theta(args.theta, args.theta_over_2pi)
    levels, (mins, low) = spectra.circle_spectrum(tw, args.n_min, args.n_max)
    return {
        "theta_over_2pi": _num(tw.turns),
        "levels": [[n, _num(e)] for n, e in levels],
        "ground": {"n": list(mins), "energy": _num(low)},
    }


# parser -----------------------------------------------------------------------


def _theta_args(p):
    p.add_argument("--theta", help="twist angle in radians or as a multiple of pi, e.g. 'pi' or 'pi/2'")
    p.add_argument("--theta-over-2pi", help="twist as an exact fraction of a full turn, e.g. 1/4")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="holokit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"holokit {__version__}")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--no-timing", action="store_true", help="omit timing so reports are byte-stable")
    sub = parser.add_subparsers(dest="group", metavar="{pc,holonomy,ctx,game,ks,spectrum}")
    sub.required = True

    pc = sub.add_parser("pc", help="pairwise-comparison matrices").add_subparsers(dest="cmd", required=True)
    p = pc.add_parser("check", help="consistency and inconsistency indicators")
    p.add_argument("file", help="JSON or CSV matrix")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--weight", type=float, default=1.0, help="translation weight in isometry distances")
    p.add_argument("--fail-on-inconsistent", action="store_true")
    p.set_defaults(func=cmd_pc_check)
    p = pc.add_parser("rank", help="priority vector")
    p.add_argument("file")
    p.set_defaults(func=cmd_pc_rank)
    p = pc.add_parser("random", help="seeded random matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--law", choices=("gaussian", "uniform"), default="gaussian")
    p.add_argument("--sigma", type=float, default=0.1)
    p.add_argument("--half-width", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nonreciprocal", action="store_true")
    p.set_defaults(func=cmd_pc_random)

    hol = sub.add_parser("holonomy", help="discrete connections").add_subparsers(dest="cmd", required=True)
    p = hol.add_parser("flat", help="flatness on a fundamental cycle basis")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--weight", type=float, default=1.0)
    p.add_argument("--base", type=int, default=0)
    p.add_argument("--fail-on-curved", action="store_true")
    p.set_defaults(func=cmd_hol_flat)
    p = hol.add_parser("gauge", help="spanning-tree gauge fixing")
    p.add_argument("file")
    p.add_argument("--base", type=int, default=0)
    p.set_defaults(func=cmd_hol_gauge)
    p = hol.add_parser("loop", help="holonomy of one closed path")
    p.add_argument("file")
    p.add_argument("--path", required=True, help="comma-separated nodes, first = last")
    p.add_argument("--weight", type=float, default=1.0)
    p.set_defaults(func=cmd_hol_loop)

    ctx = sub.add_parser("ctx", help="empirical models and contextuality").add_subparsers(dest="cmd", required=True)
    p = ctx.add_parser("check", help="local coherence")
    p.add_argument("file")
    p.add_argument("--fail-on-incoherent", action="store_true")
    p.set_defaults(func=cmd_ctx_check)
    p = ctx.add_parser("classify", help="contextuality hierarchy")
    p.add_argument("file")
    p.add_argument("--fail-on-contextual", action="store_true")
    p.set_defaults(func=cmd_ctx_classify)
    p = ctx.add_parser("builtin", help="print a builtin model")
    p.add_argument("name", help="hidden-variable, pr-box or chsh")
    p.set_defaults(func=cmd_ctx_builtin)

    game = sub.add_parser("game", help="nonlocal games").add_subparsers(dest="cmd", required=True)
    p = game.add_parser("value", help="value of a strategy")
    p.add_argument("game")
    p.add_argument("strategy", help="strategy JSON, or an empirical model")
    p.add_argument("--alice", help="Alice's observables in question order, comma-separated")
    p.add_argument("--bob", help="Bob's observables in question order, comma-separated")
    p.set_defaults(func=cmd_game_value)
    p = game.add_parser("best", help="best deterministic value")
    p.add_argument("game")
    p.set_defaults(func=cmd_game_best)
    p = game.add_parser("from-model", help="strategy table from an empirical model")
    p.add_argument("model")
    p.add_argument("--alice")
    p.add_argument("--bob")
    p.set_defaults(func=cmd_game_from_model)

    ks = sub.add_parser("ks", help="Kochen-Specker colouring").add_subparsers(dest="cmd", required=True)
    p = ks.add_parser("check", help="colourability of a ray set")
    p.add_argument("file")
    p.add_argument("--fail-on-uncolorable", action="store_true")
    p.set_defaults(func=cmd_ks_check)
    p = ks.add_parser("peres", help="Peres' 33-ray set")
    p.add_argument("--list", action="store_true", help="include the rays")
    p.set_defaults(func=cmd_ks_peres)

    spec = sub.add_parser("spectrum", help="twist spectra").add_subparsers(dest="cmd", required=True)
    p = spec.add_parser("alpha", help="fractional angular momentum")
    _theta_args(p)
    p.set_defaults(func=cmd_spec_alpha)
    p = spec.add_parser("hardy", help="Hardy exclusion constant")
    p.add_argument("--d", type=int, required=True, choices=(2, 3))
    _theta_args(p)
    p.set_defaults(func=cmd_spec_hardy)
    p = spec.add_parser("circle", help="circle spectrum window")
    _theta_args(p)
    p.add_argument("--n-min", type=int, default=-3)
    p.add_argument("--n-max", type=int, default=3)
    p.set_defaults(func=cmd_spec_circle)
    return parser


def _render(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2, default=_num)
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k, x in v.items():
                walk(f"{prefix}.{k}" if prefix else k, x)
        else:
            lines.append(f"{prefix}: {json.dumps(v, default=_num)}")

    walk("", report)
    return "\n".join(lines)


def _hoist_globals(argv):
    # global flags may appear after the subcommand too
    front, rest = [], []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--no-timing":
            front.append(a)
        elif a == "--format" and i + 1 < len(argv):
            front += argv[i : i + 2]
            i += 1
        elif a.startswith("--format="):
            front.append(a)
        else:
            rest.append(a)
        i += 1
    return front + rest


def dispatch(argv) -> int:
    return main(argv)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_hoist_globals(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    srcs: list[Source] = []
    start = time.perf_counter()
    code = 0
    try:
        result = args.func(args, srcs)
    except NegativeVerdict as nv:
        result, code = nv.args[0], 1
    except (InputError, ValueError, TypeError, KeyError, RuntimeError) as exc:
        print(f"holokit: error: {exc}", file=sys.stderr)
        return 2
    report = {
        "tool": "holokit",
        "version": __version__,
        "command": argv,
        "input_digest": [s.digest for s in srcs],
        "result": result,
    }
    if not (args.no_timing or os.environ.get("HOLOKIT_NO_TIMING")):
        report["timing_ms"] = round((time.perf_counter() - start) * 1000, 3)
    print(_render(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
