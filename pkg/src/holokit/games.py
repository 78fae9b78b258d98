"""Two-player nonlocal games.

A game has question sets ``X``, ``Y``, answer sets ``A``, ``B``, an explicit
win table ``W[x][y][a][b]`` and a question distribution ``pi[x][y]``.
Strategies come in three shapes (deterministic, local, no-signalling table);
the first two are lowered to a conditional table ``P(a, b | x, y)`` before
evaluation, so all values are exact Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from holokit import kernels
from holokit.contextuality import EmpiricalModel, BudgetExceededError, enumeration_budget
from holokit.exactnum.rational import format_rational, parse_rational


class ShapeError(ValueError):
    pass


class PairingError(ValueError):
    pass


@dataclass(frozen=True)
class NonlocalGame:
    questions_a: tuple
    questions_b: tuple
    answers_a: tuple
    answers_b: tuple
    win: tuple  # win[x][y][a][b] -> bool
    pi: tuple  # pi[x][y] -> Fraction
    name: str = ""

    def __post_init__(self):
        nx, ny, na, nb = self.shape
        if min(nx, ny, na, nb) < 1:
            raise ShapeError("question and answer sets must be nonempty")
        win = tuple(tuple(tuple(tuple(bool(v) for v in row) for row in wxy) for wxy in wx) for wx in self.win)
        if len(win) != nx or any(len(wx) != ny for wx in win):
            raise ShapeError("win table does not match the question sets")
        if any(len(wxy) != na or any(len(r) != nb for r in wxy) for wx in win for wxy in wx):
            raise ShapeError("win table does not match the answer sets")
        pi = tuple(tuple(parse_rational(v) for v in row) for row in self.pi)
        if len(pi) != nx or any(len(r) != ny for r in pi):
            raise ShapeError("question distribution does not match the question sets")
        if any(p < 0 for r in pi for p in r) or sum(sum(r) for r in pi) != 1:
            raise ShapeError("question distribution must be nonnegative and sum to 1")
        object.__setattr__(self, "win", win)
        object.__setattr__(self, "pi", pi)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return len(self.questions_a), len(self.questions_b), len(self.answers_a), len(self.answers_b)

    @classmethod
    def from_predicate(cls, X, Y, A, B, predicate, pi=None, name=""):
        win = [[[[predicate(x, y, a, b) for b in B] for a in A] for y in Y] for x in X]
        if pi is None:
            pi = uniform(len(X), len(Y))
        return cls(tuple(X), tuple(Y), tuple(A), tuple(B), win, pi, name)


def uniform(nx: int, ny: int):
    p = Fraction(1, nx * ny)
    return [[p] * ny for _ in range(nx)]


def chsh_game(pi=None) -> NonlocalGame:
    """Win iff ``a XOR b == x AND y``; uniform questions by default."""
    return NonlocalGame.from_predicate((0, 1), (0, 1), (0, 1), (0, 1), lambda x, y, a, b: (a ^ b) == (x & y), pi, "chsh")


# strategies ---------------------------------------------------------------


@dataclass(frozen=True)
class DeterministicStrategy:
    f_a: tuple  # f_a[x] = answer index
    f_b: tuple

    def table(self, na: int, nb: int):
        out = []
        for fa in self.f_a:
            out.append([[[Fraction(int(a == fa and b == fb)) for b in range(nb)] for a in range(na)] for fb in self.f_b])
        return out


@dataclass(frozen=True)
class LocalStrategy:
    p_a: tuple  # p_a[x][a]
    p_b: tuple  # p_b[y][b]

    def __post_init__(self):
        pa = tuple(tuple(parse_rational(v) for v in r) for r in self.p_a)
        pb = tuple(tuple(parse_rational(v) for v in r) for r in self.p_b)
        for r in pa + pb:
            if sum(r) != 1 or any(v < 0 for v in r):
                raise ShapeError("local strategy rows must be distributions")
        object.__setattr__(self, "p_a", pa)
        object.__setattr__(self, "p_b", pb)

    def table(self, na: int, nb: int):
        return [[[[pa[a] * pb[b] for b in range(nb)] for a in range(na)] for pb in self.p_b] for pa in self.p_a]


@dataclass(frozen=True)
class NoSignallingStrategy:
    """A conditional table ``P[x][y][a][b]``; no-signalling is checked, not assumed."""

    P: tuple

    def __post_init__(self):
        P = tuple(tuple(tuple(tuple(parse_rational(v) for v in r) for r in pxy) for pxy in px) for px in self.P)
        for px in P:
            for pxy in px:
                if any(v < 0 for r in pxy for v in r) or sum(sum(r) for r in pxy) != 1:
                    raise ShapeError("each P(.,.|x,y) must be a distribution")
        object.__setattr__(self, "P", P)

    def table(self, na: int, nb: int):
        return self.P


def lower(strategy, game: NonlocalGame) -> NoSignallingStrategy:
    nx, ny, na, nb = game.shape
    _check_shape(strategy, game)
    if isinstance(strategy, NoSignallingStrategy):
        return strategy
    return NoSignallingStrategy(strategy.table(na, nb))


def _check_shape(strategy, game):
    nx, ny, na, nb = game.shape
    if isinstance(strategy, DeterministicStrategy):
        ok = (
            len(strategy.f_a) == nx
            and len(strategy.f_b) == ny
            and all(0 <= a < na for a in strategy.f_a)
            and all(0 <= b < nb for b in strategy.f_b)
        )
    elif isinstance(strategy, LocalStrategy):
        ok = (
            len(strategy.p_a) == nx
            and len(strategy.p_b) == ny
            and all(len(r) == na for r in strategy.p_a)
            and all(len(r) == nb for r in strategy.p_b)
        )
    elif isinstance(strategy, NoSignallingStrategy):
        ok = _table_shape(strategy.P) == (nx, ny, na, nb)
    else:
        raise TypeError(f"not a strategy: {strategy!r}")
    if not ok:
        raise ShapeError(f"strategy does not fit a game of shape {game.shape}")


def _table_shape(P):
    nx = len(P)
    ny = len(P[0]) if nx else 0
    na = len(P[0][0]) if ny else 0
    nb = len(P[0][0][0]) if na else 0
    for px in P:
        if len(px) != ny:
            return None
        for pxy in px:
            if len(pxy) != na or any(len(r) != nb for r in pxy):
                return None
    return nx, ny, na, nb


@dataclass(frozen=True)
class NoSignalling:
    ok = True


@dataclass(frozen=True)
class SignallingViolation:
    party: str  # whose marginal moves: "alice" or "bob"
    answer: int
    own_question: int
    other_questions: tuple
    values: tuple
    ok = False


def check_no_signalling(strategy: NoSignallingStrategy, shape=None) -> NoSignalling | SignallingViolation:
    P = strategy.P
    got = _table_shape(P)
    if got is None or (shape is not None and got != tuple(shape)):
        raise ShapeError(f"table shape {got} does not match {shape}")
    nx, ny, na, nb = got
    for x in range(nx):
        for a in range(na):
            marg = [sum(P[x][y][a]) for y in range(ny)]
            for y in range(1, ny):
                if marg[y] != marg[0]:
                    return SignallingViolation("alice", a, x, (0, y), (marg[0], marg[y]))
    for y in range(ny):
        for b in range(nb):
            marg = [sum(P[x][y][a][b] for a in range(na)) for x in range(nx)]
            for x in range(1, nx):
                if marg[x] != marg[0]:
                    return SignallingViolation("bob", b, y, (0, x), (marg[0], marg[x]))
    return NoSignalling()


def strategy_value(game: NonlocalGame, strategy) -> Fraction:
    P = lower(strategy, game).P
    nx, ny, na, nb = game.shape
    total = Fraction(0)
    for x in range(nx):
        for y in range(ny):
            p = game.pi[x][y]
            if not p:
                continue
            w = game.win[x][y]
            total += p * sum((P[x][y][a][b] for a in range(na) for b in range(nb) if w[a][b]), Fraction(0))
    return total


_INT64_SAFE = 2**62


def best_deterministic_value(game: NonlocalGame, budget: int | None = None, backend: str | None = None):
    """Exact optimum over all deterministic strategies.

    Returns ``(value, strategy)`` where the strategy is the lexicographically
    first argmax (answer functions compared as tuples, Alice's first).
    """
    nx, ny, na, nb = game.shape
    budget = enumeration_budget() if budget is None else budget
    size = na**nx * nb**ny
    if size > budget:
        raise BudgetExceededError(
            f"{size} deterministic strategies exceed the enumeration budget {budget}; "
            "raise it with HOLOKIT_ENUM_BUDGET or pass budget="
        )
    denom = 1
    for row in game.pi:
        for p in row:
            denom = denom * p.denominator // math.gcd(denom, p.denominator)
    weights = [0] * (nx * ny * na * nb)
    for x in range(nx):
        for y in range(ny):
            wt = int(game.pi[x][y] * denom)
            for a in range(na):
                for b in range(nb):
                    if game.win[x][y][a][b]:
                        weights[((x * ny + y) * na + a) * nb + b] = wt
    mod = kernels.get_backend(backend)
    if denom * nx * ny >= _INT64_SAFE:
        mod = kernels.get_backend("python")
    best, fa, fb = mod.best_deterministic(nx, ny, na, nb, weights)
    return Fraction(best, denom), DeterministicStrategy(tuple(fa), tuple(fb))


def model_to_strategy(model: EmpiricalModel, alice: Sequence[str], bob: Sequence[str]) -> NoSignallingStrategy:
    """Read ``P(a, b | x, y)`` off the context ``{alice[x], bob[y]}``."""
    sc = model.scenario
    pairs = {}
    for x, oa in enumerate(alice):
        for y, ob in enumerate(bob):
            ctx = sc.order((oa, ob)) if oa in sc.outcomes and ob in sc.outcomes else None
            if ctx is None or ctx not in sc.contexts or oa == ob:
                raise PairingError(f"({oa}, {ob}) is not a maximal context")
            pairs[(x, y)] = ctx
    if len(set(pairs.values())) != len(pairs) or set(pairs.values()) != set(sc.contexts):
        raise PairingError("pairing is not a bijection onto the maximal contexts")
    outs_a = {sc.outcomes[o] for o in alice}
    outs_b = {sc.outcomes[o] for o in bob}
    if len(outs_a) != 1 or len(outs_b) != 1:
        raise PairingError("each party's observables must share one outcome set")
    A, B = outs_a.pop(), outs_b.pop()
    P = []
    for x, oa in enumerate(alice):
        row = []
        for y, ob in enumerate(bob):
            t = model.tables[pairs[(x, y)]]
            a_first = t.observables[0] == oa
            row.append([[t[(a, b) if a_first else (b, a)] for b in B] for a in A])
        P.append(row)
    return NoSignallingStrategy(P)


# serialization --------------------------------------------------------------


def game_to_json(game: NonlocalGame) -> dict:
    nx, ny, na, nb = game.shape
    return {
        "name": game.name,
        "questions": {"alice": [str(q) for q in game.questions_a], "bob": [str(q) for q in game.questions_b]},
        "answers": {"alice": [str(a) for a in game.answers_a], "bob": [str(b) for b in game.answers_b]},
        "win": [
            ["".join("W" if game.win[x][y][a][b] else "L" for a in range(na) for b in range(nb)) for y in range(ny)]
            for x in range(nx)
        ],
        "pi": [[format_rational(p) for p in row] for row in game.pi],
    }


def game_from_json(obj) -> NonlocalGame:
    try:
        X, Y = obj["questions"]["alice"], obj["questions"]["bob"]
        A, B = obj["answers"]["alice"], obj["answers"]["bob"]
        rows = obj["win"]
    except (KeyError, TypeError) as exc:
        raise ShapeError(f"malformed game document: {exc}") from exc
    nx, ny, na, nb = len(X), len(Y), len(A), len(B)
    if len(rows) != nx or any(len(r) != ny for r in rows):
        raise ShapeError("win rows must be indexed [x][y]")
    win = []
    for x in range(nx):
        wx = []
        for y in range(ny):
            s = rows[x][y]
            if len(s) != na * nb or set(s) - {"W", "L"}:
                raise ShapeError(f"win entry for ({x},{y}) must be {na * nb} letters W/L")
            wx.append([[s[a * nb + b] == "W" for b in range(nb)] for a in range(na)])
        win.append(wx)
    pi = obj.get("pi") or uniform(nx, ny)
    return NonlocalGame(tuple(X), tuple(Y), tuple(A), tuple(B), win, pi, obj.get("name", ""))


def strategy_to_json(strategy) -> dict:
    if isinstance(strategy, DeterministicStrategy):
        return {"kind": "deterministic", "f_a": list(strategy.f_a), "f_b": list(strategy.f_b)}
    if isinstance(strategy, LocalStrategy):
        enc = lambda rows: [[format_rational(v) for v in r] for r in rows]  # noqa: E731
        return {"kind": "local", "p_a": enc(strategy.p_a), "p_b": enc(strategy.p_b)}
    return {
        "kind": "nosignalling",
        "P": [[[[format_rational(v) for v in r] for r in pxy] for pxy in px] for px in strategy.P],
    }


def strategy_from_json(obj):
    kind = obj.get("kind")
    if kind == "deterministic":
        return DeterministicStrategy(tuple(int(v) for v in obj["f_a"]), tuple(int(v) for v in obj["f_b"]))
    if kind == "local":
        return LocalStrategy(obj["p_a"], obj["p_b"])
    if kind == "nosignalling":
        return NoSignallingStrategy(obj["P"])
    raise ShapeError(f"unknown strategy kind {kind!r}")
