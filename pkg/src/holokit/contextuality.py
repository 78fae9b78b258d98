"""Measurement scenarios, empirical models and contextuality.

Every probability is a :class:`~fractions.Fraction`; the classification is a
logical verdict and never depends on a floating tolerance.

Three levels are decided:

* probabilistic contextuality -- no global distribution on ``O^M`` whose
  marginals reproduce every context table (exact LP feasibility);
* logical contextuality -- some section in the support of some context
  table has no global assignment compatible with all supports;
* strong contextuality -- no global assignment at all is compatible with
  all supports.

The logical level follows the usual possibilistic definition from the
sheaf-theoretic literature.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from holokit import kernels
from holokit.exactnum import LinearSystem, check_farkas, check_witness, lp_feasible
from holokit.exactnum.rational import format_rational, parse_rational

DEFAULT_BUDGET = 10**8


def enumeration_budget() -> int:
    return int(os.environ.get("HOLOKIT_ENUM_BUDGET", DEFAULT_BUDGET))


class ScenarioError(ValueError):
    pass


class IncoherentModelError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class Scenario:
    observables: tuple
    outcomes: Mapping  # observable -> tuple of outcome labels
    contexts: tuple  # each a tuple of observables in scenario order

    def __init__(self, observables: Sequence[str], outcomes, contexts: Sequence[Sequence[str]]):
        obs = tuple(observables)
        if len(set(obs)) != len(obs):
            raise ScenarioError("duplicate observable names")
        if isinstance(outcomes, Mapping):
            outs = {o: tuple(outcomes[o]) for o in obs}
        else:
            shared = tuple(outcomes)
            outs = {o: shared for o in obs}
        for o, vals in outs.items():
            if not vals:
                raise ScenarioError(f"observable {o!r} has no outcomes")
            if len(set(vals)) != len(vals):
                raise ScenarioError(f"observable {o!r} has repeated outcomes")
        pos = {o: i for i, o in enumerate(obs)}
        ctxs = []
        for c in contexts:
            unknown = [o for o in c if o not in pos]
            if unknown:
                raise ScenarioError(f"context {list(c)} uses unknown observables {unknown}")
            if len(set(c)) != len(c):
                raise ScenarioError(f"context {list(c)} repeats an observable")
            ctxs.append(tuple(sorted(c, key=pos.__getitem__)))
        if len(set(ctxs)) != len(ctxs):
            raise ScenarioError("duplicate contexts")
        for c1, c2 in itertools.permutations(ctxs, 2):
            if set(c1) <= set(c2):
                raise ScenarioError(f"context {list(c1)} is contained in {list(c2)}; contexts must be maximal")
        covered = set().union(*map(set, ctxs)) if ctxs else set()
        missing = [o for o in obs if o not in covered]
        if missing:
            raise ScenarioError(f"observables {missing} appear in no context")
        object.__setattr__(self, "observables", obs)
        object.__setattr__(self, "outcomes", outs)
        object.__setattr__(self, "contexts", tuple(ctxs))

    def __hash__(self):
        return hash((self.observables, self.contexts))

    def order(self, observables) -> tuple:
        pos = {o: i for i, o in enumerate(self.observables)}
        return tuple(sorted(observables, key=pos.__getitem__))

    def sections(self, observables) -> list[tuple]:
        """All outcome assignments on ``observables`` in lexicographic order."""
        return list(itertools.product(*(self.outcomes[o] for o in observables)))


@dataclass(frozen=True)
class Table:
    """A distribution over outcome assignments to ``observables``."""

    observables: tuple
    probs: Mapping  # section tuple -> Fraction, every section present

    def __getitem__(self, section) -> Fraction:
        return self.probs[tuple(section)]

    def total(self) -> Fraction:
        return sum(self.probs.values(), Fraction(0))

    def support(self) -> list[tuple]:
        return [s for s, p in self.probs.items() if p != 0]

    def __eq__(self, other):
        return isinstance(other, Table) and self.observables == other.observables and dict(self.probs) == dict(other.probs)

    def __hash__(self):
        return hash((self.observables, tuple(sorted(self.probs.items()))))


def marginalize(table: Table, sub: Sequence[str]) -> Table:
    """Sum out every observable not in ``sub``.

    The result lists ``sub`` in the table's own observable order.  The
    empty subcontext gives the unit mass on the empty section.
    """
    pos = {o: i for i, o in enumerate(table.observables)}
    missing = [o for o in sub if o not in pos]
    if missing:
        raise ScenarioError(f"{missing} not in context {list(table.observables)}")
    keep = tuple(sorted(set(sub), key=pos.__getitem__))
    idx = [pos[o] for o in keep]
    out: dict[tuple, Fraction] = {}
    for s, p in table.probs.items():
        t = tuple(s[i] for i in idx)
        out[t] = out.get(t, Fraction(0)) + p
    return Table(keep, out)


class EmpiricalModel:
    def __init__(self, scenario: Scenario, tables: Mapping[Sequence[str], object], name: str = ""):
        self.scenario = scenario
        self.name = name
        built: dict[tuple, Table] = {}
        for key, vals in tables.items():
            ctx = scenario.order(key)
            if ctx not in scenario.contexts:
                raise ScenarioError(f"{list(key)} is not a maximal context of the scenario")
            sections = scenario.sections(ctx)
            if isinstance(vals, Mapping):
                probs = {tuple(s): parse_rational(vals.get(s, vals.get(tuple(s), 0))) for s in sections}
                extra = set(map(tuple, vals)) - set(sections)
                if extra:
                    raise ScenarioError(f"context {list(ctx)} has unknown sections {sorted(extra)}")
            else:
                vals = list(vals)
                if len(vals) != len(sections):
                    raise ScenarioError(f"context {list(ctx)} needs {len(sections)} probabilities, got {len(vals)}")
                probs = {s: parse_rational(v) for s, v in zip(sections, vals)}
            bad = [s for s, p in probs.items() if not 0 <= p <= 1]
            if bad:
                raise ScenarioError(f"context {list(ctx)} has probabilities outside [0, 1] at {bad}")
            table = Table(ctx, probs)
            if table.total() != 1:
                raise ScenarioError(f"context {list(ctx)} sums to {format_rational(table.total())}, not 1")
            built[ctx] = table
        missing = [list(c) for c in scenario.contexts if c not in built]
        if missing:
            raise ScenarioError(f"no table for contexts {missing}")
        self.tables = built

    def table(self, context) -> Table:
        return self.tables[self.scenario.order(context)]

    def __eq__(self, other):
        return isinstance(other, EmpiricalModel) and self.scenario == other.scenario and self.tables == other.tables

    def __repr__(self):
        return f"EmpiricalModel({self.name or 'unnamed'}, contexts={len(self.tables)})"


# local coherence ---------------------------------------------------------


@dataclass(frozen=True)
class Coherent:
    ok = True


@dataclass(frozen=True)
class Violation:
    context: tuple
    other: tuple
    overlap: tuple
    section: tuple
    value: Fraction
    other_value: Fraction
    ok = False


def local_coherence_violations(model: EmpiricalModel) -> list[Violation]:
    out = []
    ctxs = model.scenario.contexts
    for c1, c2 in itertools.combinations(ctxs, 2):
        overlap = tuple(o for o in c1 if o in c2)
        m1 = marginalize(model.tables[c1], overlap)
        m2 = marginalize(model.tables[c2], overlap)
        for s in model.scenario.sections(overlap):
            if m1[s] != m2[s]:
                out.append(Violation(c1, c2, overlap, s, m1[s], m2[s]))
    return out


def check_local_coherence(model: EmpiricalModel) -> Coherent | Violation:
    v = local_coherence_violations(model)
    return v[0] if v else Coherent()


# classification ----------------------------------------------------------


@dataclass(frozen=True)
class GlobalDistribution:
    observables: tuple
    probs: Mapping  # global section -> Fraction (zero entries omitted)

    def marginal(self, context, scenario: Scenario) -> Table:
        full = {s: self.probs.get(s, Fraction(0)) for s in scenario.sections(self.observables)}
        return marginalize(Table(self.observables, full), context)

    def support(self) -> list[tuple]:
        return [s for s, p in self.probs.items() if p]


@dataclass(frozen=True)
class FarkasCertificate:
    """Exact proof that no global distribution exists.

    ``y`` has one entry per LP row; ``rows`` names each row as
    ``(context, section)`` or ``("normalization",)``.  With ``A`` and ``b``
    the marginal constraints over global sections ordered by
    ``observables``, ``y^T A <= 0`` and ``y^T b > 0``.
    """

    y: tuple
    rows: tuple
    observables: tuple


@dataclass(frozen=True)
class Classification:
    contextual: bool
    logically_contextual: bool
    strongly_contextual: bool
    witness: GlobalDistribution | None = None
    certificate: FarkasCertificate | None = None
    compatible_global_sections: int = 0

    @property
    def verdict(self) -> str:
        if self.strongly_contextual:
            return "strongly_contextual"
        if self.logically_contextual:
            return "logically_contextual"
        return "contextual" if self.contextual else "non_contextual"


def global_system(model: EmpiricalModel) -> tuple[LinearSystem, list[tuple], list[tuple]]:
    """Marginal constraints ``f|_C = P_C`` plus ``sum f = 1`` as ``A f = b``.

    Returns the system, the global sections (variable order) and the row
    labels.
    """
    sc = model.scenario
    globals_ = sc.sections(sc.observables)
    budget = enumeration_budget()
    if len(globals_) > budget:
        raise BudgetExceededError(f"{len(globals_)} global sections exceed the budget {budget}")
    pos = {o: i for i, o in enumerate(sc.observables)}
    A, b, labels = [], [], []
    for ctx in sc.contexts:
        idx = [pos[o] for o in ctx]
        row_of = {s: k for k, s in enumerate(sc.sections(ctx))}
        rows = [[0] * len(globals_) for _ in row_of]
        for v, g in enumerate(globals_):
            rows[row_of[tuple(g[i] for i in idx)]][v] = 1
        for s, k in row_of.items():
            A.append(rows[k])
            b.append(model.tables[ctx][s])
            labels.append((ctx, s))
    A.append([1] * len(globals_))
    b.append(Fraction(1))
    labels.append(("normalization",))
    return LinearSystem(A, b, len(globals_)), globals_, labels


def _possibilistic(model: EmpiricalModel):
    sc = model.scenario
    pos = {o: i for i, o in enumerate(sc.observables)}
    radix = [len(sc.outcomes[o]) for o in sc.observables]
    total = 1
    for r in radix:
        total *= r
    budget = enumeration_budget()
    if total > budget:
        raise BudgetExceededError(f"{total} global assignments exceed the budget {budget}")
    ctx_ptr, ctx_obs, sup_ptr, support = [0], [], [0], []
    for ctx in sc.contexts:
        ctx_obs.extend(pos[o] for o in ctx)
        ctx_ptr.append(len(ctx_obs))
        t = model.tables[ctx]
        support.extend(1 if t[s] != 0 else 0 for s in sc.sections(ctx))
        sup_ptr.append(len(support))
    count, covered, _ = kernels.global_sections(radix, ctx_ptr, ctx_obs, sup_ptr, support)
    uncovered = any(s and not c for s, c in zip(support, covered))
    return count, uncovered


def classify(model: EmpiricalModel) -> Classification:
    violations = local_coherence_violations(model)
    if violations:
        v = violations[0]
        raise IncoherentModelError(
            f"model is not locally coherent: contexts {list(v.context)} and {list(v.other)} disagree "
            f"on {list(v.overlap)}={list(v.section)}; run check_local_coherence for details"
        )
    count, uncovered = _possibilistic(model)
    strong = count == 0
    logical = uncovered or strong
    system, globals_, labels = global_system(model)
    result = lp_feasible(system)
    obs = model.scenario.observables
    if result.feasible:
        if logical:
            raise AssertionError("possibilistic and probabilistic verdicts disagree")
        probs = {g: p for g, p in zip(globals_, result.witness) if p}
        return Classification(False, False, False, witness=GlobalDistribution(obs, probs), compatible_global_sections=count)
    cert = FarkasCertificate(result.certificate, tuple(labels), obs)
    return Classification(True, logical, strong, certificate=cert, compatible_global_sections=count)


def verify_witness(model: EmpiricalModel, witness: GlobalDistribution) -> bool:
    if any(p < 0 for p in witness.probs.values()):
        return False
    if sum(witness.probs.values(), Fraction(0)) != 1:
        return False
    return all(witness.marginal(c, model.scenario) == model.tables[c] for c in model.scenario.contexts)


def verify_certificate(model: EmpiricalModel, cert: FarkasCertificate) -> bool:
    if cert.observables != model.scenario.observables:
        return False
    system, _, labels = global_system(model)
    return tuple(labels) == cert.rows and check_farkas(system, cert.y)


def verify_classification(model: EmpiricalModel, result: Classification) -> bool:
    if result.contextual:
        return result.certificate is not None and verify_certificate(model, result.certificate)
    system, globals_, _ = global_system(model)
    x = [result.witness.probs.get(g, Fraction(0)) for g in globals_]
    return check_witness(system, x) and verify_witness(model, result.witness)


# builtin models ----------------------------------------------------------

BELL_OBSERVABLES = ("a", "alpha", "b", "beta")
BELL_CONTEXTS = (("a", "b"), ("a", "beta"), ("alpha", "b"), ("alpha", "beta"))


def bell_scenario() -> Scenario:
    return Scenario(BELL_OBSERVABLES, ("0", "1"), BELL_CONTEXTS)


def _bell_model(rows, name):
    sc = bell_scenario()
    return EmpiricalModel(sc, {c: [parse_rational(v) for v in r] for c, r in zip(BELL_CONTEXTS, rows)}, name)


def hidden_variable_model() -> EmpiricalModel:
    return _bell_model([["1/2", 0, 0, "1/2"]] * 4, "hidden-variable")


def pr_box_model() -> EmpiricalModel:
    return _bell_model([["1/2", 0, 0, "1/2"]] * 3 + [[0, "1/2", "1/2", 0]], "pr-box")


def chsh_model() -> EmpiricalModel:
    return _bell_model(
        [["1/2", 0, 0, "1/2"], ["3/8", "1/8", "1/8", "3/8"], ["3/8", "1/8", "1/8", "3/8"], ["1/8", "3/8", "3/8", "1/8"]],
        "chsh",
    )


def builtin_models() -> dict[str, EmpiricalModel]:
    return {"hidden-variable": hidden_variable_model(), "pr-box": pr_box_model(), "chsh": chsh_model()}


def tensor(m1: EmpiricalModel, m2: EmpiricalModel, prefixes=("L.", "R.")) -> EmpiricalModel:
    """Independent juxtaposition: contexts ``C1 u C2`` with product tables."""
    p1, p2 = prefixes
    s1, s2 = m1.scenario, m2.scenario
    obs = [p1 + o for o in s1.observables] + [p2 + o for o in s2.observables]
    outs = {p1 + o: s1.outcomes[o] for o in s1.observables}
    outs.update({p2 + o: s2.outcomes[o] for o in s2.observables})
    ctxs, tables = [], {}
    for c1 in s1.contexts:
        for c2 in s2.contexts:
            ctx = tuple(p1 + o for o in c1) + tuple(p2 + o for o in c2)
            ctxs.append(ctx)
            t1, t2 = m1.tables[c1], m2.tables[c2]
            tables[ctx] = {a + b: t1[a] * t2[b] for a in s1.sections(c1) for b in s2.sections(c2)}
    return EmpiricalModel(Scenario(obs, outs, ctxs), tables, f"{m1.name}x{m2.name}")


# serialization -----------------------------------------------------------


def model_to_json(model: EmpiricalModel) -> dict:
    sc = model.scenario
    outs = {o: list(sc.outcomes[o]) for o in sc.observables}
    shared = list(sc.outcomes[sc.observables[0]]) if sc.observables else []
    same = all(v == shared for v in outs.values())
    return {
        "name": model.name,
        "observables": list(sc.observables),
        "outcomes": shared if same else outs,
        "contexts": [
            {
                "observables": list(c),
                "probabilities": [format_rational(model.tables[c][s]) for s in sc.sections(c)],
            }
            for c in sc.contexts
        ],
    }


def model_from_json(obj) -> EmpiricalModel:
    try:
        ctxs = [tuple(c["observables"]) for c in obj["contexts"]]
        sc = Scenario(obj["observables"], obj["outcomes"], ctxs)
        tables = {c: entry["probabilities"] for c, entry in zip(ctxs, obj["contexts"])}
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"malformed model document: {exc}") from exc
    # probabilities are listed in the document's own observable order
    fixed = {}
    for c, vals in tables.items():
        if sc.order(c) != c:
            secs = list(itertools.product(*(sc.outcomes[o] for o in c)))
            perm = [c.index(o) for o in sc.order(c)]
            fixed[c] = {tuple(s[i] for i in perm): v for s, v in zip(secs, vals)}
        else:
            fixed[c] = vals
    return EmpiricalModel(sc, fixed, obj.get("name", ""))
