from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from holokit import games
from holokit.contextuality import (
    BudgetExceededError,
    Coherent,
    EmpiricalModel,
    IncoherentModelError,
    Scenario,
    ScenarioError,
    Table,
    bell_scenario,
    builtin_models,
    check_local_coherence,
    chsh_model,
    classify,
    global_system,
    hidden_variable_model,
    local_coherence_violations,
    marginalize,
    model_from_json,
    model_to_json,
    pr_box_model,
    tensor,
    verify_certificate,
    verify_classification,
    verify_witness,
)
from oracles import fm_feasible

F = Fraction
H = F(1, 2)
OBS = ("a", "alpha", "b", "beta")
CTXS = (("a", "b"), ("a", "beta"), ("alpha", "b"), ("alpha", "beta"))
SECTIONS = [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]

# reference tables, rows in context order, columns (0,0) (0,1) (1,0) (1,1)
HIDDEN = [[H, 0, 0, H]] * 4
PR = [[H, 0, 0, H]] * 3 + [[0, H, H, 0]]
CHSH = [[H, 0, 0, H], [F(3, 8), F(1, 8), F(1, 8), F(3, 8)], [F(3, 8), F(1, 8), F(1, 8), F(3, 8)], [F(1, 8), F(3, 8), F(3, 8), F(1, 8)]]


def bell(rows, name=""):
    return EmpiricalModel(bell_scenario(), dict(zip(CTXS, rows)), name)


def deterministic_rows(g):
    """Bell tables of the global assignment ``g`` (dict observable -> 0/1)."""
    out = []
    for c in CTXS:
        row = [F(0)] * 4
        row[2 * g[c[0]] + g[c[1]]] = F(1)
        out.append(row)
    return out


def pr_rows(r, s, t):
    """PR-box variant: b xor a = (x and y) xor r, with relabelled inputs."""
    out = []
    for c in CTXS:
        x, y = int(c[0] == "alpha"), int(c[1] == "beta")
        row = []
        for a, b in itertools.product((0, 1), repeat=2):
            row.append(H if (a ^ b) == ((x ^ s) & (y ^ t)) ^ r else F(0))
        out.append(row)
    return out


def mix(parts):
    return [[sum(w * rows[k][i] for w, rows in parts) for i in range(4)] for k in range(4)]


def random_bell_rows(rng: random.Random):
    """Convex mixture of deterministic tables and PR-box variants."""
    dets = [dict(zip(OBS, bits)) for bits in itertools.product((0, 1), repeat=4)]
    pool = [deterministic_rows(d) for d in dets] + [pr_rows(*v) for v in itertools.product((0, 1), repeat=3)]
    picks = rng.sample(pool, rng.randint(1, 4))
    ws = [F(rng.randint(1, 6)) for _ in picks]
    tot = sum(ws)
    return mix([(w / tot, rows) for w, rows in zip(ws, picks)])


# independent oracles over the 16 global assignments


def oracle_probabilistic(rows) -> bool:
    """True iff some global distribution reproduces every table."""
    globals_ = list(itertools.product((0, 1), repeat=4))
    A, b = [], []
    for c, row in zip(CTXS, rows):
        i, j = OBS.index(c[0]), OBS.index(c[1])
        for k, (x, y) in enumerate(itertools.product((0, 1), repeat=2)):
            A.append([1 if (g[i], g[j]) == (x, y) else 0 for g in globals_])
            b.append(row[k])
    return fm_feasible(A, b)


def oracle_possibilistic(rows):
    """(strong, logical) by enumerating global assignments against supports."""
    def fits(g):
        for c, row in zip(CTXS, rows):
            i, j = OBS.index(c[0]), OBS.index(c[1])
            if row[2 * g[i] + g[j]] == 0:
                return False
        return True

    good = [g for g in itertools.product((0, 1), repeat=4) if fits(g)]
    logical = False
    for c, row in zip(CTXS, rows):
        i, j = OBS.index(c[0]), OBS.index(c[1])
        for k, p in enumerate(row):
            if p and not any(2 * g[i] + g[j] == k for g in good):
                logical = True
    return not good, logical or not good


# marginals


def test_marginal_examples():
    t = hidden_variable_model().table(("a", "b"))
    assert marginalize(t, ("a", "b")) == t
    assert marginalize(t, ("a",)).probs == {("0",): H, ("1",): H}
    assert marginalize(t, ()).probs == {(): 1}
    with pytest.raises(ScenarioError):
        marginalize(t, ("beta",))


@given(st.lists(st.integers(0, 9), min_size=8, max_size=8).filter(any))
def test_marginalization_composes(ws):
    tot = sum(ws)
    probs = {s: F(w, tot) for s, w in zip(itertools.product("01", repeat=3), ws)}
    t = Table(("x", "y", "z"), probs)
    assert marginalize(marginalize(t, ("x", "z")), ("z",)) == marginalize(t, ("z",))
    assert marginalize(t, ("y",)).total() == 1


# coherence


def test_builtins_are_coherent():
    for m in builtin_models().values():
        assert isinstance(check_local_coherence(m), Coherent)


def test_broken_pr_box_violates_on_b():
    rows = [list(r) for r in PR]
    rows[0] = [F(1), F(0), F(0), F(0)]
    m = bell(rows)
    vs = local_coherence_violations(m)
    hits = [v for v in vs if (v.context, v.other, v.overlap) == (("a", "b"), ("alpha", "b"), ("b",))]
    assert hits and {v.section for v in hits} == {("0",), ("1",)}
    assert hits[0].value == 1 and hits[0].other_value == H
    assert not check_local_coherence(m).ok
    with pytest.raises(IncoherentModelError):
        classify(m)


def test_single_context_is_coherent():
    sc = Scenario(["x", "y"], ["0", "1"], [["x", "y"]])
    m = EmpiricalModel(sc, {("x", "y"): ["1/4"] * 4})
    assert check_local_coherence(m).ok
    assert classify(m).verdict == "non_contextual"


def test_model_validation():
    sc = bell_scenario()
    with pytest.raises(ScenarioError):
        EmpiricalModel(sc, dict(zip(CTXS, [[H, H, 0, H]] * 4)))
    with pytest.raises(ScenarioError):
        EmpiricalModel(sc, dict(zip(CTXS[:3], HIDDEN)))
    with pytest.raises(ScenarioError):
        EmpiricalModel(sc, dict(zip(CTXS, [[2, -1, 0, 0]] * 4)))
    with pytest.raises(ScenarioError):
        Scenario(["x"], ["0"], [["y"]])


# classification


def test_hidden_variable_model():
    m = hidden_variable_model()
    r = classify(m)
    assert r.verdict == "non_contextual"
    assert r.witness.probs == {("0",) * 4: H, ("1",) * 4: H}
    assert verify_witness(m, r.witness) and verify_classification(m, r)


def test_pr_box():
    m = pr_box_model()
    r = classify(m)
    assert r.contextual and r.logically_contextual and r.strongly_contextual
    assert r.compatible_global_sections == 0
    assert verify_certificate(m, r.certificate)


def test_chsh_model():
    m = chsh_model()
    r = classify(m)
    assert r.contextual and not r.strongly_contextual and not r.logically_contextual
    assert verify_classification(m, r)


def test_builtins_match_reference_tables():
    for m, rows in ((hidden_variable_model(), HIDDEN), (pr_box_model(), PR), (chsh_model(), CHSH)):
        assert m == bell(rows)


def test_logical_but_not_strong():
    zeros = deterministic_rows(dict.fromkeys(OBS, 0))
    m = bell(mix([(H, pr_rows(0, 0, 0)), (H, zeros)]))
    r = classify(m)
    assert r.verdict == "logically_contextual"
    assert r.compatible_global_sections > 0
    assert verify_classification(m, r)


def test_lp_system_shape():
    system, globals_, labels = global_system(chsh_model())
    assert system.n_vars == 16 and len(globals_) == 16
    assert system.n_rows == 17 and labels[-1] == ("normalization",)


def test_certificate_does_not_verify_for_another_model():
    r = classify(pr_box_model())
    assert not verify_certificate(hidden_variable_model(), r.certificate)


@pytest.mark.parametrize("seed", range(3))
def test_agrees_with_oracles(seed):
    rng = random.Random(seed)
    for _ in range(15):
        rows = random_bell_rows(rng)
        m = bell(rows)
        r = classify(m)
        assert (not r.contextual) == oracle_probabilistic(rows)
        assert (r.strongly_contextual, r.logically_contextual) == oracle_possibilistic(rows)
        assert verify_classification(m, r)


@given(st.integers(0, 10_000))
def test_hierarchy(seed):
    rng = random.Random(seed)
    r = classify(bell(random_bell_rows(rng)))
    assert not r.strongly_contextual or r.logically_contextual
    assert not r.logically_contextual or r.contextual


def test_tensor_models():
    hv = hidden_variable_model()
    t = tensor(hv, hv)
    assert len(t.scenario.contexts) == 16
    r = classify(t)
    assert not r.contextual and verify_witness(t, r.witness)
    assert classify(tensor(hv, pr_box_model())).strongly_contextual


@pytest.mark.parametrize("name", ["hidden-variable", "pr-box", "chsh"])
def test_json_round_trip(name):
    m = builtin_models()[name]
    back = model_from_json(model_to_json(m))
    assert back == m and back.name == m.name
    assert model_to_json(back) == model_to_json(m)


@pytest.mark.parametrize("name", ["hidden-variable", "pr-box", "chsh"])
def test_relabelled_models_classify_identically(name):
    m = builtin_models()[name]
    doc = model_to_json(m)
    ren = {"a": "z1", "alpha": "z2", "b": "y1", "beta": "y2"}
    doc["observables"] = [ren[o] for o in reversed(doc["observables"])]
    for c in doc["contexts"]:
        c["observables"] = [ren[o] for o in c["observables"]]
    r1, r2 = classify(m), classify(model_from_json(doc))
    assert r1.verdict == r2.verdict


def test_budget_is_enforced(monkeypatch):
    monkeypatch.setenv("HOLOKIT_ENUM_BUDGET", "8")
    with pytest.raises(BudgetExceededError):
        classify(chsh_model())


@pytest.mark.parametrize("name", ["hidden-variable", "pr-box", "chsh"])
def test_coherence_implies_no_signalling(name):
    m = builtin_models()[name]
    strat = games.model_to_strategy(m, ("a", "alpha"), ("b", "beta"))
    assert games.check_no_signalling(strat).ok
    # direct translation: sum_b P(a,b|x,y) is independent of y
    for x, alice in enumerate(("a", "alpha")):
        for a in range(2):
            vals = {sum(strat.P[x][y][a]) for y in range(2)}
            assert len(vals) == 1
            assert vals.pop() == marginalize(m.table((alice, "b")), (alice,)).probs[(str(a),)]
