import random

from hypothesis import given, settings
from hypothesis import strategies as st

from narrative_tension.formula import (BOTTOM, TOP, And, Iff, Implies, Not, Or, TimedAtom, atom,
                                       conj, evaluate, models, parse)
from narrative_tension.sat import Solver, entails, is_consistent

from generators import random_formula
from oracles import satisfiable, vocabulary

P = parse


def test_consistency_examples(cwa):
    assert not is_consistent([P("a@0"), P("!a@0")])
    assert is_consistent([])
    assert is_consistent([P("!box@0"), P("box@1"), *cwa])
    assert not is_consistent([BOTTOM])
    assert is_consistent([TOP])


def test_entailment_examples():
    assert entails([P("a@0")], P("a@0 | b@0"))
    assert not entails([], P("a@0"))
    premises = [P("!visible@0 & visible@1 -> C@0"), P("!visible@0"), P("visible@1")]
    assert entails(premises, P("C@0"))


def test_cwa_example_by_truth_table():
    premises = [P("!visible@0 & visible@1 -> C@0"), P("!visible@0"), P("visible@1")]
    vocab = vocabulary(premises)
    assert len(vocab) == 3
    ms = models(premises, vocab)
    assert ms and all(m.satisfies(P("C@0")) for m in ms)


def test_cwa_axiom_present_in_story(cwa):
    assert P("!visible@0 & visible@1 -> C@0") in cwa


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sat_agrees_with_enumeration(seed):
    rng = random.Random(seed)
    names = ["p", "q", "r", "s"]
    fs = [random_formula(rng, names, 2, depth=3) for _ in range(rng.randint(1, 4))]
    vocab = vocabulary(fs)
    assert len(vocab) <= 12
    assert is_consistent(fs) == satisfiable(fs, vocab)
    f = conj(fs)
    assert entails([], f) == (not models(Not(f), vocab))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_consistency_monotone(seed):
    rng = random.Random(seed)
    fs = [random_formula(rng, ["p", "q", "r"], 1, depth=2) for _ in range(rng.randint(0, 5))]
    psi = random_formula(rng, ["p", "q", "r"], 1, depth=2)
    if is_consistent(fs + [psi]):
        assert is_consistent(fs)


def test_assumptions_and_core():
    s = Solver()
    a, b, c = (s.lit(atom(n, 0)) for n in "abc")
    s.add_formula(P("a@0 -> b@0"))
    s.add_formula(P("b@0 -> !c@0"))
    assert s.solve([a])
    assert s.value(atom("b", 0))
    assert not s.solve([a, c])
    assert s.core <= {a, c} and s.core
    # solver stays usable after an UNSAT call under assumptions
    assert s.solve([c])
    assert not s.model()[TimedAtom("a", 0)]


def test_pigeonhole_unsat():
    # 5 pigeons, 4 holes: forces real conflict analysis
    holes, pigeons = 4, 5
    x = {(p, h): atom(f"x{p}", h) for p in range(pigeons) for h in range(holes)}
    fs = [Or(Or(x[p, 0], x[p, 1]), Or(x[p, 2], x[p, 3])) for p in range(pigeons)]
    for h in range(holes):
        for p in range(pigeons):
            for q in range(p + 1, pigeons):
                fs.append(Not(And(x[p, h], x[q, h])))
    s = Solver()
    for f in fs:
        s.add_formula(f)
    assert not s.solve()
    assert s.conflicts > 0


def test_random_3sat_against_enumeration():
    rng = random.Random(7)
    for _ in range(60):
        n = 10
        clauses = []
        for _ in range(rng.randint(20, 50)):
            lits = []
            for v in rng.sample(range(n), 3):
                a = atom("v", v)
                lits.append(a if rng.random() < 0.5 else Not(a))
            clauses.append(Or(Or(lits[0], lits[1]), lits[2]))
        assert is_consistent(clauses) == satisfiable(clauses)
        s = Solver()
        for c in clauses:
            s.add_formula(c)
        if s.solve():
            m = s.model()
            assert all(evaluate(c, m) for c in clauses)


def test_iff_and_constants_encoding():
    assert entails([], Iff(P("a@0"), Not(Not(P("a@0")))))
    assert entails([BOTTOM], P("a@0"))
    assert not entails([TOP], BOTTOM)
    assert entails([P("a@0 <-> b@0"), P("a@0")], P("b@0"))
    assert entails([], Implies(BOTTOM, P("z@3")))
