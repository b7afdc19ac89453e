import itertools

import numpy as np
import pytest

import oracles as O
from combchoice.axioms import check_ire
from combchoice.catalog import lattice_example
from combchoice.core import ChoiceFunction, GroundSet, InputError, LinearOrder
from combchoice.generators import random_table
from combchoice.revealed import (
    NotBooleanLattice, NotDecisive, PureModel, check_rationalizable,
    check_transitive_rationalizable, check_warp, domain_predicates, faithful_F, faithful_G,
    rationalizes, revealed_relations, strict_is_asymmetric_part,
)

F = frozenset


def model(choice: dict) -> PureModel:
    alts = sorted(set().union(*choice))
    return PureModel(tuple(alts), tuple(F(b) for b in choice), {F(b): F(c) for b, c in choice.items()})


def nonempty_subsets(X):
    return [F(c) for k in range(1, len(X) + 1) for c in itertools.combinations(X, k)]


def test_revealed_relations_examples():
    r = revealed_relations(model({"xy": "x"}))
    assert set(r.weak) == {("x", "x"), ("x", "y")}
    assert set(r.strict) == {("x", "y")}
    r = revealed_relations(model({"xy": "xy", "xyz": "x"}))
    assert {("x", "y"), ("y", "x")} <= set(r.weak)
    assert ("x", "y") in r.strict
    assert not strict_is_asymmetric_part(model({"xy": "xy", "xyz": "x"}))
    everything = model({b: b for b in ("x", "xy", "xyz")})
    assert set(revealed_relations(everything).strict) == set()


def test_warp_examples():
    m = model({"xy": "xy", "xyz": "x"})
    r = check_warp(m)
    assert not r.holds and {r.witness["x"], r.witness["y"]} == {"x", "y"}
    assert check_warp(model({"xyz": "z"})).holds
    order = LinearOrder.parse("y > x > z")
    top_model = model({"".join(sorted(b)): O.top(b, order.ranking) for b in nonempty_subsets("xyz")})
    assert check_warp(top_model).holds


def test_rationalizable_examples():
    order = ("y", "x", "z")
    m = model({"".join(sorted(b)): O.top(b, order) for b in nonempty_subsets("xyz")})
    R = check_rationalizable(m)
    assert R is not None and R == revealed_relations(m).weak
    # y is never chosen alongside z, so R_c picks exactly {x} from {x,y,z}; the
    # rationalization exists but is not transitive
    warp_fail = model({"xy": "xy", "xyz": "x"})
    assert check_rationalizable(warp_fail) is not None
    assert check_transitive_rationalizable(warp_fail) is None
    assert check_rationalizable(model({"xy": "x", "xz": "z", "yz": "y", "xyz": "x"})) is None
    all_chosen = model({b: b for b in ("xy", "yz", "xyz")})
    R = check_rationalizable(all_chosen)
    assert len(R) == 9


def test_domain_predicates_examples():
    m = model({"".join(sorted(b)): sorted(b)[0] for b in nonempty_subsets("xyz")})
    flags = domain_predicates(m)
    assert flags.complete and flags.additive and flags.connected
    flags = domain_predicates(model({"x": "x", "y": "y"}))
    assert not flags.connected
    flags = domain_predicates(faithful_F(lattice_example()))
    assert flags.combinatorial


def _random_model(rng, X="xyz"):
    subsets = nonempty_subsets(X)
    keep = [b for b in subsets if rng.random() < 0.6] or [subsets[-1]]
    choice = {}
    for b in keep:
        items = sorted(b)
        mask = int(rng.integers(1, 1 << len(items)))
        choice[b] = F(x for i, x in enumerate(items) if mask >> i & 1)
    return PureModel(tuple(X), tuple(keep), choice)


def _all_relations(X):
    pairs = list(itertools.product(X, repeat=2))
    for bits in range(1 << len(pairs)):
        yield {p for i, p in enumerate(pairs) if bits >> i & 1}


def _greatest(rel, b):
    return F(x for x in b if all((x, y) in rel for y in b))


def _transitive(rel):
    return all((a, d) in rel for a, b in rel for c, d in rel if b == c)


def test_rationalizability_against_relation_brute_force():
    rng = np.random.default_rng(1)
    relations = list(_all_relations("xyz"))
    transitive = [r for r in relations if _transitive(r)]
    for _ in range(60):
        m = _random_model(rng)
        any_ok = any(all(_greatest(r, b) == m.choice[b] for b in m.budgets) for r in relations)
        trans_ok = any(all(_greatest(r, b) == m.choice[b] for b in m.budgets) for r in transitive)
        assert (check_rationalizable(m) is not None) == any_ok
        found = check_transitive_rationalizable(m, search_fallback=False)
        assert (found is not None) == trans_ok
        if found is not None:
            assert rationalizes(m, found)


def test_warp_on_connected_domain_gives_transitive_rationalization():
    rng = np.random.default_rng(9)
    hits = 0
    for _ in range(200):
        subsets = nonempty_subsets("xyz")
        choice = {}
        for b in subsets:
            items = sorted(b)
            mask = int(rng.integers(1, 1 << len(items)))
            choice[b] = F(x for i, x in enumerate(items) if mask >> i & 1)
        m = PureModel(tuple("xyz"), tuple(subsets), choice)
        if check_warp(m).holds:
            hits += 1
            R = check_transitive_rationalizable(m)
            assert R is not None and R.is_transitive()
    assert hits > 0


def test_faithful_F_examples():
    m = faithful_F(lattice_example())
    assert len(m.budgets) == 8 and all(len(c) == 1 for c in m.choice.values())
    g = GroundSet(("a",))
    m = faithful_F(ChoiceFunction.identity(g))
    assert set(m.alternatives) == {F(), F("a")}
    assert set(m.budgets) == {F([F()]), F([F(), F("a")])}
    assert m.choice[F([F(), F("a")])] == F([F("a")])


def test_faithful_G_examples():
    X = (F(), F("a"))
    m = PureModel(X, (F(X),), {F(X): F([F("a")])})
    C = faithful_G(m)
    assert C.ground.elements == ("a",) and C(F("a")) == F("a")
    with pytest.raises(NotDecisive):
        faithful_G(PureModel(X, (F(X),), {F(X): F(X)}))
    with pytest.raises(NotBooleanLattice):
        faithful_G(PureModel((F(), F("a"), F("b")), (F([F(), F("a"), F("b")]),),
                             {F([F(), F("a"), F("b")]): F([F("a")])}))


def test_faithful_round_trip_and_warp_ire_bridge():
    rng = np.random.default_rng(6)
    for n in (1, 2, 3):
        g = GroundSet(tuple("abc"[:n]))
        for _ in range(40):
            C = random_table(g, rng)
            assert faithful_G(faithful_F(C)) == C
            assert check_warp(faithful_F(C)).holds == check_ire(C).holds
            assert check_warp(faithful_F(C)).holds == O.faithful_warp(O.as_dict(C), g.elements)


def test_pure_model_validation():
    with pytest.raises(InputError):
        PureModel(("x",), (F("x"),), {F("x"): F()})
    with pytest.raises(InputError):
        PureModel(("x",), (F("xy"),), {F("xy"): F("x")})
