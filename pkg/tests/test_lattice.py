import itertools
from pathlib import Path

import numpy as np
import pytest

import oracles as O
from combchoice.axioms import check_path_independence
from combchoice.catalog import lattice_example
from combchoice.core import ChoiceFunction, GroundSet, LinearOrder, NotPathIndependent, ScaleError
from combchoice.generators import random_pi
from combchoice.lattice import (
    MaximalFamily, am_eval, chain_orders, hasse, maximal_family, mc_rationalization,
    min_mc_size, sharp, sharp_by_preimage, verify_lattice,
)
from combchoice.rules import mc_rule, priority_max

GOLDEN = Path(__file__).parent / "golden" / "lattice_example.dot"
F = frozenset


def orders(*texts):
    return [LinearOrder.parse(t) for t in texts]


def test_sharp_examples():
    C = lattice_example()
    assert sharp(C, "ab") == F("abc")
    assert sharp(C, "abc") == F("abc")
    assert sharp(C, "c") == F("c")


def test_sharp_matches_preimage_oracle_and_interval_property():
    rng = np.random.default_rng(11)
    g = GroundSet(tuple("abcd"))
    for _ in range(60):
        C = random_pi(g, rng)
        for S in g.masks():
            Sb = g.bundle(S)
            sh = sharp(C, Sb)
            assert sh == sharp_by_preimage(C, Sb)
            assert sharp(C, sh) == sh
            for T in g.masks():
                Tb = g.bundle(T)
                assert (C(Tb) == C(Sb)) == (C(Sb) <= Tb <= sh)


def test_example_family_and_edges():
    C = lattice_example()
    M = maximal_family(C)
    assert set(M.sets) == {F("abc"), F("ac"), F("bc"), F("a"), F("b"), F("c"), F()}
    H = hasse(C)
    assert H.edge_labels() == {
        (F("abc"), F("bc"), "a"), (F("abc"), F("ac"), "b"),
        (F("ac"), F("c"), "a"), (F("ac"), F("a"), "c"),
        (F("bc"), F("c"), "b"), (F("bc"), F("b"), "c"),
        (F("a"), F(), "a"), (F("b"), F(), "b"), (F("c"), F(), "c"),
    }
    assert verify_lattice(M).holds


def test_dot_matches_golden_file():
    assert hasse(lattice_example()).to_dot() == GOLDEN.read_text()


def test_small_families():
    g = GroundSet(("a", "b"))
    assert set(maximal_family(ChoiceFunction.identity(g)).sets) == {F(), F("a"), F("b"), F("ab")}
    C = priority_max(1, LinearOrder.parse("a > b"))
    assert set(maximal_family(C).sets) == {F("ab"), F("b"), F()}
    assert hasse(C).edge_labels() == {(F("ab"), F("b"), "a"), (F("b"), F(), "b")}
    H1 = hasse(ChoiceFunction.identity(GroundSet(("a",))))
    assert (len(H1.nodes), len(H1.edges)) == (2, 1)


def test_verify_lattice_detects_missing_meet():
    g = GroundSet(("a", "b", "c"))
    M = MaximalFamily.from_sets(g, [F("abc"), F("ab"), F("ac"), F()])
    r = verify_lattice(M)
    assert not r.holds and r.witness == {"S": F("ab"), "T": F("ac")}


def test_non_pi_is_rejected():
    g = GroundSet(("a", "b"))
    C = ChoiceFunction.from_table(g, {(): (), ("a",): (), ("b",): ("b",), ("a", "b"): ("a",)})
    with pytest.raises(NotPathIndependent) as err:
        maximal_family(C)
    assert err.value.witness is not None


def test_am_eval_examples():
    o = orders("a > c > b", "b > c > a")
    assert am_eval(o, "abc") == F("ab")
    assert am_eval(o, "bc") == F("bc")
    assert am_eval(orders("b > a"), "ab") == F("b")
    assert am_eval(o, "") == F()


def test_mc_rationalization_of_example():
    rat = mc_rationalization(lattice_example())
    got = {str(o) for o in rat.orders}
    # every maximal chain of the diagram gives a distinct order
    assert got == {"a > b > c", "a > c > b", "b > a > c", "b > c > a"}
    C = lattice_example()
    for S, c in C.items():
        assert am_eval(rat.orders, S) == c


def test_mc_rationalization_small_cases():
    g = GroundSet(("a", "b"))
    rat = mc_rationalization(ChoiceFunction.identity(g))
    assert {str(o) for o in rat.orders} == {"a > b", "b > a"}
    rat = mc_rationalization(priority_max(1, LinearOrder.parse("a > b > c")))
    assert [str(o) for o in rat.orders] == ["a > b > c"]


def test_min_mc_size_examples():
    m, found = min_mc_size(lattice_example())
    assert m == 2 and [str(o) for o in found] == ["a > c > b", "b > c > a"]
    assert min_mc_size(ChoiceFunction.identity(GroundSet(("a", "b"))))[0] == 2
    assert min_mc_size(priority_max(1, LinearOrder.parse("c > a > b")))[0] == 1
    assert min_mc_size(lattice_example(), budget=1) is None


def test_edge_count_is_total_choice_size_over_family():
    rng = np.random.default_rng(5)
    g = GroundSet(tuple("abcde"))
    for _ in range(40):
        C = random_pi(g, rng)
        H = hasse(C)
        assert len(H.edges) == sum(bin(C.eval_mask(S)).count("1") for S in H.nodes)
        assert verify_lattice(maximal_family(C)).holds


def test_every_mc_rule_is_pi_and_recovered():
    g = GroundSet(tuple("abc"))
    pool = list(O.all_partial_orders("abc"))
    rng = np.random.default_rng(2)
    for _ in range(200):
        k = int(rng.integers(1, 4))
        chosen = [LinearOrder(pool[i]) for i in rng.choice(len(pool), size=k)]
        C = mc_rule(chosen, g).compiled()
        assert check_path_independence(C).holds
        rat = mc_rationalization(C)
        assert all(am_eval(rat.orders, S) == c for S, c in C.items())


def test_chain_orders_bounded():
    g = GroundSet(tuple("abcdefgh"))
    with pytest.raises(ScaleError):
        chain_orders(ChoiceFunction.identity(g), max_chains=100)
