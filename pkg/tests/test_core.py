import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from combchoice.core import (
    ChoiceFunction, CycleError, GroundSet, InputError, LinearOrder, Relation,
    iter_submasks, popcount, szpilrajn_extend, top, transitive_closure,
)


def test_groundset_masks_and_format():
    g = GroundSet(("a", "b", "c"))
    assert g.mask(["a", "c"]) == 0b101
    assert g.bundle(0b110) == frozenset("bc")
    assert g.format(0b101) == "{a,c}"
    assert g.format(0) == "{}"
    with pytest.raises(InputError):
        g.mask(["z"])
    with pytest.raises(InputError):
        GroundSet(("a", "a"))


def test_submask_iteration_covers_all_subsets():
    assert sorted(iter_submasks(0b1011)) == sorted(
        m for m in range(16) if m & ~0b1011 == 0)
    assert popcount(0b1011) == 3


def test_linear_order_parse_and_top():
    o = LinearOrder.parse("a > c > b")
    assert o.ranking == ("a", "c", "b")
    assert str(o) == "a > c > b"
    assert top({"b", "c"}, o) == "c"
    assert top(set(), o) is None
    assert o.prefers("c", "b")
    with pytest.raises(InputError):
        top({"z"}, o)


def test_choice_function_rejects_non_subset():
    g = GroundSet(("a", "b"))
    with pytest.raises(InputError):
        ChoiceFunction(g, table_data=np.array([0, 2, 2, 3]))


def test_from_table_requires_every_option_set():
    g = GroundSet(("a", "b"))
    with pytest.raises(InputError, match="no entry"):
        ChoiceFunction.from_table(g, {("a",): ("a",), ("b",): ()})


def test_call_and_equality():
    g = GroundSet(("a", "b"))
    C = ChoiceFunction.from_function(g, lambda S: sorted(S)[:1])
    assert C({"a", "b"}) == frozenset("a")
    assert C == ChoiceFunction.from_table(g, {(): (), ("a",): ("a",), ("b",): ("b",), ("a", "b"): ("a",)})
    assert C != ChoiceFunction.identity(g)


def test_transitive_closure_of_chain():
    R = Relation(("a", "b", "c"), frozenset({("a", "b"), ("b", "c")}))
    closed = transitive_closure(R)
    assert ("a", "c") in closed and closed.is_transitive()


def test_szpilrajn_on_cycle_reports_the_cycle():
    R = Relation(("a", "b", "c"), frozenset({("a", "b"), ("b", "c"), ("c", "a")}))
    with pytest.raises(CycleError) as err:
        szpilrajn_extend(R)
    cyc = err.value.cycle
    assert set(cyc) == {"a", "b", "c"}


def _acyclic_relations(k):
    labels = tuple("abcde"[:k])
    return st.permutations(labels).flatmap(
        lambda perm: st.sets(st.sampled_from([(perm[i], perm[j]) for i in range(k) for j in range(i + 1, k)] or [None]))
        .map(lambda pairs: Relation(labels, frozenset(p for p in pairs if p is not None))))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5).flatmap(_acyclic_relations))
def test_szpilrajn_extends_every_acyclic_relation(R):
    order = szpilrajn_extend(R)
    assert set(order.ranking) == set(R.carrier)
    for a, b in R:
        assert order.prefers(a, b)


def test_szpilrajn_exhaustive_small_carriers():
    labels = ("a", "b", "c")
    pairs = [(x, y) for x in labels for y in labels if x != y]
    for k in range(len(pairs) + 1):
        for chosen in itertools.combinations(pairs, k):
            R = Relation(labels, frozenset(chosen))
            closure = transitive_closure(R)
            if any((b, a) in closure for a, b in closure):
                with pytest.raises(CycleError):
                    szpilrajn_extend(R)
            else:
                order = szpilrajn_extend(R)
                assert all(order.prefers(a, b) for a, b in R)
