import numpy as np
import pytest

import oracles as O
from combchoice.catalog import two_agent_priority
from combchoice.core import ChoiceFunction, GroundSet, InputError, ScaleError
from combchoice.generators import random_problem
from combchoice.matching import (
    Matching, MatchingProblem, all_matchings, check_stability, check_stability_implications,
    enumerate_stable, run_ak_da, run_ck_da,
)


def priority_problem():
    return MatchingProblem(("1", "2"), ("a",), {"1": ("a",), "2": ("a",)}, {"a": two_agent_priority()})


def test_single_agent_identity():
    g = GroundSet(("1",))
    p = MatchingProblem(("1",), ("a",), {"1": ("a",)}, {"a": ChoiceFunction.identity(g)})
    assert run_ck_da(p).matching.as_dict() == {"1": "a"}


def test_nobody_acceptable():
    g = GroundSet(("1", "2"))
    p = MatchingProblem(("1", "2"), ("a",), {}, {"a": ChoiceFunction.identity(g)})
    out = run_ck_da(p)
    assert out.matching.as_dict() == {"1": None, "2": None} and out.trace == ()
    assert enumerate_stable(p, "alpha") == [Matching((("1", None), ("2", None)))]


def test_priority_example_both_engines():
    p = priority_problem()
    ck, ak = run_ck_da(p), run_ak_da(p)
    assert ck.matching.as_dict() == {"1": "a", "2": None}
    assert ck.trace == ak.trace and ck.result == ak.result
    assert ck.trace_lines() == ["round 1: a <- {1}"]
    r = check_stability(p, ck.matching)
    assert r.individually_stable and r.alpha and r.beta and r.group
    assert enumerate_stable(p, "alpha") == [ck.matching]


def test_alpha_blocking_pair():
    p = priority_problem()
    r = check_stability(p, Matching((("1", None), ("2", "a"))))
    assert r.individually_stable and not r.alpha
    assert r.witnesses["alpha"] == {"agent": "1", "object": "a"}


def test_unacceptable_assignment_is_not_individually_stable():
    g = GroundSet(("1",))
    p = MatchingProblem(("1",), ("a",), {"1": ()}, {"a": ChoiceFunction.identity(g)})
    r = check_stability(p, Matching((("1", "a"),)))
    assert not r.individually_stable and not r.alpha


def test_empty_problem():
    p = MatchingProblem((), (), {}, {})
    assert run_ak_da(p).matching == Matching(())


def test_problem_validation():
    g = GroundSet(("1", "2"))
    with pytest.raises(InputError):
        MatchingProblem(("1", "2"), ("a",), {"1": ("b",)}, {"a": ChoiceFunction.identity(g)})
    with pytest.raises(InputError):
        MatchingProblem(("1", "2"), ("a",), {}, {"a": ChoiceFunction.identity(GroundSet(("2", "1")))})
    big = MatchingProblem(tuple("1234567"), (), {}, {})
    with pytest.raises(ScaleError):
        list(all_matchings(big))


def test_object_order_does_not_change_outcomes():
    rng = np.random.default_rng(17)
    for cls in ("any", "pi", "substitutable", "ire"):
        for _ in range(30):
            p = random_problem(int(rng.integers(1, 5)), 3, cls, rng)
            flipped = p.reordered(tuple(reversed(p.objects)))
            for run in (run_ck_da, run_ak_da):
                a, b = run(p), run(flipped)
                assert a.result == b.result
                assert [dict(r) for r in a.trace] == [dict(r) for r in b.trace]


def test_stability_flags_match_definitions():
    rng = np.random.default_rng(23)
    for _ in range(40):
        p = random_problem(int(rng.integers(1, 4)), 2, "any", rng)
        for mu in all_matchings(p):
            r = check_stability(p, mu)
            ir = O.individually_rational(p, mu.as_dict())
            assert r.individually_stable == ir
            assert r.alpha == (ir and O.blocking_alpha(p, mu.as_dict()))
            assert not (r.beta and not r.alpha)


def test_implication_report_on_random_problems():
    rng = np.random.default_rng(29)
    for cls in ("pi", "substitutable", "ire", "any"):
        for _ in range(10):
            rep = check_stability_implications(random_problem(3, 2, cls, rng))
            assert rep.beta_implies_alpha
            assert rep.alpha_iff_beta in (True, None)
            assert rep.alpha_iff_group in (True, None)
