"""Counterexample search for claims that fail without the right axioms.

Each kind names a situation that is possible but never shown by a concrete
instance. Random kinds draw problems from a seeded generator and return the
first hit; exhaustive kinds scan a fixed enumeration. Every hit is replayed
through the checkers before it is returned.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import generators as gen
from .axioms import check_ire, check_substitutability, check_warsprio
from .core import ChoiceFunction, GroundSet, InputError, InternalError
from .matching import Matching, MatchingProblem, check_stability, run_ak_da, run_ck_da

KINDS = (
    "warsprio_not_subs",
    "ck_ne_ak_subs",
    "ck_unstable_ire",
    "ak_infeasible",
    "alpha_not_beta",
)


@dataclass
class SearchResult:
    kind: str
    instance: object                 # ChoiceFunction or MatchingProblem
    tries: int
    details: dict = field(default_factory=dict)


def all_tables(ground: GroundSet):
    """Every choice function on ``ground`` in a fixed order (mixed radix over option sets)."""
    n = ground.n
    choices = [[c for c in range(1 << n) if c & ~S == 0] for S in range(1 << n)]
    for combo in itertools.product(*choices[1:]):
        yield ChoiceFunction(ground, table_data=np.array((0,) + combo, dtype=np.int64))


def _warsprio_not_subs(n: int):
    ground = GroundSet(tuple("abc"[:n]))
    for tries, C in enumerate(all_tables(ground), start=1):
        if check_warsprio(C).holds and not check_substitutability(C).holds:
            return SearchResult("warsprio_not_subs", C, tries)
    return None


def verify(result: SearchResult) -> bool:
    """Replay a found instance against the claim its kind asserts."""
    kind, x = result.kind, result.instance
    if kind == "warsprio_not_subs":
        return check_warsprio(x).holds and not check_substitutability(x).holds
    if kind == "alpha_not_beta":
        mu = result.details["matching"]
        r = check_stability(x, mu)
        return (all(check_substitutability(C).holds for C in x.choice.values())
                and r.alpha and not r.beta)
    ck, ak = run_ck_da(x), run_ak_da(x)
    if kind == "ck_ne_ak_subs":
        return (all(check_substitutability(C).holds for C in x.choice.values())
                and ak.feasible and ck.result != ak.result)
    if kind == "ck_unstable_ire":
        return (all(check_ire(C).holds for C in x.choice.values())
                and not check_stability(x, ck.result).alpha)
    if kind == "ak_infeasible":
        return (not ak.feasible
                and not all(check_substitutability(C).holds for C in x.choice.values()))
    raise InputError(f"unknown search kind {kind!r}")


def _alpha_not_beta():
    ground = GroundSet(("1", "2"))
    tries = 0
    for C in all_tables(ground):
        if not check_substitutability(C).holds:
            continue
        for accept in itertools.product((True, False), repeat=2):
            prefs = {i: ("a",) if ok else () for i, ok in zip(ground.elements, accept)}
            problem = MatchingProblem(ground.elements, ("a",), prefs, {"a": C})
            for combo in itertools.product((None, "a"), repeat=2):
                tries += 1
                mu = Matching(tuple(zip(ground.elements, combo)))
                r = check_stability(problem, mu)
                if r.alpha and not r.beta:
                    return SearchResult("alpha_not_beta", problem, tries, {"matching": mu})
    return None


_RANDOM = {
    "ck_ne_ak_subs": "substitutable",
    "ck_unstable_ire": "ire",
    "ak_infeasible": "any",
}


def search_counterexample(kind: str, seed: int = 0, max_size: int = 4, max_objects: int = 2,
                          max_tries: int = 20_000) -> Optional[SearchResult]:
    """Find an instance of ``kind``.

    For ``warsprio_not_subs`` every choice function on a ground set of size
    ``min(max_size, 3)`` is scanned; for the random kinds ``max_size`` bounds
    the number of agents. Returns ``None`` when the budget runs out.
    """
    if kind not in KINDS:
        raise InputError(f"unknown search kind {kind!r}; choose from {', '.join(KINDS)}")
    if kind == "warsprio_not_subs":
        result = _warsprio_not_subs(min(max_size, 3))
    elif kind == "alpha_not_beta":
        result = _alpha_not_beta()
    else:
        rng = np.random.default_rng(seed)
        result = None
        for tries in range(1, max_tries + 1):
            n_agents = int(rng.integers(1, max_size + 1))
            n_objects = int(rng.integers(1, max_objects + 1))
            problem = gen.random_problem(n_agents, n_objects, _RANDOM[kind], rng)
            candidate = SearchResult(kind, problem, tries)
            if verify(candidate):
                ck, ak = run_ck_da(problem), run_ak_da(problem)
                candidate.details = {"ck": ck, "ak": ak}
                result = candidate
                break
    if result is not None and not verify(result):
        raise InternalError(f"search for {kind} returned an instance that does not replay")
    return result
