"""Random choice functions and matching problems drawn from specific classes.

Every generator takes a ``numpy.random.Generator`` so runs are reproducible.

Constructions that guarantee membership:

* path independent: maximizer-collecting rules over random orders, each order
  ranking the same random subset of relevant elements;
* substitutable: each element ``a`` gets a downward-closed family of option
  sets containing it (generated by a few random sets), and ``a`` is chosen
  from ``S`` iff ``S`` is in its family;
* IRE: a random strict ranking of all bundles, choosing from ``S`` the best
  bundle contained in ``S``.
"""
from __future__ import annotations

import numpy as np

from .core import ChoiceFunction, GroundSet, LinearOrder, iter_bits
from .matching import MatchingProblem
from .rules import mc_rule, priority_max, reserves_rule, seq_prio_rivalry


def random_order(labels, rng) -> LinearOrder:
    labels = list(labels)
    return LinearOrder(tuple(labels[i] for i in rng.permutation(len(labels))))


def random_table(ground: GroundSet, rng) -> ChoiceFunction:
    t = np.array([int(S) & int(rng.integers(0, 1 << ground.n)) for S in ground.masks()], dtype=np.int64)
    return ChoiceFunction(ground, table_data=t)


def random_pi(ground: GroundSet, rng, max_orders: int = 3, irrelevant_prob: float = 0.2) -> ChoiceFunction:
    labels = list(ground.elements)
    if rng.random() < irrelevant_prob:
        keep = [e for e in labels if rng.random() < 0.7]
    else:
        keep = labels
    k = int(rng.integers(1, max_orders + 1)) if keep else 0
    orders = [random_order(keep, rng) for _ in range(k)]
    return mc_rule(orders, ground).compiled()


def random_substitutable(ground: GroundSet, rng, max_generators: int = 3) -> ChoiceFunction:
    n = ground.n
    families = []
    for a in range(n):
        bit = 1 << a
        gens = [int(rng.integers(0, 1 << n)) | bit for _ in range(int(rng.integers(0, max_generators + 1)))]
        families.append(gens)
    t = np.zeros(1 << n, dtype=np.int64)
    for S in range(1 << n):
        c = 0
        for a in iter_bits(S):
            if any(S & ~G == 0 for G in families[a]):
                c |= 1 << a
        t[S] = c
    return ChoiceFunction(ground, table_data=t)


def random_ire(ground: GroundSet, rng) -> ChoiceFunction:
    n = ground.n
    ranking = rng.permutation(1 << n)
    t = np.zeros(1 << n, dtype=np.int64)
    for S in range(1 << n):
        t[S] = next(int(b) for b in ranking if int(b) & ~S == 0)
    return ChoiceFunction(ground, table_data=t)


def random_priority_max(ground: GroundSet, rng) -> ChoiceFunction:
    q = int(rng.integers(0, ground.n + 1))
    return priority_max(q, random_order(ground.elements, rng), ground)


def random_seq_rivalry(ground: GroundSet, rng) -> ChoiceFunction:
    q = int(rng.integers(0, ground.n + 1))
    orders = [random_order(ground.elements, rng) for _ in range(q)]
    return seq_prio_rivalry(q, orders, ground)


def random_reserves(ground: GroundSet, rng, max_labels: int = 3) -> ChoiceFunction:
    q = int(rng.integers(0, ground.n + 1))
    k = int(rng.integers(1, max_labels + 1))
    names = [f"g{j}" for j in range(k)]
    labeling = {e: names[int(rng.integers(0, k))] for e in ground.elements}
    used = sorted(set(labeling.values()))
    reserves = {}
    left = q
    for label in used:
        r = int(rng.integers(0, left + 1))
        reserves[label] = r
        left -= r
    return reserves_rule(q, labeling, reserves, random_order(ground.elements, rng), ground)


def random_capacity_subs(ground: GroundSet, rng) -> ChoiceFunction:
    """A capacity-filling substitutable rule from one of the three priority constructors."""
    pick = int(rng.integers(0, 3))
    if pick == 0:
        return random_priority_max(ground, rng)
    if pick == 1:
        return random_seq_rivalry(ground, rng)
    return random_reserves(ground, rng)


RULE_CLASSES = {
    "any": random_table,
    "pi": random_pi,
    "substitutable": random_substitutable,
    "ire": random_ire,
}


def random_problem(n_agents: int, n_objects: int, rule_class: str, rng) -> MatchingProblem:
    agents = tuple(str(k + 1) for k in range(n_agents))
    objects = tuple(chr(ord("a") + k) for k in range(n_objects))
    ground = GroundSet(agents)
    factory = RULE_CLASSES[rule_class]
    prefs = {}
    for i in agents:
        size = int(rng.integers(0, n_objects + 1))
        prefs[i] = tuple(objects[k] for k in rng.permutation(n_objects)[:size])
    choice = {o: factory(ground, rng) for o in objects}
    return MatchingProblem(agents, objects, prefs, choice)
