"""Combinatorial demand with quasilinear utility, in exact rational arithmetic."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .axioms import AxiomReport
from .core import GroundSet, InputError, InternalError, ScaleError, iter_bits

MAX_DEMAND_GROUND = 12


def _rational(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class PriceVector:
    ground: GroundSet
    prices: tuple  # Fractions in ground order

    def __post_init__(self):
        prices = tuple(_rational(p) for p in self.prices)
        if len(prices) != self.ground.n:
            raise InputError(f"need {self.ground.n} prices, got {len(prices)}")
        if any(p <= 0 for p in prices):
            raise InputError("prices must be strictly positive")
        object.__setattr__(self, "prices", prices)

    @classmethod
    def of(cls, ground: GroundSet, price_of: Mapping) -> "PriceVector":
        missing = set(ground.elements) - set(price_of)
        if missing:
            raise InputError(f"no price for {sorted(map(str, missing))}")
        return cls(ground, tuple(price_of[e] for e in ground.elements))

    def __getitem__(self, label) -> Fraction:
        return self.prices[self.ground.index[label]]

    def cost(self, mask: int) -> Fraction:
        return sum((self.prices[i] for i in iter_bits(mask)), Fraction(0))


@dataclass(frozen=True)
class Valuation:
    ground: GroundSet
    values: tuple  # Fractions indexed by bundle mask

    def __post_init__(self):
        values = tuple(_rational(v) for v in self.values)
        if len(values) != 1 << self.ground.n:
            raise InputError(f"valuation needs {1 << self.ground.n} values")
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, ground: GroundSet, value_of: Mapping) -> "Valuation":
        vals = [None] * (1 << ground.n)
        for bundle, v in value_of.items():
            vals[ground.mask(bundle)] = v
        if any(v is None for v in vals):
            raise InputError("valuation must cover every bundle")
        return cls(ground, tuple(vals))

    def __call__(self, bundle: Iterable) -> Fraction:
        return self.values[self.ground.mask(bundle)]

    def shifted(self, c) -> "Valuation":
        return Valuation(self.ground, tuple(v + c for v in self.values))


@dataclass(frozen=True)
class DemandObservation:
    price: PriceVector
    demanded: frozenset  # of Bundles

    def __post_init__(self):
        demanded = frozenset(frozenset(b) for b in self.demanded)
        if not demanded:
            raise InputError("an observation must demand at least one bundle")
        for b in demanded:
            self.price.ground.mask(b)
        object.__setattr__(self, "demanded", demanded)


def bundle_value(p: PriceVector, A: Iterable) -> Fraction:
    return p.cost(p.ground.mask(A))


def derived_demand(v: Valuation, p: PriceVector) -> frozenset:
    """All bundles maximizing ``v(A) - <p, A>``."""
    g = v.ground
    surplus = [v.values[m] - p.cost(m) for m in g.masks()]
    best = max(surplus)
    return frozenset(g.bundle(m) for m, s in enumerate(surplus) if s == best)


def _pairs(obs):
    for (i, o1), (j, o2) in itertools.product(enumerate(obs), repeat=2):
        for A in sorted(o1.demanded, key=lambda b: o1.price.ground.mask(b)):
            for A2 in sorted(o2.demanded, key=lambda b: o2.price.ground.mask(b)):
                yield i, o1, A, j, o2, A2


def check_law_of_demand(obs: Sequence[DemandObservation]) -> AxiomReport:
    """``<p - p', A - A'> <= 0`` for every pair of observations and demanded bundles."""
    for i, o1, A, j, o2, A2 in _pairs(obs):
        p, p2 = o1.price, o2.price
        lhs = bundle_value(p, A) - bundle_value(p, A2) - bundle_value(p2, A) + bundle_value(p2, A2)
        if lhs > 0:
            return AxiomReport("law_of_demand", False, {"i": i, "A": A, "j": j, "A2": A2, "value": lhs})
    return AxiomReport("law_of_demand", True)


def check_demand_warp(obs: Sequence[DemandObservation]) -> AxiomReport:
    """If ``A`` is demanded at ``p`` and a cheaper-at-``p`` bundle ``A'`` at ``p'``, then ``A`` costs more at ``p'``."""
    for i, o1, A, j, o2, A2 in _pairs(obs):
        p, p2 = o1.price, o2.price
        if bundle_value(p, A2) < bundle_value(p, A) and not bundle_value(p2, A) > bundle_value(p2, A2):
            return AxiomReport("demand_warp", False, {"i": i, "A": A, "j": j, "A2": A2})
    return AxiomReport("demand_warp", True)


@dataclass(frozen=True)
class Infeasible:
    """Negative cycle in the constraint graph, as a list of bundles."""

    cycle: tuple
    weight: Fraction


def quasilinear_rationalize(obs: Sequence[DemandObservation]):
    """A valuation under which every observed bundle is demanded at its price.

    Each observation ``(p, A)`` imposes ``v(B) - v(A) <= <p,B> - <p,A>`` for
    every bundle ``B``. The system is solved by Bellman-Ford from a virtual
    source and normalized to ``v(∅) = 0``. Returns a :class:`Valuation`, or an
    :class:`Infeasible` carrying a negative cycle.
    """
    if not obs:
        raise InputError("need at least one observation")
    g = obs[0].price.ground
    if any(o.price.ground != g for o in obs):
        raise InputError("observations use different ground sets")
    if g.n > MAX_DEMAND_GROUND:
        raise ScaleError(f"{g.n} elements means 2^{g.n} variables; cap is {MAX_DEMAND_GROUND}")
    size = 1 << g.n
    edges = {}
    for o in obs:
        costs = [o.price.cost(m) for m in range(size)]
        for A in o.demanded:
            a = g.mask(A)
            for b in range(size):
                if b == a:
                    continue
                w = costs[b] - costs[a]
                if (a, b) not in edges or w < edges[(a, b)]:
                    edges[(a, b)] = w
    edge_list = sorted(edges.items())

    dist = [Fraction(0)] * size
    pred = [-1] * size
    last = -1
    # size + 1 vertices counting the virtual source: a relaxation in pass size + 1 means a cycle
    for _ in range(size + 1):
        last = -1
        for (a, b), w in edge_list:
            if dist[a] + w < dist[b]:
                dist[b] = dist[a] + w
                pred[b] = a
                last = b
        if last < 0:
            break
    if last >= 0:
        node = last
        for _ in range(size):
            node = pred[node]
        cycle = [node]
        cur = pred[node]
        while cur != node:
            cycle.append(cur)
            cur = pred[cur]
        cycle.reverse()
        weight = sum(edges[(cycle[k], cycle[(k + 1) % len(cycle)])] for k in range(len(cycle)))
        return Infeasible(tuple(g.bundle(m) for m in cycle), weight)

    anchor = dist[0]
    v = Valuation(g, tuple(d - anchor for d in dist))
    for o in obs:
        for A in o.demanded:
            a = g.mask(A)
            top = v.values[a] - o.price.cost(a)
            if any(v.values[b] - o.price.cost(b) > top for b in range(size)):
                raise InternalError("solver returned a valuation violating a constraint")
    return v
