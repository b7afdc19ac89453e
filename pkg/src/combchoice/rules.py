"""Choice rules built from priorities and capacities, and responsive rationalization."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .axioms import AxiomReport, check_capacity_filling, check_warsprio, revealed_strict_priority
from .core import (
    ChoiceFunction,
    GroundSet,
    InputError,
    InternalError,
    LinearOrder,
    popcount,
    szpilrajn_extend,
    top_mask,
)


def _default_ground(orders: Iterable[LinearOrder]) -> GroundSet:
    labels = set()
    for o in orders:
        labels |= o.carrier
    return GroundSet(tuple(sorted(labels, key=lambda x: (str(type(x)), x))))


def _check_total(order: LinearOrder, ground: GroundSet):
    missing = set(ground.elements) - order.carrier
    extra = order.carrier - set(ground.elements)
    if missing or extra:
        raise InputError(f"order {order} must rank exactly the ground set {list(ground.elements)}")


class _IndexCache:
    """Per-ground index rankings; invisible to equality and evaluation results."""

    def __init__(self):
        self._by_ground = {}

    def get(self, ground, orders):
        key = ground.elements
        hit = self._by_ground.get(key)
        if hit is None:
            hit = tuple(o.mask_ranking(ground) for o in orders)
            self._by_ground[key] = hit
        return hit


def _top_k(mask: int, ranking: tuple, k: int) -> int:
    out = 0
    if k <= 0:
        return 0
    for i in ranking:
        if mask >> i & 1:
            out |= 1 << i
            k -= 1
            if k == 0:
                break
    return out


@dataclass(frozen=True)
class PriorityMax:
    """Choose the ``q`` highest-priority options (all of them if at most ``q``)."""

    q: int
    order: LinearOrder
    _idx: _IndexCache = field(default_factory=_IndexCache, compare=False, repr=False)

    def __post_init__(self):
        if self.q < 0:
            raise InputError("capacity must be non-negative")

    def evaluate(self, ground, mask):
        if popcount(mask) <= self.q:
            return mask
        (ranking,) = self._idx.get(ground, (self.order,))
        return _top_k(mask, ranking, self.q)


@dataclass(frozen=True)
class MC:
    """Maximizer-collecting rule: the union of each order's top option.

    Orders may rank only part of the ground set; unranked options are never
    chosen by that order.
    """

    orders: tuple
    _idx: _IndexCache = field(default_factory=_IndexCache, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))

    def evaluate(self, ground, mask):
        out = 0
        for ranking in self._idx.get(ground, self.orders):
            out |= top_mask(mask, ranking)
        return out


@dataclass(frozen=True)
class SeqPrioRivalry:
    """Sequenced priority maximization with rivalry.

    Slot ``m`` takes the top remaining option under the ``m``-th order.
    """

    q: int
    orders: tuple
    _idx: _IndexCache = field(default_factory=_IndexCache, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        if self.q < 0:
            raise InputError("capacity must be non-negative")
        if len(self.orders) != self.q:
            raise InputError(f"need exactly q={self.q} orders, got {len(self.orders)}")

    def evaluate(self, ground, mask):
        if popcount(mask) <= self.q:
            return mask
        out = 0
        for ranking in self._idx.get(ground, self.orders):
            out |= top_mask(mask & ~out, ranking)
        return out


@dataclass(frozen=True)
class Reserves:
    """Reserves-based priority maximization.

    Stage one gives each label ``l`` up to ``reserves[l]`` seats filled by its
    highest-priority members; stage two fills the remaining capacity from the
    leftover options by priority.
    """

    q: int
    labeling: tuple  # sorted (element, label) pairs
    reserves: tuple  # sorted (label, reserve) pairs
    order: LinearOrder
    _idx: _IndexCache = field(default_factory=_IndexCache, compare=False, repr=False)

    def __post_init__(self):
        labeling = self.labeling.items() if isinstance(self.labeling, Mapping) else self.labeling
        reserves = self.reserves.items() if isinstance(self.reserves, Mapping) else self.reserves
        labeling = tuple(sorted(labeling, key=lambda p: str(p[0])))
        reserves = dict(reserves)
        labels = {label for _, label in labeling}
        unknown = set(reserves) - labels
        if unknown:
            raise InputError(f"reserves name labels with no members: {sorted(map(str, unknown))}")
        if any(r < 0 for r in reserves.values()):
            raise InputError("reserves must be non-negative")
        if sum(reserves.values()) > self.q:
            raise InputError(f"reserves sum to {sum(reserves.values())}, above capacity {self.q}")
        full = tuple(sorted(((label, reserves.get(label, 0)) for label in labels), key=lambda p: str(p[0])))
        object.__setattr__(self, "labeling", labeling)
        object.__setattr__(self, "reserves", full)

    @property
    def label_of(self) -> dict:
        return dict(self.labeling)

    def label_masks(self, ground) -> list:
        label_of = self.label_of
        missing = set(ground.elements) - set(label_of)
        if missing:
            raise InputError(f"labeling misses elements {sorted(map(str, missing))}")
        return [(label, r, ground.mask(e for e in ground.elements if label_of[e] == label))
                for label, r in self.reserves]

    def evaluate(self, ground, mask, label_order=None):
        (ranking,) = self._idx.get(ground, (self.order,))
        groups = self.label_masks(ground)
        if label_order is not None:
            groups = sorted(groups, key=lambda g: label_order.index(g[0]))
        first = 0
        for _label, r, members in groups:
            first |= _top_k(mask & members, ranking, r)
        residual = self.q - popcount(first)
        return first | _top_k(mask & ~first, ranking, residual)


@dataclass(frozen=True)
class TwoStage:
    """``H(S) = C1(S) ∪ C2(S \\ C1(S))``."""

    first: ChoiceFunction
    second: ChoiceFunction

    def evaluate(self, ground, mask):
        c1 = self.first.eval_mask(mask)
        return c1 | self.second.eval_mask(mask & ~c1)


def priority_max(q: int, order: LinearOrder, ground: Optional[GroundSet] = None) -> ChoiceFunction:
    ground = ground or _default_ground([order])
    _check_total(order, ground)
    return ChoiceFunction(ground, rule=PriorityMax(q, order))


def mc_rule(orders: Sequence[LinearOrder], ground: Optional[GroundSet] = None) -> ChoiceFunction:
    ground = ground or _default_ground(orders)
    for o in orders:
        if not o.carrier <= set(ground.elements):
            raise InputError(f"order {o} ranks elements outside the ground set")
    return ChoiceFunction(ground, rule=MC(tuple(orders)))


def seq_prio_rivalry(q: int, orders: Sequence[LinearOrder], ground: Optional[GroundSet] = None) -> ChoiceFunction:
    ground = ground or _default_ground(orders)
    for o in orders:
        _check_total(o, ground)
    return ChoiceFunction(ground, rule=SeqPrioRivalry(q, tuple(orders)))


def reserves_rule(q: int, labeling: Mapping, reserves: Mapping, order: LinearOrder,
                  ground: Optional[GroundSet] = None) -> ChoiceFunction:
    ground = ground or _default_ground([order])
    _check_total(order, ground)
    rule = Reserves(q, labeling, reserves, order)
    rule.label_masks(ground)
    return ChoiceFunction(ground, rule=rule)


def two_stage(C1: ChoiceFunction, C2: ChoiceFunction) -> ChoiceFunction:
    if C1.ground != C2.ground:
        raise InputError("two-stage composition needs a common ground set")
    return ChoiceFunction(C1.ground, rule=TwoStage(C1, C2))


def move_to_top(order: LinearOrder, group: Iterable, keep_group_order: bool = True,
                group_ranking: Optional[Sequence] = None) -> LinearOrder:
    """Lift ``group`` to the top of ``order``.

    With ``keep_group_order`` the lifted members keep their relative order;
    otherwise ``group_ranking`` gives their order explicitly.
    """
    group = set(group)
    if keep_group_order:
        lifted = [e for e in order.ranking if e in group]
    else:
        lifted = list(group_ranking)
        if set(lifted) != group:
            raise InputError("group_ranking must list exactly the group")
    return LinearOrder(tuple(lifted) + tuple(e for e in order.ranking if e not in group))


def check_q_responsive(C: ChoiceFunction, q: int, order: LinearOrder) -> AxiomReport:
    """Whether ``C`` coincides with top-``q`` selection under ``order``."""
    ref = priority_max(q, order, C.ground)
    diff = np.nonzero(C.table != ref.table)[0]
    if not diff.size:
        return AxiomReport("q_responsive", True)
    S = int(diff[0])
    g = C.ground
    return AxiomReport("q_responsive", False, {
        "S": g.bundle(S), "chosen": g.bundle(C.eval_mask(S)), "expected": g.bundle(ref.eval_mask(S)),
    })


def responsive_rationalize(C: ChoiceFunction) -> Optional[tuple]:
    """Recover ``(q, order)`` with ``C = priority_max(q, order)``, or ``None``.

    Succeeds exactly when ``C`` is capacity-filling and satisfies WARSPrio.
    The revealed strict priority is then transitive and is extended to a
    linear order with ties broken by ground-set order.
    """
    q, _ = check_capacity_filling(C)
    if q is None or not check_warsprio(C).holds:
        return None
    rel = revealed_strict_priority(C).relation
    if not rel.is_transitive():
        raise InternalError("revealed strict priority is not transitive for a capacity-filling WARSPrio rule")
    order = szpilrajn_extend(rel)
    if not check_q_responsive(C, q, order).holds:
        raise InternalError(f"priority_max({q}, {order}) does not reproduce the choice function")
    return q, order
