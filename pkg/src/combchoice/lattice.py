"""Maximal option sets of path independent choice functions and MC rationalization.

A choice function with "irrelevant" elements (never chosen from any option
set) is handled by letting the bottom of the lattice be the set of those
elements, and by using orders that rank only the relevant elements.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .axioms import AxiomReport, check_path_independence
from .core import (
    Bundle,
    ChoiceFunction,
    GroundSet,
    InternalError,
    LinearOrder,
    NotPathIndependent,
    ScaleError,
    iter_bits,
    popcount,
    top_mask,
)

MAX_CHAINS = 200_000


def _require_pi(C: ChoiceFunction):
    report = check_path_independence(C)
    if not report.holds:
        raise NotPathIndependent("choice function is not path independent", report.witness)


def relevant_mask(C: ChoiceFunction) -> int:
    out = 0
    for c in C.table:
        out |= int(c)
    return out


def _sharp_mask(C: ChoiceFunction, S: int) -> int:
    c = C.eval_mask(S)
    out = c
    for a in range(C.ground.n):
        bit = 1 << a
        if not c & bit and C.eval_mask(c | bit) == c:
            out |= bit
    return out


def sharp(C: ChoiceFunction, S: Iterable) -> Bundle:
    """Largest option set choice-equivalent to ``S``.

    Computed elementwise as ``C(S)`` plus every ``a`` with
    ``C(C(S) ∪ {a}) = C(S)``; the result is verified to be choice-equivalent.
    """
    g = C.ground
    m = g.mask(S)
    out = _sharp_mask(C, m)
    if C.eval_mask(out) != C.eval_mask(m) or out & m != m:
        raise NotPathIndependent(
            f"elementwise closure of {g.format(m)} is {g.format(out)}, which is not choice-equivalent",
            {"S": g.bundle(m), "sharp": g.bundle(out)},
        )
    return g.bundle(out)


def sharp_by_preimage(C: ChoiceFunction, S: Iterable) -> Bundle:
    """Union of every option set with the same choice as ``S`` (brute force)."""
    g = C.ground
    target = C.eval_mask(g.mask(S))
    out = 0
    for T in g.masks():
        if C.eval_mask(T) == target:
            out |= T
    return g.bundle(out)


@dataclass(frozen=True)
class MaximalFamily:
    ground: GroundSet
    masks: tuple
    for_choice: Optional[ChoiceFunction] = None

    @property
    def sets(self) -> list:
        return [self.ground.bundle(m) for m in self.masks]

    def __len__(self):
        return len(self.masks)

    def __contains__(self, S):
        return self.ground.mask(S) in set(self.masks)

    @classmethod
    def from_sets(cls, ground: GroundSet, sets: Iterable, for_choice=None) -> "MaximalFamily":
        return cls(ground, _canonical(ground, {ground.mask(s) for s in sets}), for_choice)


def _canonical(ground: GroundSet, masks) -> tuple:
    return tuple(sorted(masks, key=lambda m: (-popcount(m), tuple(iter_bits(m)))))


def maximal_family(C: ChoiceFunction, verify: bool = True) -> MaximalFamily:
    """Maximal option sets, built top-down from ``E`` by removing chosen elements."""
    if verify:
        _require_pi(C)
    g = C.ground
    seen = {g.full}
    frontier = [g.full]
    while frontier:
        nxt = []
        for S in frontier:
            c = C.eval_mask(S)
            for a in iter_bits(c):
                child = S & ~(1 << a)
                if child not in seen:
                    seen.add(child)
                    nxt.append(child)
        frontier = nxt
    if verify:
        fixed = {S for S in g.masks() if _sharp_mask(C, S) == S}
        if fixed != seen:
            raise NotPathIndependent("top-down family disagrees with the sharp fixed points")
    return MaximalFamily(g, _canonical(g, seen), C)


def verify_lattice(M: MaximalFamily) -> AxiomReport:
    """Top, bottom and pairwise intersection closure of a family of sets.

    The expected bottom is the empty set, or the set of never-chosen elements
    when the family comes from a choice function that has some.
    """
    g = M.ground
    members = set(M.masks)
    if g.full not in members:
        return AxiomReport("lattice", False, {"missing_top": g.bundle(g.full)})
    bottom = 0
    if M.for_choice is not None:
        bottom = g.full & ~relevant_mask(M.for_choice)
    if bottom not in members:
        return AxiomReport("lattice", False, {"missing_bottom": g.bundle(bottom)})
    for S, T in itertools.combinations(M.masks, 2):
        if S & T not in members:
            return AxiomReport("lattice", False, {"S": g.bundle(S), "T": g.bundle(T)})
    return AxiomReport("lattice", True)


@dataclass(frozen=True)
class HasseDiagram:
    ground: GroundSet
    nodes: tuple                 # masks in canonical order
    edges: tuple                 # (parent mask, child mask, element index)
    chosen: dict                 # node mask -> chosen mask

    def edge_labels(self) -> set:
        g = self.ground
        return {(g.bundle(p), g.bundle(c), g.elements[a]) for p, c, a in self.edges}

    def to_dot(self) -> str:
        g = self.ground

        def name(m):
            return '"{' + ",".join(map(str, g.sorted_labels(m))) + '}"'

        lines = ["digraph hasse {", "  rankdir=TB;", "  node [shape=plaintext];"]
        for m in self.nodes:
            chosen = ",".join(map(str, g.sorted_labels(self.chosen[m])))
            lines.append(f'  {name(m)} [chosen="{chosen}"];')
        for p, c, a in self.edges:
            lines.append(f'  {name(p)} -> {name(c)} [label="-{g.elements[a]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def hasse(C: ChoiceFunction, verify: bool = True) -> HasseDiagram:
    M = maximal_family(C, verify=verify)
    edges = []
    chosen = {}
    for S in M.masks:
        c = C.eval_mask(S)
        chosen[S] = c
        for a in iter_bits(c):
            edges.append((S, S & ~(1 << a), a))
    return HasseDiagram(C.ground, M.masks, tuple(edges), chosen)


@dataclass(frozen=True)
class McRationalization:
    ground: GroundSet
    orders: tuple

    def __len__(self):
        return len(self.orders)


def am_eval(orders: Sequence[LinearOrder], S: Iterable) -> Bundle:
    """Union over ``orders`` of the top element of ``S`` among the ranked ones."""
    S = frozenset(S)
    out = set()
    for o in orders:
        for e in o.ranking:
            if e in S:
                out.add(e)
                break
    return frozenset(out)


def _am_mask(rankings, S):
    out = 0
    for r in rankings:
        out |= top_mask(S, r)
    return out


def _reproduces(C: ChoiceFunction, rankings) -> bool:
    t = C.table
    return all(_am_mask(rankings, S) == int(t[S]) for S in C.ground.masks())


def chain_orders(C: ChoiceFunction, verify: bool = True, max_chains: int = MAX_CHAINS) -> list:
    """Orders read off maximal chains of the Hasse diagram, depth first, deduplicated."""
    if verify:
        _require_pi(C)
    g = C.ground
    found = []
    seen = set()
    count = 0

    def walk(S, prefix):
        nonlocal count
        c = C.eval_mask(S)
        if not c:
            count += 1
            if count > max_chains:
                raise ScaleError(f"more than {max_chains} maximal chains")
            key = tuple(prefix)
            if key not in seen:
                seen.add(key)
                found.append(key)
            return
        for a in iter_bits(c):
            prefix.append(a)
            walk(S & ~(1 << a), prefix)
            prefix.pop()

    walk(g.full, [])
    return found


def mc_rationalization(C: ChoiceFunction, verify: bool = True) -> McRationalization:
    """Every order obtainable from a maximal chain; together they MC-rationalize ``C``."""
    rankings = chain_orders(C, verify=verify)
    if not _reproduces(C, rankings):
        raise InternalError("chain orders do not reproduce the choice function")
    g = C.ground
    orders = tuple(LinearOrder(tuple(g.elements[i] for i in r)) for r in rankings)
    return McRationalization(g, orders)


def min_mc_size(C: ChoiceFunction, budget: int = 1_000_000) -> Optional[tuple]:
    """Smallest subset of the chain orders that still rationalizes ``C``.

    Subsets are tried in increasing size, each size in lexicographic order of
    the chain enumeration. Returns ``(m, orders)`` or ``None`` once ``budget``
    candidate subsets have been tried without success.
    """
    rankings = chain_orders(C)
    g = C.ground
    tried = 0
    for m in range(0, len(rankings) + 1):
        for combo in itertools.combinations(rankings, m):
            tried += 1
            if tried > budget:
                return None
            if _reproduces(C, combo):
                return m, tuple(LinearOrder(tuple(g.elements[i] for i in r)) for r in combo)
    raise InternalError("the full chain order set failed to rationalize a path independent function")
