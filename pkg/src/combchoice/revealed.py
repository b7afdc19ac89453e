"""Pure choice models, revealed preference, and the faithful maps between models.

A pure model lists budgets (sets of alternatives) and a nonempty choice from
each. ``faithful_F`` turns a combinatorial choice function into the pure
model over bundles; ``faithful_G`` maps back.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Optional

import numpy as np

from .axioms import AxiomReport
from .core import (
    ChoiceFunction,
    ChoiceKitError,
    GroundSet,
    InputError,
    Relation,
    ScaleError,
    transitive_closure,
)

MAX_F_GROUND = 12
MAX_SEARCH_ALTERNATIVES = 4


class NotBooleanLattice(ChoiceKitError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class NotDecisive(ChoiceKitError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class PureModel:
    alternatives: tuple
    budgets: tuple
    choice: Mapping

    def __post_init__(self):
        alts = tuple(self.alternatives)
        if len(set(alts)) != len(alts):
            raise InputError("alternatives must be distinct")
        budgets = tuple(frozenset(b) for b in self.budgets)
        if len(set(budgets)) != len(budgets):
            raise InputError("budgets must be distinct")
        known = set(alts)
        choice = {}
        for b in budgets:
            if not b:
                raise InputError("budgets must be nonempty")
            if not b <= known:
                raise InputError(f"budget {set(b)} has unknown alternatives")
            try:
                c = frozenset(self.choice[b])
            except KeyError:
                raise InputError(f"no choice recorded for budget {set(b)}") from None
            if not c or not c <= b:
                raise InputError(f"choice from {set(b)} must be a nonempty subset")
            choice[b] = c
        object.__setattr__(self, "alternatives", alts)
        object.__setattr__(self, "budgets", budgets)
        object.__setattr__(self, "choice", choice)

    @property
    def index(self) -> dict:
        return {x: i for i, x in enumerate(self.alternatives)}


@dataclass(frozen=True)
class RevealedRelations:
    weak: Relation
    strict: Relation


def _matrices(m: PureModel):
    idx = m.index
    k = len(m.alternatives)
    weak = np.zeros((k, k), dtype=bool)
    strict = np.zeros((k, k), dtype=bool)
    for b in m.budgets:
        bi = np.array([idx[x] for x in b])
        chosen = m.choice[b]
        ci = np.array([idx[x] for x in chosen])
        ri = np.array([idx[x] for x in b - chosen], dtype=np.int64)
        weak[np.ix_(ci, bi)] = True
        if ri.size:
            strict[np.ix_(ci, ri)] = True
    return weak, strict


def revealed_relations(m: PureModel) -> RevealedRelations:
    weak, strict = _matrices(m)
    return RevealedRelations(Relation.from_matrix(m.alternatives, weak),
                             Relation.from_matrix(m.alternatives, strict))


def _first_budget(m, pred):
    return next(b for b in m.budgets if pred(b))


def check_warp(m: PureModel) -> AxiomReport:
    """No ``x`` revealed preferred to ``y`` while ``y`` is revealed strictly preferred to ``x``."""
    weak, strict = _matrices(m)
    bad = np.argwhere(weak & strict.T)
    if not bad.size:
        return AxiomReport("warp", True)
    i, j = map(int, bad[0])
    x, y = m.alternatives[i], m.alternatives[j]
    b_weak = _first_budget(m, lambda b: x in m.choice[b] and y in b)
    b_strict = _first_budget(m, lambda b: y in m.choice[b] and x in b - m.choice[b])
    return AxiomReport("warp", False, {"x": x, "y": y, "B_xy": b_weak, "B_yx": b_strict})


def strict_is_asymmetric_part(m: PureModel) -> bool:
    weak, strict = _matrices(m)
    return bool(np.array_equal(strict, weak & ~weak.T))


def _induced_choice(rel: np.ndarray, idx: dict, b: frozenset) -> frozenset:
    bi = [idx[x] for x in b]
    sub = rel[np.ix_(bi, bi)]
    return frozenset(x for x, row in zip(b, sub) if row.all())


def rationalizes(m: PureModel, rel: Relation) -> bool:
    """Whether choosing the greatest elements under ``rel`` reproduces every observed choice."""
    if tuple(rel.carrier) != m.alternatives:
        rel = Relation(m.alternatives, rel.pairs)
    mat = rel.matrix()
    idx = m.index
    return all(_induced_choice(mat, idx, b) == m.choice[b] for b in m.budgets)


def check_rationalizable(m: PureModel) -> Optional[Relation]:
    """The revealed preference relation if it rationalizes ``m``, else ``None``."""
    R = revealed_relations(m).weak
    return R if rationalizes(m, R) else None


def search_transitive_rationalization(m: PureModel) -> Optional[Relation]:
    """Brute-force search over every transitive relation on at most four alternatives."""
    k = len(m.alternatives)
    if k > MAX_SEARCH_ALTERNATIVES:
        raise ScaleError(f"search covers at most {MAX_SEARCH_ALTERNATIVES} alternatives, got {k}")
    idx = m.index
    cells = k * k
    for bits in range(1 << cells):
        mat = np.array([(bits >> p) & 1 for p in range(cells)], dtype=bool).reshape(k, k)
        closed = mat.astype(np.int64) @ mat.astype(np.int64) > 0
        if np.any(closed & ~mat):
            continue
        if all(_induced_choice(mat, idx, b) == m.choice[b] for b in m.budgets):
            return Relation.from_matrix(m.alternatives, mat)
    return None


def check_transitive_rationalizable(m: PureModel, search_fallback: bool = True) -> Optional[Relation]:
    """A transitive rationalization, or ``None`` if there is none.

    The candidate is the transitive closure of revealed preference. It is
    decisive: every transitive rationalization contains it, and enlarging a
    relation can only enlarge its sets of greatest elements. For at most four
    alternatives the exhaustive search runs as a second opinion when the
    candidate fails.
    """
    tau = transitive_closure(revealed_relations(m).weak)
    if rationalizes(m, tau):
        return tau
    if search_fallback and len(m.alternatives) <= MAX_SEARCH_ALTERNATIVES:
        return search_transitive_rationalization(m)
    return None


def _subset_leq(x, y) -> bool:
    return x <= y


@dataclass
class DomainFlags:
    complete: bool
    additive: bool
    connected: bool
    comprehensive: Optional[bool]
    combinatorial: Optional[bool]
    witnesses: dict = field(default_factory=dict)


def domain_predicates(m: PureModel, leq: Optional[Callable] = None, join: Optional[Callable] = None) -> DomainFlags:
    """Structural properties of the budget domain.

    ``leq`` and ``join`` describe the order on alternatives; when all
    alternatives are frozensets they default to inclusion and union. Without
    an order, ``comprehensive`` and ``combinatorial`` are ``None``.
    """
    alts = m.alternatives
    budgets = set(m.budgets)
    witnesses = {}

    if all(isinstance(x, frozenset) for x in alts):
        leq = leq or _subset_leq
        join = join or (lambda x, y: x | y)

    def all_subsets_present(max_size):
        for size in range(1, min(max_size, len(alts)) + 1):
            for combo in itertools.combinations(alts, size):
                if frozenset(combo) not in budgets:
                    return frozenset(combo)
        return None

    if len(alts) <= 20:
        miss = all_subsets_present(len(alts))
        complete = miss is None
        if miss is not None:
            witnesses["complete"] = miss
    else:
        complete = len(budgets) == (1 << len(alts)) - 1

    additive = True
    for b1, b2 in itertools.combinations(m.budgets, 2):
        if b1 | b2 not in budgets:
            additive = False
            witnesses["additive"] = (b1, b2)
            break

    miss = all_subsets_present(3)
    connected = miss is None
    if miss is not None:
        witnesses["connected"] = miss

    comprehensive = combinatorial = None
    if leq is not None:
        comprehensive = True
        for b in m.budgets:
            below = next(((x, y) for x in b for y in alts if y not in b and leq(y, x)), None)
            if below is not None:
                comprehensive = False
                witnesses["comprehensive"] = (b, below)
                break
        combinatorial = comprehensive
        if combinatorial and join is not None:
            for b in m.budgets:
                hole = next(((x, y) for x, y in itertools.combinations(b, 2) if join(x, y) not in b), None)
                if hole is not None:
                    combinatorial = False
                    witnesses["join_closed"] = (b, hole)
                    break
        elif join is None:
            combinatorial = None
        if combinatorial:
            for y in alts:
                if not any(y in b and not any(z != y and leq(y, z) for z in b) for b in m.budgets):
                    combinatorial = False
                    witnesses["budget_constrained"] = y
                    break
    return DomainFlags(complete, additive, connected, comprehensive, combinatorial, witnesses)


def faithful_F(C: ChoiceFunction) -> PureModel:
    """Pure model over bundles: budget ``2^Y`` yields the single bundle ``C(Y)``."""
    g = C.ground
    if g.n > MAX_F_GROUND:
        raise ScaleError(f"bundle space is 2^{g.n}; cap is 2^{MAX_F_GROUND}")
    bundles = [g.bundle(m) for m in g.masks()]
    budgets = []
    choice = {}
    for Y in g.masks():
        b = frozenset(bundles[m] for m in g.masks() if m & ~Y == 0)
        budgets.append(b)
        choice[b] = frozenset([bundles[C.eval_mask(Y)]])
    return PureModel(tuple(bundles), tuple(budgets), choice)


def _atom_label(atom):
    if isinstance(atom, frozenset) and len(atom) == 1:
        return next(iter(atom))
    return atom


def faithful_G(m: PureModel, leq: Optional[Callable] = None) -> ChoiceFunction:
    """Combinatorial choice function on the atoms of a Boolean lattice of alternatives.

    ``leq`` defaults to inclusion when alternatives are frozensets. Option set
    ``∅`` is filled with ``∅`` when no budget covers it; any other uncovered
    option set is an error.
    """
    alts = m.alternatives
    if leq is None:
        if not all(isinstance(x, frozenset) for x in alts):
            raise InputError("alternatives are not sets; pass an explicit order")
        leq = _subset_leq
    bottoms = [x for x in alts if all(leq(x, y) for y in alts)]
    if len(bottoms) != 1:
        raise NotBooleanLattice("alternatives have no unique bottom")
    bottom = bottoms[0]
    atoms = [x for x in alts if x != bottom and all(y in (bottom, x) for y in alts if leq(y, x))]
    if len(alts) != 1 << len(atoms):
        raise NotBooleanLattice(f"{len(alts)} alternatives cannot form a Boolean lattice on {len(atoms)} atoms")
    ground = GroundSet(tuple(_atom_label(a) for a in atoms))
    below = {x: sum(1 << i for i, a in enumerate(atoms) if leq(a, x)) for x in alts}
    if len(set(below.values())) != len(alts):
        raise NotBooleanLattice("two alternatives share the same atoms")
    for x, y in itertools.product(alts, repeat=2):
        if leq(x, y) != (below[x] & ~below[y] == 0):
            raise NotBooleanLattice("order is not inclusion of atom sets", {"x": x, "y": y})
    of_mask = {v: x for x, v in below.items()}

    table = np.full(1 << len(atoms), -1, dtype=np.int64)
    for b in m.budgets:
        c = m.choice[b]
        if len(c) != 1:
            raise NotDecisive(f"choice from {set(b)} has {len(c)} alternatives", {"B": b})
        top_mask = 0
        for x in b:
            top_mask |= below[x]
        greatest = of_mask[top_mask]
        if greatest not in b:
            raise NotBooleanLattice("budget is not join-closed", {"B": b})
        if any(of_mask[s] not in b for s in _submasks(top_mask)):
            raise NotBooleanLattice("budget is not downward closed", {"B": b})
        chosen = below[next(iter(c))]
        if table[top_mask] not in (-1, chosen):
            raise InputError(f"two budgets share option set {ground.format(top_mask)} but choose differently")
        table[top_mask] = chosen
    if table[0] == -1:
        table[0] = 0
    missing = np.nonzero(table < 0)[0]
    if missing.size:
        raise InputError(f"no budget has option set {ground.format(int(missing[0]))}; domain is incomplete")
    return ChoiceFunction(ground, table_data=table)


def _submasks(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask
