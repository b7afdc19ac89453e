"""Ground sets, bundles, orders, relations and choice functions.

Bundles are handled internally as integer bit masks over a :class:`GroundSet`;
the public surface speaks in frozensets of element labels.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Optional, Protocol

import numpy as np

MAX_GROUND = 24

Bundle = frozenset


class ChoiceKitError(Exception):
    """Base class for errors raised by this package."""


class InputError(ChoiceKitError, ValueError):
    pass


class ScaleError(ChoiceKitError):
    """Raised when an operation is asked to run beyond its size cap."""


class CycleError(ChoiceKitError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"relation has a cycle: {' -> '.join(map(str, self.cycle))}")


class NotPathIndependent(ChoiceKitError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class InternalError(ChoiceKitError):
    """A verification that a proved result guarantees has failed."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def iter_bits(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def iter_submasks(mask: int) -> Iterator[int]:
    """Submasks of ``mask`` in increasing numeric order, starting at 0."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


@dataclass(frozen=True)
class GroundSet:
    """A finite, ordered set of element labels.

    The declared order fixes every iteration order in the package, so
    "first found" witnesses are reproducible.
    """

    elements: tuple

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if len(set(elements)) != len(elements):
            raise InputError(f"duplicate labels in ground set: {elements}")
        if len(elements) > MAX_GROUND:
            raise ScaleError(f"ground set has {len(elements)} elements; cap is {MAX_GROUND}")

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, label):
        return label in self.index

    def mask(self, labels: Iterable) -> int:
        if isinstance(labels, int):
            if labels & ~self.full:
                raise InputError(f"mask {labels:#x} has bits outside the ground set")
            return labels
        m = 0
        for label in labels:
            try:
                m |= 1 << self.index[label]
            except KeyError:
                raise InputError(f"element {label!r} is not in the ground set {self.elements}") from None
        return m

    def bundle(self, mask: int) -> Bundle:
        return frozenset(self.elements[i] for i in iter_bits(mask))

    def sorted_labels(self, mask: int) -> list:
        return [self.elements[i] for i in iter_bits(mask)]

    def masks(self) -> range:
        return range(1 << self.n)

    def format(self, mask: int) -> str:
        return "{" + ",".join(map(str, self.sorted_labels(mask))) + "}"


@dataclass(frozen=True)
class LinearOrder:
    """A strict ranking, highest priority first.

    The carrier is the set of ranked labels. Rankings that cover only part of
    a ground set are allowed and behave as if unranked elements were absent.
    """

    ranking: tuple

    def __post_init__(self):
        ranking = tuple(self.ranking)
        object.__setattr__(self, "ranking", ranking)
        if len(set(ranking)) != len(ranking):
            raise InputError(f"ranking repeats an element: {ranking}")

    @classmethod
    def parse(cls, text: str) -> "LinearOrder":
        """Build from ``"a > c > b"``."""
        return cls(tuple(tok.strip() for tok in text.split(">") if tok.strip()))

    @cached_property
    def position(self) -> dict:
        return {e: i for i, e in enumerate(self.ranking)}

    @property
    def carrier(self) -> frozenset:
        return frozenset(self.ranking)

    def prefers(self, a, b) -> bool:
        return self.position[a] < self.position[b]

    def ranks(self, ground: GroundSet) -> np.ndarray:
        """Rank of each ground element (0 = highest); unranked get ``n``."""
        out = np.full(ground.n, ground.n + len(self.ranking), dtype=np.int64)
        for label, pos in self.position.items():
            out[ground.index[label]] = pos
        return out

    def mask_ranking(self, ground: GroundSet) -> tuple:
        return tuple(ground.index[e] for e in self.ranking)

    def __str__(self):
        return " > ".join(map(str, self.ranking))

    def __len__(self):
        return len(self.ranking)


def top(S: Iterable, order: LinearOrder):
    """Highest-ranked member of ``S`` under ``order``, or ``None`` if ``S`` is empty."""
    S = frozenset(S)
    missing = S - order.carrier
    if missing:
        raise InputError(f"elements {sorted(map(str, missing))} are not ranked by {order}")
    if not S:
        return None
    return min(S, key=order.position.__getitem__)


def top_mask(mask: int, ranking: tuple) -> int:
    """Bit of the first index in ``ranking`` present in ``mask`` (0 if none)."""
    for i in ranking:
        if mask >> i & 1:
            return 1 << i
    return 0


@dataclass(frozen=True)
class Relation:
    """A binary relation on a finite carrier, stored as a set of pairs."""

    carrier: tuple
    pairs: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        carrier = tuple(self.carrier)
        object.__setattr__(self, "carrier", carrier)
        pairs = frozenset(tuple(p) for p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        known = set(carrier)
        for a, b in pairs:
            if a not in known or b not in known:
                raise InputError(f"pair {(a, b)!r} leaves the carrier")

    @cached_property
    def index(self) -> dict:
        return {e: i for i, e in enumerate(self.carrier)}

    def __contains__(self, pair):
        return tuple(pair) in self.pairs

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs, key=lambda p: (self.index[p[0]], self.index[p[1]])))

    def matrix(self) -> np.ndarray:
        m = np.zeros((len(self.carrier), len(self.carrier)), dtype=bool)
        for a, b in self.pairs:
            m[self.index[a], self.index[b]] = True
        return m

    @classmethod
    def from_matrix(cls, carrier, m: np.ndarray) -> "Relation":
        carrier = tuple(carrier)
        rows, cols = np.nonzero(m)
        return cls(carrier, frozenset((carrier[i], carrier[j]) for i, j in zip(rows, cols)))

    def is_transitive(self) -> bool:
        m = self.matrix().astype(np.int64)
        return not np.any((m @ m > 0) & ~self.matrix())

    def is_asymmetric(self) -> bool:
        m = self.matrix()
        return not np.any(m & m.T)

    def top(self, items: Iterable) -> frozenset:
        """Greatest elements of ``items``: those related to every member, themselves included."""
        items = list(items)
        return frozenset(x for x in items if all((x, y) in self.pairs for y in items))


def transitive_closure(R: Relation) -> Relation:
    m = R.matrix()
    for k in range(len(R.carrier)):
        m |= m[:, k : k + 1] & m[k : k + 1, :]
    return Relation.from_matrix(R.carrier, m)


def _find_cycle(m: np.ndarray, alive: list) -> list:
    # every alive node has an alive predecessor, so walking backwards must repeat
    node = alive[0]
    seen = {}
    path = []
    while node not in seen:
        seen[node] = len(path)
        path.append(node)
        node = next(p for p in alive if m[p, node])
    cycle = path[seen[node]:]
    cycle.reverse()
    return cycle


def szpilrajn_extend(R: Relation) -> LinearOrder:
    """Extend an acyclic relation to a linear order.

    Repeatedly takes the earliest carrier element (in carrier order) that no
    remaining element points to. Reflexive pairs count as cycles.
    """
    m = R.matrix()
    alive = list(range(len(R.carrier)))
    ranking = []
    while alive:
        pick = next((j for j in alive if not any(m[i, j] for i in alive)), None)
        if pick is None:
            raise CycleError([R.carrier[i] for i in _find_cycle(m, alive)])
        ranking.append(R.carrier[pick])
        alive.remove(pick)
    return LinearOrder(tuple(ranking))


class Rule(Protocol):
    def evaluate(self, ground: GroundSet, mask: int) -> int: ...


@dataclass(frozen=True, eq=False)
class ChoiceFunction:
    """A choice function on the complete domain ``2^E``.

    Exactly one of ``table`` (an int64 array of chosen masks indexed by option
    set mask) or ``rule`` (anything with ``evaluate(ground, mask)``) is set.
    """

    ground: GroundSet
    rule: Optional[Rule] = None
    table_data: Optional[np.ndarray] = None

    def __post_init__(self):
        if (self.rule is None) == (self.table_data is None):
            raise InputError("a choice function needs exactly one of rule or table")
        if self.table_data is not None:
            t = np.asarray(self.table_data, dtype=np.int64)
            if t.shape != (1 << self.ground.n,):
                raise InputError(f"table has shape {t.shape}; expected {(1 << self.ground.n,)}")
            idx = np.arange(t.size, dtype=np.int64)
            bad = np.nonzero(t & ~idx)[0]
            if bad.size:
                S = int(bad[0])
                raise InputError(
                    f"C({self.ground.format(S)}) = {self.ground.format(int(t[S]))} is not a subset"
                )
            t = t.copy()
            t.setflags(write=False)
            object.__setattr__(self, "table_data", t)

    @classmethod
    def from_table(cls, ground: GroundSet, mapping: Mapping) -> "ChoiceFunction":
        """Build from a map of option sets (label iterables) to chosen sets."""
        t = np.full(1 << ground.n, -1, dtype=np.int64)
        for S, chosen in mapping.items():
            t[ground.mask(S)] = ground.mask(chosen)
        t[0] = 0 if t[0] == -1 else t[0]
        missing = np.nonzero(t < 0)[0]
        if missing.size:
            raise InputError(f"table has no entry for option set {ground.format(int(missing[0]))}")
        return cls(ground, table_data=t)

    @classmethod
    def from_function(cls, ground: GroundSet, fn: Callable[[frozenset], Iterable]) -> "ChoiceFunction":
        t = np.array([ground.mask(fn(ground.bundle(S))) for S in ground.masks()], dtype=np.int64)
        return cls(ground, table_data=t)

    @classmethod
    def identity(cls, ground: GroundSet) -> "ChoiceFunction":
        return cls(ground, table_data=np.arange(1 << ground.n, dtype=np.int64))

    @classmethod
    def constant_empty(cls, ground: GroundSet) -> "ChoiceFunction":
        return cls(ground, table_data=np.zeros(1 << ground.n, dtype=np.int64))

    def eval_mask(self, mask: int) -> int:
        if self.table_data is not None:
            return int(self.table_data[mask])
        if mask == 0:
            return 0
        return self.rule.evaluate(self.ground, mask)

    def __call__(self, S: Iterable) -> Bundle:
        return self.ground.bundle(self.eval_mask(self.ground.mask(S)))

    @cached_property
    def table(self) -> np.ndarray:
        """The full table, materialized once for rule-backed functions."""
        if self.table_data is not None:
            return self.table_data
        t = np.fromiter((self.eval_mask(S) for S in self.ground.masks()), dtype=np.int64,
                        count=1 << self.ground.n)
        if np.any(t & ~np.arange(t.size, dtype=np.int64)):
            raise InternalError(f"rule {self.rule!r} chose outside its option set")
        t.setflags(write=False)
        return t

    def compiled(self) -> "ChoiceFunction":
        return ChoiceFunction(self.ground, table_data=self.table)

    def __eq__(self, other):
        if not isinstance(other, ChoiceFunction):
            return NotImplemented
        return self.ground == other.ground and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.ground, self.table.tobytes()))

    def __repr__(self):
        body = repr(self.rule) if self.rule is not None else "table"
        return f"ChoiceFunction({list(self.ground.elements)}, {body})"

    def items(self):
        """``(S, C(S))`` pairs as bundles, in mask order."""
        for S in self.ground.masks():
            yield self.ground.bundle(S), self.ground.bundle(self.eval_mask(S))


def choice_eval(C: ChoiceFunction, S: Iterable) -> Bundle:
    return C(S)
