"""Decision procedures, with witnesses, for the behavioral axioms on choice functions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels as K
from .core import ChoiceFunction, LinearOrder, Relation, popcount


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of one axiom check.

    ``witness`` maps role names (``"S"``, ``"T"``, ``"a"``, ...) to bundles or
    element labels and is present exactly when the axiom fails. ``mode`` is
    ``"exhaustive"`` or ``"sampled"``; sampled reports carry their seed.
    """

    axiom: str
    holds: bool
    witness: Optional[dict] = None
    mode: str = "exhaustive"
    seed: Optional[int] = None

    def __post_init__(self):
        if self.holds == (self.witness is not None):
            raise ValueError("a report has a witness exactly when the axiom fails")

    def __bool__(self):
        return self.holds

    def describe(self) -> str:
        verdict = "PASS" if self.holds else "FAIL"
        out = f"{self.axiom}: {verdict}"
        if self.witness:
            parts = []
            for role, value in self.witness.items():
                if isinstance(value, frozenset):
                    value = "{" + ",".join(sorted(map(str, value))) + "}"
                parts.append(f"{role}={value}")
            out += " [" + " ".join(parts) + "]"
        if self.mode != "exhaustive":
            out += f" ({self.mode}, seed {self.seed})"
        return out


@dataclass(frozen=True)
class RevealedPriority:
    relation: Relation
    # first option set revealing each pair, keyed by (a, b)
    sources: dict = field(default_factory=dict, compare=False)


_PAIR_NAMES = {
    K.SUBS: "substitutability",
    K.IRE: "ire",
    K.PI: "path_independence",
    K.SIZE_MONO: "size_monotonicity",
    K.SUBADD: "subadditivity",
    K.MONO_REJ: "monotone_rejection",
    K.ANTI_NONREJ: "antitone_non_rejection",
    K.PI_ADD: "pi_additive",
    K.PI_IMAGE: "pi_additive_in_image",
}


def _pair_count(n: int, code: int) -> int:
    return 4 ** n if K.RELATION_OF[code] == K.REL_ANY else 3 ** n


def _sample_pairs(n: int, code: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    full = (1 << n) - 1
    S = rng.integers(0, full + 1, size=count, dtype=np.int64)
    T = rng.integers(0, full + 1, size=count, dtype=np.int64)
    rel = K.RELATION_OF[code]
    if rel == K.REL_SUB:
        T = T & S
    elif rel == K.REL_SUP:
        T = T | S
    return S, T


def _scan(C: ChoiceFunction, code: int, max_pairs: Optional[int], seed: int):
    """Return ``(S, T, mode)`` for the first violation, or ``(-1, -1, mode)``."""
    n = C.ground.n
    t = C.table
    if max_pairs is None or _pair_count(n, code) <= max_pairs:
        S, T = K.scan_pairs(t, n, code)
        return S, T, "exhaustive"
    S, T = _sample_pairs(n, code, max_pairs, seed)
    bad = np.nonzero(K.violates_vec(code, t, C.ground.full, S, T))[0]
    if bad.size:
        # among sampled violations keep the canonically first one
        k = min(bad, key=lambda i: (int(S[i]), int(T[i])))
        return int(S[k]), int(T[k]), "sampled"
    return -1, -1, "sampled"


def _pair_report(C, code, max_pairs, seed, roles=("S", "T"), extra=None) -> AxiomReport:
    S, T, mode = _scan(C, code, max_pairs, seed)
    sampled_seed = seed if mode == "sampled" else None
    if S < 0:
        return AxiomReport(_PAIR_NAMES[code], True, None, mode, sampled_seed)
    g = C.ground
    witness = {roles[0]: g.bundle(S), roles[1]: g.bundle(T)}
    if extra is not None:
        witness.update(extra(S, T))
    return AxiomReport(_PAIR_NAMES[code], False, witness, mode, sampled_seed)


def check_substitutability(C: ChoiceFunction, max_pairs: Optional[int] = None, seed: int = 0) -> AxiomReport:
    """``T ⊆ S`` implies ``C(S) ∩ T ⊆ C(T)``; witness ``(S, T, a)``."""
    g = C.ground

    def element(S, T):
        bad = C.eval_mask(S) & T & ~C.eval_mask(T)
        return {"a": g.elements[(bad & -bad).bit_length() - 1]}

    return _pair_report(C, K.SUBS, max_pairs, seed, extra=element)


def check_ire(C: ChoiceFunction, max_pairs: Optional[int] = None, seed: int = 0) -> AxiomReport:
    """Irrelevance of rejected elements: ``C(S) ⊆ T ⊆ S`` implies ``C(T) = C(S)``."""
    return _pair_report(C, K.IRE, max_pairs, seed)


def check_path_independence(C: ChoiceFunction, max_pairs: Optional[int] = None, seed: int = 0) -> AxiomReport:
    return _pair_report(C, K.PI, max_pairs, seed)


def check_size_monotonicity(C: ChoiceFunction, full_scan: bool = False) -> AxiomReport:
    """``T ⊆ S`` implies ``|C(T)| ≤ |C(S)|``.

    By default only one-element extensions ``S ⊂ S ∪ {a}`` are scanned, which
    is equivalent since any inclusion is a chain of such steps. The witness is
    then ``(S = T ∪ {a}, T)``. ``full_scan`` checks every nested pair instead.
    """
    if full_scan:
        return _pair_report(C, K.SIZE_MONO, None, 0)
    T, a = K.size_mono_step(C.table, C.ground.n)
    if T < 0:
        return AxiomReport("size_monotonicity", True)
    g = C.ground
    S = T | (1 << a)
    return AxiomReport("size_monotonicity", False, {"S": g.bundle(S), "T": g.bundle(T)})


def check_idempotence(C: ChoiceFunction) -> AxiomReport:
    S = K.scan_singles(C.table, C.ground.n, K.IDEMPOTENT)
    if S < 0:
        return AxiomReport("idempotence", True)
    return AxiomReport("idempotence", False, {"S": C.ground.bundle(S)})


def check_capacity_filling(C: ChoiceFunction) -> tuple:
    """Return ``(q, report)``; ``q`` is ``None`` when ``C`` is not capacity-filling.

    The only candidate capacity is ``max |C(S)|``.
    """
    q = int(max(popcount(int(c)) for c in C.table))
    S = K.scan_singles(C.table, C.ground.n, K.CAPACITY, q)
    if S < 0:
        return q, AxiomReport("capacity_filling", True)
    report = AxiomReport("capacity_filling", False, {"S": C.ground.bundle(S), "q": q})
    return None, report


def check_respects_priorities(C: ChoiceFunction, order: LinearOrder) -> AxiomReport:
    """Every chosen element outranks every rejected one; witness ``(S, a, b)`` with ``b`` ranked above ``a``."""
    g = C.ground
    S, a, b = K.respects(C.table, g.n, order.ranks(g))
    if S < 0:
        return AxiomReport("respects_priorities", True)
    return AxiomReport("respects_priorities", False,
                       {"S": g.bundle(S), "a": g.elements[a], "b": g.elements[b]})


def revealed_strict_priority(C: ChoiceFunction) -> RevealedPriority:
    """The relation ``a ≻* b`` iff some ``S`` contains both, choosing ``a`` and rejecting ``b``."""
    g = C.ground
    rows = K.revealed_priority(C.table, g.n)
    pairs = set()
    for a in range(g.n):
        for b in range(g.n):
            if rows[a] >> b & 1:
                pairs.add((g.elements[a], g.elements[b]))
    sources = {}
    if pairs:
        t = C.table
        for S in g.masks():
            c = int(t[S])
            rej = S & ~c
            if not rej:
                continue
            for a in range(g.n):
                if c >> a & 1:
                    for b in range(g.n):
                        if rej >> b & 1:
                            sources.setdefault((g.elements[a], g.elements[b]), g.bundle(S))
    return RevealedPriority(Relation(g.elements, frozenset(pairs)), sources)


def check_warsprio(C: ChoiceFunction) -> AxiomReport:
    """Asymmetry of revealed strict priority; witness is the first mutually revealed pair."""
    rp = revealed_strict_priority(C)
    for a, b in rp.relation:
        if (b, a) in rp.relation:
            return AxiomReport("warsprio", False, {
                "a": a, "b": b,
                "S_ab": rp.sources[(a, b)], "S_ba": rp.sources[(b, a)],
            })
    return AxiomReport("warsprio", True)


def check_subs_equivalents(C: ChoiceFunction, max_pairs: Optional[int] = None, seed: int = 0) -> tuple:
    """Subadditivity, monotone rejection and antitone non-rejection reports."""
    return (
        _pair_report(C, K.SUBADD, max_pairs, seed),
        _pair_report(C, K.MONO_REJ, max_pairs, seed),
        _pair_report(C, K.ANTI_NONREJ, max_pairs, seed),
    )


def check_pi_variants(C: ChoiceFunction, max_pairs: Optional[int] = None, seed: int = 0) -> tuple:
    """Two reformulations of path independence.

    The first is ``C(S ∪ T) = C(C(S) ∪ T)``. The second is idempotence plus
    ``C(C(S ∪ T)) = C(C(S) ∪ C(T))``; an idempotence failure is reported with
    the single witness ``S``.
    """
    first = _pair_report(C, K.PI_ADD, max_pairs, seed)
    idem = check_idempotence(C)
    if not idem.holds:
        second = AxiomReport("pi_additive_in_image", False, idem.witness)
    else:
        second = _pair_report(C, K.PI_IMAGE, max_pairs, seed)
    return first, second


CHECKS = {
    "subs": check_substitutability,
    "ire": check_ire,
    "pi": check_path_independence,
    "size_mono": check_size_monotonicity,
    "idempotence": check_idempotence,
    "warsprio": check_warsprio,
    "capacity": lambda C: check_capacity_filling(C)[1],
}


def replay(C: ChoiceFunction, report: AxiomReport) -> bool:
    """Re-check a failing report's witness against the plain set definition.

    Returns True when the witness really exhibits a violation.
    """
    w = report.witness
    if w is None:
        return False
    C_ = C
    name = report.axiom
    if name == "substitutability":
        S, T, a = w["S"], w["T"], w["a"]
        return T <= S and a in (C_(S) & T) and a not in C_(T)
    if name == "ire":
        S, T = w["S"], w["T"]
        return C_(S) <= T <= S and C_(S) != C_(T)
    if name == "path_independence":
        S, T = w["S"], w["T"]
        return C_(S | T) != C_(C_(S) | C_(T))
    if name == "size_monotonicity":
        S, T = w["S"], w["T"]
        return T <= S and len(C_(T)) > len(C_(S))
    if name == "idempotence":
        S = w["S"]
        return C_(C_(S)) != C_(S)
    if name == "capacity_filling":
        # any q fails somewhere; the witness shows the max-size candidate failing
        S, q = w["S"], w["q"]
        return len(C_(S)) != min(len(S), q)
    if name == "respects_priorities":
        raise ValueError("respects_priorities witnesses need the order; use replay_respects")
    if name == "warsprio":
        a, b = w["a"], w["b"]
        S1, S2 = w["S_ab"], w["S_ba"]
        return ({a, b} <= S1 and a in C_(S1) and b not in C_(S1)
                and {a, b} <= S2 and b in C_(S2) and a not in C_(S2))
    if name == "subadditivity":
        S, T = w["S"], w["T"]
        return not C_(S | T) <= C_(S) | C_(T)
    if name == "monotone_rejection":
        S, T = w["S"], w["T"]
        return S <= T and not (S - C_(S)) <= (T - C_(T))
    if name == "antitone_non_rejection":
        S, T = w["S"], w["T"]
        E = C.ground.bundle(C.ground.full)
        return S <= T and not (C_(T) | (E - T)) <= (C_(S) | (E - S))
    if name == "pi_additive":
        S, T = w["S"], w["T"]
        return C_(S | T) != C_(C_(S) | T)
    if name == "pi_additive_in_image":
        if "T" not in w:
            S = w["S"]
            return C_(C_(S)) != C_(S)
        S, T = w["S"], w["T"]
        return C_(C_(S | T)) != C_(C_(S) | C_(T))
    raise ValueError(f"no replay for axiom {name!r}")


def replay_respects(C: ChoiceFunction, order: LinearOrder, report: AxiomReport) -> bool:
    w = report.witness
    S, a, b = w["S"], w["a"], w["b"]
    chosen = C(S)
    return a in chosen and b in S - chosen and order.prefers(b, a)
