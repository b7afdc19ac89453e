"""Table-scan kernels shared by the axiom checkers.

Every kernel works on a choice table: an int64 array ``t`` of length ``2**n``
where ``t[S]`` is the chosen mask for option set mask ``S``.

Two implementations exist. The numba one loops pair by pair and stops at the
first violation; the numpy one evaluates vectorized predicates over chunks of
pairs. Both report the same first violation in the canonical order (outer
mask ascending, inner mask ascending). Set ``COMBCHOICE_DISABLE_NUMBA=1`` to
force the numpy path.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba as nb
except ImportError:  # pragma: no cover
    nb = None

NUMBA_AVAILABLE = nb is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("COMBCHOICE_DISABLE_NUMBA", "0") not in ("1", "true", "yes")

# pair predicates
SUBS = 0           # inner ⊆ outer: C(S) ∩ T ⊄ C(T)
IRE = 1            # inner ⊆ outer: C(S) ⊆ T and C(T) ≠ C(S)
PI = 2             # any: C(S ∪ T) ≠ C(C(S) ∪ C(T))
SIZE_MONO = 3      # inner ⊆ outer: |C(T)| > |C(S)|
SUBADD = 4         # any: C(S ∪ T) ⊄ C(S) ∪ C(T)
MONO_REJ = 5       # inner ⊇ outer: S \ C(S) ⊄ T \ C(T)
ANTI_NONREJ = 6    # inner ⊇ outer: C(T) ∪ (E\T) ⊄ C(S) ∪ (E\S)
PI_ADD = 7         # any: C(S ∪ T) ≠ C(C(S) ∪ T)
PI_IMAGE = 8       # any: C(C(S ∪ T)) ≠ C(C(S) ∪ C(T))

REL_ANY, REL_SUB, REL_SUP = 0, 1, 2
RELATION_OF = {
    SUBS: REL_SUB, IRE: REL_SUB, PI: REL_ANY, SIZE_MONO: REL_SUB, SUBADD: REL_ANY,
    MONO_REJ: REL_SUP, ANTI_NONREJ: REL_SUP, PI_ADD: REL_ANY, PI_IMAGE: REL_ANY,
}

_CHUNK = 1 << 20


def _popcount_vec(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64)
    return np.bitwise_count(x).astype(np.int64) if hasattr(np, "bitwise_count") else \
        np.array([bin(int(v)).count("1") for v in x], dtype=np.int64)


def violates_vec(code: int, t: np.ndarray, full: int, S: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Vectorized pair predicate: True where the pair ``(S[k], T[k])`` violates."""
    cS, cT = t[S], t[T]
    if code == SUBS:
        return (cS & T & ~cT) != 0
    if code == IRE:
        return ((cS & ~T) == 0) & (cT != cS)
    if code == PI:
        return t[S | T] != t[cS | cT]
    if code == SIZE_MONO:
        return _popcount_vec(cT) > _popcount_vec(cS)
    if code == SUBADD:
        return (t[S | T] & ~(cS | cT)) != 0
    if code == MONO_REJ:
        return ((S & ~cS) & ~(T & ~cT)) != 0
    if code == ANTI_NONREJ:
        return ((cT | (full & ~T)) & ~(cS | (full & ~S))) != 0
    if code == PI_ADD:
        return t[S | T] != t[cS | T]
    if code == PI_IMAGE:
        return t[t[S | T]] != t[cS | cT]
    raise ValueError(f"unknown predicate code {code}")


def _pairs_for_outer(rel: int, S: int, full: int) -> np.ndarray:
    if rel == REL_ANY:
        return np.arange(full + 1, dtype=np.int64)
    all_masks = np.arange(full + 1, dtype=np.int64)
    if rel == REL_SUB:
        return all_masks[(all_masks & ~S) == 0]
    return all_masks[(all_masks & S) == S]


def scan_pairs_numpy(t: np.ndarray, n: int, code: int) -> tuple:
    """First violating ``(S, T)`` in canonical order, or ``(-1, -1)``."""
    full = (1 << n) - 1
    rel = RELATION_OF[code]
    outer_block = max(1, _CHUNK >> n)
    masks = np.arange(full + 1, dtype=np.int64)
    for start in range(0, full + 1, outer_block):
        outer = masks[start:start + outer_block]
        S = np.repeat(outer, full + 1)
        T = np.tile(masks, outer.size)
        if rel == REL_SUB:
            keep = (T & ~S) == 0
        elif rel == REL_SUP:
            keep = (T & S) == S
        else:
            keep = None
        if keep is not None:
            S, T = S[keep], T[keep]
        bad = np.nonzero(violates_vec(code, t, full, S, T))[0]
        if bad.size:
            k = int(bad[0])
            return int(S[k]), int(T[k])
    return -1, -1


def scan_singles_numpy(t: np.ndarray, n: int, code: int, param: int) -> int:
    S = np.arange(1 << n, dtype=np.int64)
    bad = np.nonzero(violates_single_vec(code, t, S, param))[0]
    return int(bad[0]) if bad.size else -1


IDEMPOTENT = 0      # C(C(S)) ≠ C(S)
CAPACITY = 1        # |C(S)| ≠ min(|S|, q)


def violates_single_vec(code, t, S, param):
    if code == IDEMPOTENT:
        return t[t[S]] != t[S]
    if code == CAPACITY:
        return _popcount_vec(t[S]) != np.minimum(_popcount_vec(S), param)
    raise ValueError(f"unknown single code {code}")


def size_mono_step_numpy(t: np.ndarray, n: int) -> tuple:
    """First ``(S, a)`` with ``a ∉ S`` and ``|C(S ∪ {a})| < |C(S)|``."""
    S = np.arange(1 << n, dtype=np.int64)
    sizes = _popcount_vec(t)
    for_each = []
    for a in range(n):
        bit = 1 << a
        sel = (S & bit) == 0
        bad = sel & (sizes[S | bit] < sizes)
        for_each.append(np.where(bad, S, 1 << n))
    stacked = np.stack(for_each)  # (n, 2^n)
    best_S = stacked.min(axis=0)
    hits = np.nonzero(best_S < (1 << n))[0]
    if not hits.size:
        return -1, -1
    s = int(hits[0])
    a = int(np.nonzero(stacked[:, s] == s)[0][0])
    return s, a


def revealed_priority_numpy(t: np.ndarray, n: int) -> np.ndarray:
    """Row masks ``rows[a]``: the set of ``b`` with ``a`` revealed strictly prioritized to ``b``."""
    S = np.arange(1 << n, dtype=np.int64)
    rejected = S & ~t
    rows = np.zeros(n, dtype=np.int64)
    for a in range(n):
        chosen_a = (t >> a) & 1 == 1
        if chosen_a.any():
            rows[a] = np.bitwise_or.reduce(rejected[chosen_a])
    return rows


def respects_numpy(t: np.ndarray, n: int, ranks: np.ndarray) -> tuple:
    """First ``(S, a, b)`` with ``a ∈ C(S)``, ``b ∈ S \\ C(S)`` and ``b`` ranked above ``a``."""
    S = np.arange(1 << n, dtype=np.int64)
    rejected = S & ~t
    sentinel = 1 << n
    best = (sentinel, n, n)
    for a in range(n):
        chosen_a = ((t >> a) & 1) == 1
        for b in range(n):
            if ranks[b] >= ranks[a]:
                continue
            hits = np.nonzero(chosen_a & (((rejected >> b) & 1) == 1))[0]
            if hits.size and (int(hits[0]), a, b) < best:
                best = (int(hits[0]), a, b)
    return best if best[0] < sentinel else (-1, -1, -1)


if NUMBA_AVAILABLE:

    @nb.njit(cache=True, inline="always")
    def _popcount(x):
        c = 0
        while x:
            x &= x - 1
            c += 1
        return c

    @nb.njit(cache=True)
    def _violates(code, t, full, S, T):
        cS = t[S]
        cT = t[T]
        if code == SUBS:
            return (cS & T & ~cT) != 0
        if code == IRE:
            return (cS & ~T) == 0 and cT != cS
        if code == PI:
            return t[S | T] != t[cS | cT]
        if code == SIZE_MONO:
            return _popcount(cT) > _popcount(cS)
        if code == SUBADD:
            return (t[S | T] & ~(cS | cT)) != 0
        if code == MONO_REJ:
            return ((S & ~cS) & ~(T & ~cT)) != 0
        if code == ANTI_NONREJ:
            return ((cT | (full & ~T)) & ~(cS | (full & ~S))) != 0
        if code == PI_ADD:
            return t[S | T] != t[cS | T]
        return t[t[S | T]] != t[cS | cT]

    @nb.njit(cache=True)
    def _scan_pairs_jit(t, n, code, rel):
        full = (1 << n) - 1
        for S in range(full + 1):
            if rel == REL_ANY:
                for T in range(full + 1):
                    if _violates(code, t, full, S, T):
                        return S, T
            elif rel == REL_SUB:
                T = 0
                while True:
                    if _violates(code, t, full, S, T):
                        return S, T
                    if T == S:
                        break
                    T = (T - S) & S
            else:
                free = full & ~S
                sub = 0
                while True:
                    if _violates(code, t, full, S, S | sub):
                        return S, S | sub
                    if sub == free:
                        break
                    sub = (sub - free) & free
        return -1, -1

    @nb.njit(cache=True)
    def _scan_singles_jit(t, n, code, param):
        for S in range(1 << n):
            c = t[S]
            if code == IDEMPOTENT:
                if t[c] != c:
                    return S
            else:
                k = _popcount(S)
                if _popcount(c) != (k if k < param else param):
                    return S
        return -1

    @nb.njit(cache=True)
    def _size_mono_step_jit(t, n):
        for S in range(1 << n):
            k = _popcount(t[S])
            for a in range(n):
                bit = 1 << a
                if S & bit == 0 and _popcount(t[S | bit]) < k:
                    return S, a
        return -1, -1

    @nb.njit(cache=True)
    def _revealed_priority_jit(t, n):
        rows = np.zeros(n, dtype=np.int64)
        for S in range(1 << n):
            c = t[S]
            rej = S & ~c
            if rej == 0:
                continue
            for a in range(n):
                if (c >> a) & 1:
                    rows[a] |= rej
        return rows

    @nb.njit(cache=True)
    def _respects_jit(t, n, ranks):
        for S in range(1 << n):
            c = t[S]
            rej = S & ~c
            if rej == 0 or c == 0:
                continue
            for a in range(n):
                if (c >> a) & 1:
                    for b in range(n):
                        if (rej >> b) & 1 and ranks[b] < ranks[a]:
                            return S, a, b
        return -1, -1, -1

    def scan_pairs_numba(t, n, code):
        S, T = _scan_pairs_jit(t, n, code, RELATION_OF[code])
        return int(S), int(T)

    def scan_singles_numba(t, n, code, param):
        return int(_scan_singles_jit(t, n, code, param))

    def size_mono_step_numba(t, n):
        S, a = _size_mono_step_jit(t, n)
        return int(S), int(a)

    def revealed_priority_numba(t, n):
        return _revealed_priority_jit(t, n)

    def respects_numba(t, n, ranks):
        S, a, b = _respects_jit(t, n, ranks)
        return int(S), int(a), int(b)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def scan_pairs(t, n, code):
    if USE_NUMBA:
        return scan_pairs_numba(t, n, code)
    return scan_pairs_numpy(t, n, code)


def scan_singles(t, n, code, param=0):
    if USE_NUMBA:
        return scan_singles_numba(t, n, code, param)
    return scan_singles_numpy(t, n, code, param)


def size_mono_step(t, n):
    if USE_NUMBA:
        return size_mono_step_numba(t, n)
    return size_mono_step_numpy(t, n)


def revealed_priority(t, n):
    if USE_NUMBA:
        return revealed_priority_numba(t, n)
    return revealed_priority_numpy(t, n)


def respects(t, n, ranks):
    if USE_NUMBA:
        return respects_numba(t, n, ranks)
    return respects_numpy(t, n, ranks)
