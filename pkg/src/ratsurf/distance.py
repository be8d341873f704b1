"""Minimum-distance engines.

Codewords are built by broadcasting additions of precomputed scalar multiples
of generator rows (uint8 arrays), so no field multiplication happens in the
inner loops.  Addition is XOR in characteristic 2, a small modular table for
prime fields and a flat addition table otherwise.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from . import linalg
from .field import GF

ISD_SEED = 20090521
DEFAULT_EXHAUSTIVE_CAP = 10**8
DEFAULT_ISD_CAP = 5 * 10**8
BLOCK = 1 << 16


class CapExceeded(RuntimeError):
    pass


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("RATSURF_THREADS", "1")))
    except ValueError:
        return 1


class _Adder:
    def __init__(self, F: GF):
        if F.order > 256:
            raise ValueError("weight kernels support fields with at most 256 elements")
        self.F = F
        q = F.order
        if F.p == 2:
            self.mode = "xor"
        elif F.k == 1:
            self.mode = "mod"
            self.modtab = (np.arange(2 * q) % q).astype(np.uint8)
        else:
            self.mode = "table"
            self.flat = F.add_table.astype(np.uint8).ravel()

    def __call__(self, a, b):
        if self.mode == "xor":
            return np.bitwise_xor(a, b)
        if self.mode == "mod":
            return self.modtab[np.add(a, b, dtype=np.uint8)]
        q = self.F.order
        return self.flat[a.astype(np.uint16) * q + b]


def scaled_rows(G: np.ndarray, F: GF) -> np.ndarray:
    """mults[i, c] = c * G[i] as uint8, shape (k, q, n)."""
    G = np.asarray(G, dtype=np.int64)
    q = F.order
    return F.mul_table[np.arange(q)[None, :, None], G[:, None, :]].astype(np.uint8)


def _combos(add, mults, rows, n):
    """All F_q-combinations of the given rows; first row is the slowest digit."""
    arr = np.zeros((1, n), dtype=np.uint8)
    for i in rows:
        arr = add(arr[:, None, :], mults[i][None, :, :]).reshape(-1, n)
    return arr


def weight(v) -> int:
    return int(np.count_nonzero(v))


def encode(message, G, F: GF) -> np.ndarray:
    m = np.asarray(message, dtype=np.int64)[None, :]
    return linalg.matmul(m, G, F)[0]


@dataclass
class ExhaustiveResult:
    d: int
    message: np.ndarray
    codeword: np.ndarray
    histogram: np.ndarray  # projective classes per weight
    classes: int


def min_distance_exhaustive(G, F: GF, cap: int = DEFAULT_EXHAUSTIVE_CAP, workers: int | None = None) -> ExhaustiveResult:
    """Exact minimum weight over one representative per projective message class."""
    G = np.asarray(G, dtype=np.int64)
    k, n = G.shape
    if k == 0:
        raise ValueError("the zero code has no minimum distance")
    q = F.order
    classes = (q**k - 1) // (q - 1)
    if classes > cap:
        raise CapExceeded(f"{classes} message classes exceed the exhaustive cap {cap}")
    if linalg.rank(G, F) != k:
        raise ValueError("generator matrix is not of full rank")
    add = _Adder(F)
    mults = scaled_rows(G, F)
    workers = workers or default_workers()
    hist = np.zeros(n + 1, dtype=np.int64)
    best = (n + 1, None)

    tasks = []
    for lead in range(k):
        r = k - 1 - lead
        b = r
        while b > 0 and q**b > BLOCK:
            b -= 1
        inner_rows = list(range(k - b, k))
        outer_rows = list(range(lead + 1, k - b))
        inner = _combos(add, mults, inner_rows, n)
        outer = add(_combos(add, mults, outer_rows, n), mults[lead, 1][None, :])
        tasks.append((lead, inner, outer, outer_rows, inner_rows))

    def run(task, lo, hi):
        lead, inner, outer, _, _ = task
        h = np.zeros(n + 1, dtype=np.int64)
        bw, bidx = n + 1, None
        for o in range(lo, hi):
            block = add(inner, outer[o][None, :])
            w = np.count_nonzero(block, axis=1)
            h += np.bincount(w, minlength=n + 1)
            j = int(np.argmin(w))
            if w[j] < bw:
                bw, bidx = int(w[j]), (lead, o, j)
        return h, bw, bidx

    jobs = []
    for t in tasks:
        m = len(t[2])
        step = max(1, -(-m // workers))
        jobs.extend((t, lo, min(m, lo + step)) for lo in range(0, m, step))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(lambda a: run(*a), jobs))
    else:
        results = [run(*a) for a in jobs]
    for h, bw, bidx in results:
        hist += h
        if bw < best[0]:
            best = (bw, bidx)

    lead, o, j = best[1]
    task = tasks[lead]
    msg = np.zeros(k, dtype=np.int64)
    msg[lead] = 1
    _, _, _, outer_rows, inner_rows = task
    for rows, idx in ((outer_rows, o), (inner_rows, j)):
        for i in reversed(rows):
            msg[i] = idx % q
            idx //= q
    cw = encode(msg, G, F)
    assert weight(cw) == best[0]
    return ExhaustiveResult(best[0], msg, cw, hist, classes)


# ---------------------------------------------------------------------------
# information-set search


@dataclass
class InfoSet:
    columns: list
    rank: int
    systematic: np.ndarray


@dataclass
class DistanceResult:
    d_lower: int
    d_upper: int
    codeword: np.ndarray | None = None
    message: np.ndarray | None = None
    info_sets: list = field(default_factory=list)
    last_weight: int = 0
    enumerated: int = 0
    complete: bool = False

    @property
    def exact(self) -> int | None:
        return self.d_upper if self.d_lower >= self.d_upper else None


def information_sets(G, F: GF, seed: int = ISD_SEED) -> list[InfoSet]:
    """Disjoint information sets picked greedily from a seeded column order."""
    G = np.asarray(G, dtype=np.int64)
    k, n = G.shape
    rng = np.random.default_rng(seed)
    remaining = [int(c) for c in rng.permutation(n)]
    sets = []
    while remaining:
        R, piv, _ = linalg.rref(G, F, col_order=remaining)
        if not piv:
            break
        # rows past the pivots vanish on every remaining column, in particular
        # on this set, which is what the partial-set bound relies on
        sets.append(InfoSet(list(piv), len(piv), R))
        taken = set(piv)
        remaining = [c for c in remaining if c not in taken]
    return sets


def _lower_bound(ranks, k, w, done):
    """Certified bound after all weight <= w messages on the first ``done``
    sets and all weight <= w-1 messages on the others."""
    lb = 0
    for i, r in enumerate(ranks):
        ww = w + 1 if i < done else w
        lb += max(0, ww - (k - r))
    return lb


def isd_schedule(G, F: GF, seed: int = ISD_SEED):
    """Yield ``(enumerated, certified bound)`` after each step of min_distance_isd."""
    G = np.asarray(G, dtype=np.int64)
    k = G.shape[0]
    q = F.order
    ranks = [s.rank for s in information_sets(G, F, seed)]
    spent = 0
    for w in range(1, k + 1):
        for j in range(len(ranks)):
            spent += comb(k, w) * (q - 1) ** (w - 1)
            yield spent, _lower_bound(ranks, k, w, j + 1)


def reachable_lower_bound(G, F: GF, cap: int = DEFAULT_ISD_CAP, seed: int = ISD_SEED) -> int:
    """The certified bound min_distance_isd reaches before hitting ``cap``
    (assuming no early stop); lets callers skip searches that cannot help."""
    lb = 0
    for spent, b in isd_schedule(G, F, seed):
        if spent > cap:
            break
        lb = max(lb, b)
    return lb


def isd_cost(G, F: GF, bound: int, seed: int = ISD_SEED) -> int | None:
    """Codewords min_distance_isd enumerates before certifying d >= ``bound``."""
    for spent, b in isd_schedule(G, F, seed):
        if b >= bound:
            return spent
    return None


def _weight_w_search(add, mults, k, n, w, q, workers):
    """Minimum over messages of Hamming weight exactly w (first nonzero = 1)."""

    def subtree(first):
        best = (n + 1, None)
        stack = [((first,), mults[first, 1][None, :])]
        while stack:
            support, arr = stack.pop()
            if len(support) == w:
                wt = np.count_nonzero(arr, axis=1)
                j = int(np.argmin(wt))
                if wt[j] < best[0]:
                    best = (int(wt[j]), (support, j))
                continue
            need = w - len(support)
            for i in range(k - need, support[-1], -1):
                stack.append((support + (i,), add(arr[:, None, :], mults[i, 1:][None, :, :]).reshape(-1, n)))
        return best

    firsts = list(range(0, k - w + 1))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(subtree, firsts))
    else:
        results = [subtree(f) for f in firsts]
    return min(results, key=lambda t: t[0])


def _message_from(support, idx, k, q):
    msg = np.zeros(k, dtype=np.int64)
    msg[support[0]] = 1
    for i in reversed(support[1:]):
        msg[i] = idx % (q - 1) + 1
        idx //= q - 1
    return msg


def min_distance_isd(
    G,
    F: GF,
    target: int | None = None,
    cap: int = DEFAULT_ISD_CAP,
    seed: int = ISD_SEED,
    upper: tuple[int, np.ndarray] | None = None,
    workers: int | None = None,
    max_k: int = 24,
    progress=None,
) -> DistanceResult:
    """Brouwer-Zimmermann style search.

    Stops when the certified lower bound meets the best weight found (exact
    distance), when ``target`` is bracketed (best <= target <= lower bound),
    or when the next enumeration step would exceed ``cap`` codewords (the
    result then carries the bracket only).
    """
    G = np.asarray(G, dtype=np.int64)
    k, n = G.shape
    if k == 0:
        raise ValueError("the zero code has no minimum distance")
    q = F.order
    if k > max_k or q > 256:
        raise CapExceeded(f"[n={n}, k={k}] over F_{q} is beyond the search limits")
    if linalg.rank(G, F) != k:
        raise ValueError("generator matrix is not of full rank")
    workers = workers or default_workers()
    add = _Adder(F)
    sets = information_sets(G, F, seed)
    ranks = [s.rank for s in sets]
    mults = [scaled_rows(s.systematic, F) for s in sets]

    res = DistanceResult(d_lower=_lower_bound(ranks, k, 0, len(sets)), d_upper=n + 1, info_sets=sets)
    if upper is None:
        # the input rows are codewords too
        j = int(np.argmin(np.count_nonzero(G, axis=1)))
        upper = (weight(G[j]), G[j])
    res.d_upper, res.codeword = upper[0], np.asarray(upper[1])

    def finished():
        if res.d_lower >= res.d_upper:
            return True
        return target is not None and res.d_upper <= target <= res.d_lower

    for w in range(1, k + 1):
        for j, s in enumerate(sets):
            step = comb(k, w) * (q - 1) ** (w - 1)
            if res.enumerated + step > cap:
                return res
            bw, where = _weight_w_search(add, mults[j], k, n, w, q, workers)
            res.enumerated += step
            if bw < res.d_upper:
                msg = _message_from(where[0], where[1], k, q)
                cw = encode(msg, s.systematic, F)
                res.d_upper, res.codeword, res.message = bw, cw, None
            res.last_weight = w
            if w == k and s.rank == k:
                # every nonzero codeword has been produced from this set
                res.d_lower = res.d_upper
                res.complete = True
                return res
            # the bound covers codewords not yet enumerated; those already seen
            # are accounted for by d_upper, so d >= min(d_upper, bound)
            res.d_lower = min(res.d_upper, max(res.d_lower, _lower_bound(ranks, k, w, j + 1)))
            if progress is not None:
                progress(w, j, res)
            if finished():
                res.complete = True
                return res
    return res


def merge_brackets(results):
    """Combine partial searches: best weight by min, certified bound by max."""
    lo = max(r[0] for r in results)
    hi = min(r[1] for r in results)
    return lo, hi


def random_codeword_weights(G, F: GF, count: int, seed: int = 0, chunk: int = 1 << 16):
    """Weights of ``count`` codewords from uniformly random nonzero messages."""
    G = np.asarray(G, dtype=np.int64)
    k, n = G.shape
    q = F.order
    rng = np.random.default_rng(seed)
    add = _Adder(F)
    mults = scaled_rows(G, F)
    out = []
    done = 0
    best = (n + 1, None)
    while done < count:
        m = min(chunk, count - done)
        msgs = rng.integers(0, q, size=(m, k))
        zero = ~msgs.any(axis=1)
        msgs[zero, 0] = 1
        acc = np.zeros((m, n), dtype=np.uint8)
        for i in range(k):
            acc = add(acc, mults[i][msgs[:, i]])
        w = np.count_nonzero(acc, axis=1)
        j = int(np.argmin(w))
        if w[j] < best[0]:
            best = (int(w[j]), msgs[j].copy())
        out.append(w)
        done += m
    return np.concatenate(out), best


__all__ = [
    "CapExceeded",
    "DistanceResult",
    "ExhaustiveResult",
    "encode",
    "information_sets",
    "isd_cost",
    "isd_schedule",
    "merge_brackets",
    "min_distance_exhaustive",
    "min_distance_isd",
    "random_codeword_weights",
    "reachable_lower_bound",
    "scaled_rows",
    "weight",
]
