"""Bitmask search engine for the cycle-with-shortcuts family.

Graphs here live in a single index space 0..N-1 (N <= 16).  A graph is an
adjacency array M of bitmasks plus a vertex mask S.  The second copy G' used
during a doubling shares the same index space; ``between[u']`` holds the edges
from u' in G' to vertices of G.

The three exhaustive checks mirror the C++ programs they were ported from:
same loop orders, same pruning, same first counterexample.  The inner loops
are compiled with numba; ``reference_*`` functions are slow pure-Python
twins used by the tests.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from multiprocessing import get_context

import numpy as np
from numba import njit

CHECKS = ("non_empty_b", "non_empty_ad", "natural_collapse")
CHECK_ALIASES = {"b": "non_empty_b", "ad": "non_empty_ad", "natural": "natural_collapse"}
HEADERS = {
    "non_empty_b": "non-empty B, V = {V}",
    "non_empty_ad": "|E(A,D)| = 1, V = {V}",
    "natural_collapse": "Natural collapse lemma, V = {V}",
}
MAX_V = 16
# the outermost loop is cut into this many pieces no matter how many workers
# run, so counters and the reported counterexample never depend on --workers
N_CHUNKS = 64
WORKERS_ENV = "PARREP_WORKERS"


def mod(x, m):
    if m <= 0:
        raise ValueError("modulus must be positive")
    x %= m
    return x + (m if x < 0 else 0)


_PCNT = [0] * (1 << 16)
for _i in range(1, 1 << 16):
    _PCNT[_i] = _PCNT[_i // 2] + _i % 2


def popcount(u):
    # 16-bit table, same as the header of the original programs
    if u < 0 or u >= 1 << 32:
        raise ValueError("popcount expects an unsigned 32-bit value")
    return _PCNT[u & 0xFFFF] + _PCNT[u >> 16]


def original_graph(V):
    """Adjacency masks of the cycle with shortcuts on V vertices."""
    if V < 8 or V > MAX_V or V % 2:
        raise ValueError("V must be even with 8 <= V <= %d" % MAX_V)
    M = np.zeros(V, dtype=np.int64)
    for u in range(V):
        for s in (-3, -1, 1, 3):
            M[u] |= 1 << mod(u + s, V)
    return M


# ---------------------------------------------------------------- kernels

@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _neighbors(T, M, N):
    res = 0
    for u in range(N):
        if (T >> u) & 1:
            res |= M[u]
    return res


@njit(cache=True)
def _double_graph(T, M, Mp, between, N):
    for u in range(N):
        if (T >> u) & 1:
            Mp[u] = M[u] & T
            between[u] = M[u] & ~T
        else:
            Mp[u] = 0
            between[u] = 0


@njit(cache=True)
def _exchange(T, M, Mp, between, N):
    for u in range(N):
        if not (T >> u) & 1:
            continue
        old_M = M[u]
        old_Mp = Mp[u]
        old_between = between[u]

        M[u] = old_between & ~(1 << u)
        for v in range(N):
            M[v] &= ~(1 << u)
            if (M[u] >> v) & 1:
                M[v] |= 1 << u

        # between is read here before it is rewritten below
        Mp[u] = 0
        for vp in range(N):
            if vp != u:
                Mp[vp] &= ~(1 << u)
                if (between[vp] >> u) & 1:
                    Mp[u] |= 1 << vp
                    Mp[vp] |= 1 << u

        between[u] = old_M
        if (old_between >> u) & 1:
            between[u] |= 1 << u
        for vp in range(N):
            if vp != u:
                between[vp] &= ~(1 << u)
                if (old_Mp >> vp) & 1:
                    between[vp] |= 1 << u


@njit(cache=True)
def _collapse_search(GS, M, GpS, Mp, between, N, mapping, T, unnatural):
    # Backtracking over u' in increasing index, targets u in increasing index.
    # With unnatural=True a complete assignment is only accepted when both T
    # and G'.S minus T contain a vertex that is not sent to itself.
    for i in range(N):
        mapping[i] = -1
    order = np.empty(N, np.int64)
    k = 0
    for up in range(N):
        if (GpS >> up) & 1:
            order[k] = up
            k += 1
    if k == 0:
        return not unnatural
    cand = np.empty(k, np.int64)
    level = 0
    cand[0] = -1
    while level >= 0:
        up = order[level]
        u = cand[level] + 1
        found = -1
        while u < N:
            if (GS >> u) & 1 and (M[u] & between[up]) == between[up]:
                ok = True
                for vp in range(up):
                    if (Mp[up] >> vp) & 1 and not ((M[u] >> mapping[vp]) & 1):
                        ok = False
                        break
                if ok:
                    found = u
                    break
            u += 1
        if found < 0:
            mapping[up] = -1
            level -= 1
            continue
        cand[level] = found
        mapping[up] = found
        if level == k - 1:
            if not unnatural:
                return True
            ok1 = False
            ok2 = False
            for w in range(N):
                if not (GpS >> w) & 1:
                    continue
                if (T >> w) & 1:
                    if mapping[w] != w:
                        ok1 = True
                elif mapping[w] != w:
                    ok2 = True
            if ok1 and ok2:
                return True
        else:
            level += 1
            cand[level] = -1
    return False


@njit(cache=True)
def _b_rest(V, M, B, C, Bprim, B_list, Bp_list, pB, Mout, between, mapping, counters, out):
    full = (1 << V) - 1
    free = full & ~(B | C | Bprim) & ~1
    A = 0
    while True:
        # A runs over the subsets of `free` in increasing order, which is the
        # order in which the plain loop over even A visits the survivors
        if not (_neighbors(A, M, V) & Bprim):
            Dp = full & ~(A | B | Bprim | C)
            if not (_neighbors(Dp, M, V) & (A | B)):
                counters[2] += 1
                for u in range(V):
                    if (A >> u) & 1:
                        Mout[u] = M[u] & A
                        between[u] = M[u] & C
                        for ind in range(pB):
                            if (M[u] >> B_list[ind]) & 1:
                                between[u] |= 1 << Bp_list[ind]
                    elif (Dp >> u) & 1:
                        Mout[u] = M[u] & Dp
                        between[u] = M[u] & C
                        for ind in range(pB):
                            if (M[u] >> Bp_list[ind]) & 1:
                                between[u] |= 1 << B_list[ind]
                    else:
                        Mout[u] = 0
                        between[u] = 0
                counters[3] += 1
                if _collapse_search(full, M, A | Dp, Mout, between, V, mapping, 0, False):
                    out[0] = A
                    out[1] = B
                    out[2] = Bprim
                    out[3] = C
                    out[4] = Dp
                    return True
        A = (A - free) & free
        if A == 0:
            break
    return False


@njit(cache=True)
def _non_empty_b_range(V, M, c_start, c_stop, counters, out, pairs, mapping):
    full = (1 << V) - 1
    B_list = np.empty(V, np.int64)
    Bp_list = np.empty(V, np.int64)
    cur = np.empty(V + 1, np.int64)
    Mout = np.zeros(V, np.int64)
    between = np.zeros(V, np.int64)
    for C in range(c_start, c_stop, 2):
        for B in range(1, full + 1, 2):
            if B & C:
                continue
            pB = _popcount(B)
            if 2 * pB + _popcount(C) > V:
                continue
            counters[0] += 1
            ind = 0
            for u in range(V):
                if (B >> u) & 1:
                    B_list[ind] = u
                    ind += 1
            Bprim = 0
            ind = 0
            cur[0] = -1
            while ind >= 0:
                if ind == pB:
                    counters[1] += 1
                    if _b_rest(V, M, B, C, Bprim, B_list, Bp_list, pB,
                               Mout, between, mapping, counters, out):
                        for j in range(pB):
                            pairs[2 * j] = B_list[j]
                            pairs[2 * j + 1] = Bp_list[j]
                        out[5] = pB
                        return 1
                    ind -= 1
                    Bprim &= ~(1 << Bp_list[ind])
                    continue
                u = B_list[ind]
                up = cur[ind] + 1
                found = -1
                while up < V:
                    if (not ((B | C | Bprim) >> up) & 1 and not (M[up] & B)
                            and (M[u] & C) == (M[up] & C)):
                        ok = True
                        for j in range(ind):
                            if ((M[B_list[j]] >> u) & 1) != ((M[Bp_list[j]] >> up) & 1):
                                ok = False
                                break
                        if ok:
                            found = up
                            break
                    up += 1
                if found < 0:
                    ind -= 1
                    if ind >= 0:
                        Bprim &= ~(1 << Bp_list[ind])
                    continue
                cur[ind] = found
                Bp_list[ind] = found
                Bprim |= 1 << found
                ind += 1
                cur[ind] = -1
    return 0


@njit(cache=True)
def _partition_range(V, M, a_start, a_stop, kind, counters, out, mapping):
    # kind 0: one A-D edge (non_empty_ad); kind 1: unnatural collapse
    full = (1 << V) - 1
    tmpM = np.empty(V, np.int64)
    Mp = np.zeros(V, np.int64)
    between = np.zeros(V, np.int64)
    for A in range(a_start, a_stop):
        rest = full & ~A
        C = 0
        while True:
            Dp = full & ~(A | C)
            if not (_neighbors(Dp, M, V) & A):
                counters[0] += 1
                for i in range(V):
                    tmpM[i] = M[i]
                _double_graph(A | Dp, tmpM, Mp, between, V)
                _exchange(Dp, tmpM, Mp, between, V)
                if kind == 0:
                    for u in range(V):
                        if not (A >> u) & 1:
                            continue
                        for v in range(V):
                            if not (Dp >> v) & 1:
                                continue
                            if u % 2 == v % 2:
                                continue
                            between[u] |= 1 << v
                            between[v] |= 1 << u
                            counters[1] += 1
                            if _collapse_search(full, tmpM, A | Dp, Mp, between, V,
                                                mapping, 0, False):
                                out[0] = A
                                out[1] = C
                                out[2] = Dp
                                out[3] = u
                                out[4] = v
                                return 1
                            between[u] &= ~(1 << v)
                            between[v] &= ~(1 << u)
                else:
                    counters[1] += 1
                    if _collapse_search(full, tmpM, A | Dp, Mp, between, V,
                                        mapping, A, True):
                        out[0] = A
                        out[1] = C
                        out[2] = Dp
                        return 1
            C = (C - rest) & rest
            if C == 0:
                break
    return 0


# ------------------------------------------------------- python wrappers

def double_graph(T, M):
    """Return (M', between) for doubling the vertex mask T of M."""
    M = np.asarray(M, dtype=np.int64)
    Mp = np.zeros_like(M)
    between = np.zeros_like(M)
    _double_graph(T, M, Mp, between, len(M))
    return Mp, between


def exchange(T, M, Mp, between):
    """Swap the vertices of T between G and G' in place."""
    _exchange(T, M, Mp, between, len(M))


def neighbors(T, M):
    return int(_neighbors(T, np.asarray(M, dtype=np.int64), len(M)))


def is_collapsible(GS, M, GpS, Mp, between):
    """Search for a collapse of G' onto G.  Returns the mapping or None."""
    N = len(M)
    mapping = np.full(N, -1, dtype=np.int64)
    ok = _collapse_search(GS, np.asarray(M, np.int64), GpS, np.asarray(Mp, np.int64),
                          np.asarray(between, np.int64), N, mapping, 0, False)
    return [int(x) for x in mapping] if ok else None


def is_unnaturally_collapsible(T, GS, M, GpS, Mp, between):
    N = len(M)
    mapping = np.full(N, -1, dtype=np.int64)
    ok = _collapse_search(GS, np.asarray(M, np.int64), GpS, np.asarray(Mp, np.int64),
                          np.asarray(between, np.int64), N, mapping, T, True)
    return [int(x) for x in mapping] if ok else None


# slow twins used to cross-check the compiled search

def reference_collapse_search(GS, M, GpS, Mp, between, T=0, unnatural=False):
    N = len(M)
    mapping = [-1] * N
    order = [u for u in range(N) if GpS >> u & 1]

    def rec(i):
        if i == len(order):
            if not unnatural:
                return True
            ok1 = any(mapping[w] != w for w in order if T >> w & 1)
            ok2 = any(mapping[w] != w for w in order if not T >> w & 1)
            return ok1 and ok2
        up = order[i]
        for u in range(N):
            if not GS >> u & 1:
                continue
            if (M[u] & between[up]) != between[up]:
                continue
            if any(Mp[up] >> vp & 1 and not M[u] >> mapping[vp] & 1 for vp in range(up)):
                continue
            mapping[up] = u
            if rec(i + 1):
                return True
        mapping[up] = -1
        return False

    return list(mapping) if rec(0) else None


def reference_exchange(T, M, Mp, between):
    """Line-by-line Python port of exchange(), operating on lists."""
    N = len(M)
    for u in range(N):
        if not T >> u & 1:
            continue
        old_M, old_Mp, old_between = M[u], Mp[u], between[u]
        M[u] = old_between & ~(1 << u)
        for v in range(N):
            M[v] &= ~(1 << u)
            if M[u] >> v & 1:
                M[v] |= 1 << u
        Mp[u] = 0
        for vp in range(N):
            if vp != u:
                Mp[vp] &= ~(1 << u)
                if between[vp] >> u & 1:
                    Mp[u] |= 1 << vp
                    Mp[vp] |= 1 << u
        between[u] = old_M
        if old_between >> u & 1:
            between[u] |= 1 << u
        for vp in range(N):
            if vp != u:
                between[vp] &= ~(1 << u)
                if old_Mp >> vp & 1:
                    between[vp] |= 1 << u


# ---------------------------------------------------------- lemma checks

@dataclass
class Counterexample:
    check: str
    V: int
    sets: dict
    mapping: list
    pairs: list = field(default_factory=list)
    edge: tuple | None = None

    def lines(self):
        out = ["FAILURE"]
        for name, members in self.sets.items():
            if name == "C" and self.pairs:
                out.append("(B,B') = " + " ".join("(%d,%d)" % p for p in self.pairs))
            out.append("%s = %s" % (name, " ".join(str(x) for x in members)))
        if self.edge is not None:
            out.append("u = %d, v = %d" % self.edge)
        out.append("mapping = " + " ".join("(%d,%d)" % (i, m) for i, m in enumerate(self.mapping)))
        return out

    def to_dict(self):
        d = {"check": self.check, "V": self.V, "sets": self.sets, "mapping": self.mapping}
        if self.pairs:
            d["pairs"] = [list(p) for p in self.pairs]
        if self.edge is not None:
            d["edge"] = list(self.edge)
        return d


@dataclass
class LemmaResult:
    check: str
    V: int
    status: str  # "SUCCESS" or "FAILURE"
    counterexample: Counterexample | None
    counters: dict
    chunks: int
    workers: int
    seconds: float = 0.0

    @property
    def ok(self):
        return self.status == "SUCCESS"

    def transcript(self):
        lines = [HEADERS[self.check].format(V=self.V)]
        if self.counterexample is None:
            lines.append("SUCCESS")
        else:
            lines.extend(self.counterexample.lines())
        return "\n".join(lines) + "\n"


def _bits(mask, V):
    return [u for u in range(V) if mask >> u & 1]


def _outer_bounds(check, V, n_chunks):
    # non_empty_b's outer loop is over even C; the others loop over A
    if check == "non_empty_b":
        total = 1 << (V - 1)
        scale = 2
    else:
        total = 1 << V
        scale = 1
    n_chunks = max(1, min(n_chunks, total))
    cuts = [total * i // n_chunks for i in range(n_chunks + 1)]
    return [(cuts[i] * scale, cuts[i + 1] * scale) for i in range(n_chunks)]


COUNTER_NAMES = {
    "non_empty_b": ("bc_pairs", "bijections", "partitions", "collapse_searches"),
    "non_empty_ad": ("partitions", "collapse_searches"),
    "natural_collapse": ("partitions", "collapse_searches"),
}


def _run_chunk(args):
    check, V, lo, hi = args
    M = original_graph(V)
    counters = np.zeros(4, dtype=np.int64)
    out = np.zeros(6, dtype=np.int64)
    mapping = np.full(V, -1, dtype=np.int64)
    if check == "non_empty_b":
        pairs = np.zeros(2 * V, dtype=np.int64)
        found = _non_empty_b_range(V, M, lo, hi, counters, out, pairs, mapping)
        if not found:
            return counters.tolist(), None
        A, B, Bp, C, Dp, pB = (int(x) for x in out)
        cex = Counterexample(check, V, {"A": _bits(A, V), "C": _bits(C, V), "D'": _bits(Dp, V)},
                             mapping.tolist(),
                             pairs=[(int(pairs[2 * j]), int(pairs[2 * j + 1])) for j in range(pB)])
        return counters.tolist(), cex.to_dict()
    kind = 0 if check == "non_empty_ad" else 1
    found = _partition_range(V, M, lo, hi, kind, counters, out, mapping)
    if not found:
        return counters.tolist(), None
    A, C, Dp = int(out[0]), int(out[1]), int(out[2])
    dname = "Dprim" if kind == 0 else "D"
    cex = Counterexample(check, V, {"A": _bits(A, V), "C": _bits(C, V), dname: _bits(Dp, V)},
                         mapping.tolist(),
                         edge=(int(out[3]), int(out[4])) if kind == 0 else None)
    return counters.tolist(), cex.to_dict()


def default_workers():
    val = os.environ.get(WORKERS_ENV)
    if not val:
        return 1
    try:
        n = int(val)
    except ValueError:
        raise ValueError("%s must be a positive integer" % WORKERS_ENV)
    if n < 1:
        raise ValueError("%s must be a positive integer" % WORKERS_ENV)
    return n


def run_lemma_check(check, V=12, workers=None, n_chunks=N_CHUNKS):
    """Run one exhaustive check on the cycle with shortcuts on V vertices.

    Returns a LemmaResult whose status is SUCCESS when no collapse was found.
    The verdict, counters and counterexample do not depend on `workers`.
    """
    check = CHECK_ALIASES.get(check, check)
    if check not in CHECKS:
        raise ValueError("unknown check %r" % (check,))
    original_graph(V)  # validates V
    if workers is None:
        workers = default_workers()
    if workers < 1:
        raise ValueError("workers must be >= 1")
    jobs = [(check, V, lo, hi) for lo, hi in _outer_bounds(check, V, n_chunks)]
    t0 = time.perf_counter()
    results = []
    if workers == 1:
        for job in jobs:
            res = _run_chunk(job)
            results.append(res)
            if res[1] is not None:
                break
    else:
        with get_context("fork").Pool(workers) as pool:
            for res in pool.imap(_run_chunk, jobs):
                results.append(res)
                if res[1] is not None:
                    pool.terminate()
                    break
    names = COUNTER_NAMES[check]
    totals = [0] * 4
    cex = None
    for cnt, c in results:
        totals = [a + b for a, b in zip(totals, cnt)]
        if c is not None:
            cex = Counterexample(**{k: (tuple(v) if k == "edge" else
                                        [tuple(p) for p in v] if k == "pairs" else v)
                                    for k, v in c.items()})
            break
    counters = {n: int(totals[i]) for i, n in enumerate(names)}
    return LemmaResult(check, V, "SUCCESS" if cex is None else "FAILURE", cex, counters,
                       len(jobs), workers, time.perf_counter() - t0)


@dataclass
class Verdict:
    V: int
    nonconstructible: bool | None  # None means the checks abstain
    results: list

    @property
    def failing(self):
        return [r for r in self.results if not r.ok]


def verify_nonconstructible(V, workers=None, checks=CHECKS):
    """Run the three checks.  A non-constructibility verdict needs all of them."""
    results = []
    for c in checks:
        res = run_lemma_check(c, V, workers)
        results.append(res)
        if not res.ok:
            break
    if all(r.ok for r in results) and len(results) == len(CHECKS):
        return Verdict(V, True, results)
    return Verdict(V, None, results)
