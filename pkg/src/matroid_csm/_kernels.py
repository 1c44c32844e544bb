"""Bitset kernels over materialized rank tables.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version. The numba path is used when numba imports and the environment
variable ``MATROID_CSM_NUMBA`` is not set to ``0``. Both paths return
identical results; ``tests/test_kernels.py`` checks this.
"""
import os

import numpy as np

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def numba_enabled():
    flag = os.environ.get("MATROID_CSM_NUMBA", "1").strip().lower()
    return _HAVE_NUMBA and flag not in ("0", "false", "no", "off")


def _njit(fn):
    if not _HAVE_NUMBA:
        return fn
    return numba.njit(cache=True)(fn)


def popcounts(n):
    """Cardinality of every subset of an n-set, indexed by bitset."""
    counts = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        counts[1 << i:2 << i] = counts[: 1 << i] + 1
    return counts


# ---------------------------------------------------------------------------
# rank from bases: rk(S) = max |S & B|


@_njit
def _rank_from_bases_nb(n, bases):
    size = 1 << n
    out = np.zeros(size, dtype=np.int64)
    for s in range(size):
        best = 0
        for b in bases:
            x = s & b
            c = 0
            while x:
                x &= x - 1
                c += 1
            if c > best:
                best = c
        out[s] = best
    return out


def _rank_from_bases_np(n, bases):
    pc = popcounts(n)
    subsets = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for b in bases:
        np.maximum(out, pc[subsets & b], out=out)
    return out


def rank_from_bases(n, bases):
    bases = np.asarray(bases, dtype=np.int64)
    if numba_enabled():
        return _rank_from_bases_nb(n, bases)
    return _rank_from_bases_np(n, bases)


# ---------------------------------------------------------------------------
# graphic rank: |V| - #components of the spanning subgraph on edge set S


@_njit
def _graphic_rank_nb(n_vertices, us, vs):
    m = us.shape[0]
    size = 1 << m
    out = np.zeros(size, dtype=np.int64)
    parent = np.empty(n_vertices, dtype=np.int64)
    for s in range(size):
        for v in range(n_vertices):
            parent[v] = v
        r = 0
        for e in range(m):
            if (s >> e) & 1:
                a = us[e]
                while parent[a] != a:
                    a = parent[a]
                b = vs[e]
                while parent[b] != b:
                    b = parent[b]
                if a != b:
                    parent[a] = b
                    r += 1
        out[s] = r
    return out


def _graphic_rank_np(n_vertices, us, vs):
    # rank(S) = rank(S - e) + [e joins two components of S - e], with e the top bit.
    # Component labels are propagated per subset as a (2^m, V) label matrix.
    m = len(us)
    size = 1 << m
    labels = np.tile(np.arange(n_vertices, dtype=np.int64), (size, 1))
    out = np.zeros(size, dtype=np.int64)
    for e in range(m):
        lo, hi = 1 << e, 2 << e
        prev = labels[:lo]
        a = prev[:, us[e]]
        b = prev[:, vs[e]]
        joined = a != b
        new = prev.copy()
        # relabel component b -> a where they differ
        mask = new == b[:, None]
        new[mask] = np.broadcast_to(a[:, None], new.shape)[mask]
        labels[lo:hi] = new
        out[lo:hi] = out[:lo] + joined
    return out


def graphic_rank(n_vertices, edges):
    us = np.array([e[0] for e in edges], dtype=np.int64)
    vs = np.array([e[1] for e in edges], dtype=np.int64)
    if numba_enabled():
        return _graphic_rank_nb(n_vertices, us, vs)
    return _graphic_rank_np(n_vertices, us, vs)


# ---------------------------------------------------------------------------
# axiom check; first violation in a fixed order:
#   1: rk(A) > |A| or rk(A) < 0, A ascending      -> (A, A)
#   2: rk(A) > rk(A+i), (A, i) ascending            -> (A, A+i)
#   3: rk(A+i)+rk(A+j) < rk(A+i+j)+rk(A), (A,i,j) ascending, i<j
#                                                    -> (A+i, A+j)
# Local monotonicity and local submodularity imply the global axioms.


@_njit
def _axiom_check_nb(n, ranks):
    size = 1 << n
    for a in range(size):
        x = a
        c = 0
        while x:
            x &= x - 1
            c += 1
        if ranks[a] > c or ranks[a] < 0:
            return 1, a, a
    for a in range(size):
        for i in range(n):
            if not (a >> i) & 1:
                if ranks[a] > ranks[a | (1 << i)]:
                    return 2, a, a | (1 << i)
    for a in range(size):
        for i in range(n):
            if (a >> i) & 1:
                continue
            ai = a | (1 << i)
            for j in range(i + 1, n):
                if (a >> j) & 1:
                    continue
                aj = a | (1 << j)
                if ranks[ai] + ranks[aj] < ranks[ai | aj] + ranks[a]:
                    return 3, ai, aj
    return 0, -1, -1


def _axiom_check_np(n, ranks):
    size = 1 << n
    subsets = np.arange(size, dtype=np.int64)
    bad = (ranks > popcounts(n)) | (ranks < 0)
    if bad.any():
        a = int(np.argmax(bad))
        return 1, a, a
    best = None
    for i in range(n):
        bit = 1 << i
        viol = ((subsets & bit) == 0) & (ranks > ranks[subsets | bit])
        if viol.any():
            cand = (int(np.argmax(viol)), i)
            best = cand if best is None or cand < best else best
    if best is not None:
        a, i = best
        return 2, a, a | (1 << i)
    for i in range(n):
        bi = 1 << i
        for j in range(i + 1, n):
            bj = 1 << j
            free = (subsets & (bi | bj)) == 0
            lhs = ranks[subsets | bi] + ranks[subsets | bj]
            rhs = ranks[subsets | bi | bj] + ranks
            viol = free & (lhs < rhs)
            if viol.any():
                cand = (int(np.argmax(viol)), i, j)
                best = cand if best is None or cand < best else best
    if best is not None:
        a, i, j = best
        return 3, a | (1 << i), a | (1 << j)
    return 0, -1, -1


def axiom_check(n, ranks):
    ranks = np.asarray(ranks, dtype=np.int64)
    if numba_enabled():
        code, a, b = _axiom_check_nb(n, ranks)
    else:
        code, a, b = _axiom_check_np(n, ranks)
    return int(code), int(a), int(b)


# ---------------------------------------------------------------------------
# closure table: cl(S) = S | {i : rk(S+i) == rk(S)}


@_njit
def _closure_table_nb(n, ranks):
    size = 1 << n
    out = np.empty(size, dtype=np.int64)
    for s in range(size):
        c = s
        for i in range(n):
            if ranks[s | (1 << i)] == ranks[s]:
                c |= 1 << i
        out[s] = c
    return out


def _closure_table_np(n, ranks):
    subsets = np.arange(1 << n, dtype=np.int64)
    out = subsets.copy()
    for i in range(n):
        bit = 1 << i
        out |= np.where(ranks[subsets | bit] == ranks, bit, 0)
    return out


def closure_table(n, ranks):
    ranks = np.asarray(ranks, dtype=np.int64)
    if numba_enabled():
        return _closure_table_nb(n, ranks)
    return _closure_table_np(n, ranks)
