"""Hot numeric kernels: Dijkstra scans over CSR adjacency and GF(2) rank.

Both kernels ship in two functionally identical flavours: a loop version
compiled with numba when available, and a vectorised numpy fallback.
Set ``DIVPROTECT_NO_NUMBA=1`` to force the numpy path (useful while
debugging and for the benchmark in ``benchmarks/bench_kernels.py``).
"""
from __future__ import annotations

import os

import numpy as np

# Sentinel for "unreachable"; large enough that sums of real distances
# (millimetres, int64) never get close.
INF_MM = np.int64(2**62)


def _dijkstra_loops(indptr, nbr_node, nbr_link, link_mm, src, blocked):
    n = indptr.shape[0] - 1
    dist = np.full(n, INF_MM, dtype=np.int64)
    done = np.zeros(n, dtype=np.uint8)
    dist[src] = 0
    for _ in range(n):
        u = -1
        best = INF_MM
        for v in range(n):
            if done[v] == 0 and dist[v] < best:
                best = dist[v]
                u = v
        if u < 0:
            break
        done[u] = 1
        for k in range(indptr[u], indptr[u + 1]):
            lk = nbr_link[k]
            if blocked[lk] != 0:
                continue
            w = nbr_node[k]
            nd = best + link_mm[lk]
            if nd < dist[w]:
                dist[w] = nd
    return dist


def _dijkstra_numpy(indptr, nbr_node, nbr_link, link_mm, src, blocked):
    n = indptr.shape[0] - 1
    dist = np.full(n, INF_MM, dtype=np.int64)
    done = np.zeros(n, dtype=bool)
    dist[src] = 0
    for _ in range(n):
        u = int(np.argmin(np.where(done, INF_MM, dist)))
        if done[u] or dist[u] == INF_MM:
            break
        done[u] = True
        ks = slice(indptr[u], indptr[u + 1])
        lks = nbr_link[ks]
        ok = blocked[lks] == 0
        if not ok.any():
            continue
        tgt = nbr_node[ks][ok]
        cand = dist[u] + link_mm[lks[ok]]
        np.minimum.at(dist, tgt, cand)
    return dist


def _gf2_rank_loops(mat):
    a = mat.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        pivot = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[pivot, j]
                a[pivot, j] = tmp
        for i in range(rows):
            if i != r and a[i, c] != 0:
                for j in range(cols):
                    a[i, j] ^= a[r, j]
        r += 1
        if r == rows:
            break
    return r


def _gf2_rank_numpy(mat):
    a = mat.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        pivot = r + int(hits[0])
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        elim = a[:, c].astype(bool)
        elim[r] = False
        a[elim] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


_FORCE_NUMPY = os.environ.get("DIVPROTECT_NO_NUMBA", "").strip().lower() in {
    "1", "true", "yes", "on",
}

NUMBA_ENABLED = False
if not _FORCE_NUMPY:
    try:
        from numba import njit

        _dijkstra_jit = njit(cache=True)(_dijkstra_loops)
        _gf2_rank_jit = njit(cache=True)(_gf2_rank_loops)
        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass

if NUMBA_ENABLED:
    dijkstra_distances = _dijkstra_jit
    gf2_rank_raw = _gf2_rank_jit
else:
    dijkstra_distances = _dijkstra_numpy
    gf2_rank_raw = _gf2_rank_numpy


def gf2_rank(mat: np.ndarray) -> int:
    """Rank of a binary matrix over GF(2).

    Accepts any integer dtype; entries are reduced mod 2.
    """
    a = np.ascontiguousarray(np.asarray(mat, dtype=np.uint8) & 1)
    if a.ndim != 2 or a.size == 0:
        return 0
    return int(gf2_rank_raw(a))
