"""Compiled kernels for the fast Rips reducer.

Edges arrive sorted by (weight, lexicographic pair). Dimension-0 deaths come
from a union-find sweep (the merging edges). Dimension-1 pairs come from the
persistent-cohomology form of the column algorithm: coboundary columns of
positive edges are processed in reverse filtration order, with the negative
(merging) edges cleared since their columns provably reduce to zero.

A triangle is keyed by ``max_edge_index * n + opposite_vertex``. The maximal
edge index is unique per triangle (distinct edges have distinct sorted
positions), so the key is canonical, and ascending key order refines the
filtration order — which is all the pairing needs, because diagrams compare
as multisets of (birth, death) values and those are tie-order independent.
"""

from __future__ import annotations

import numpy as np
from numba import njit
from numba.core import types
from numba.typed import Dict


@njit(cache=True)
def _find(parent: np.ndarray, x: int) -> int:
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def h0_merges(eu: np.ndarray, ev: np.ndarray, ew: np.ndarray, n: int):
    """Union-find sweep in filtration order.

    Returns (merge death values, negative-edge mask, component count).
    """
    m = eu.shape[0]
    parent = np.arange(n, dtype=np.int64)
    neg = np.zeros(m, dtype=np.bool_)
    deaths = np.empty(n - 1 if n > 1 else 0, dtype=np.float64)
    cnt = 0
    for q in range(m):
        ra = _find(parent, eu[q])
        rb = _find(parent, ev[q])
        if ra != rb:
            parent[ra] = rb
            deaths[cnt] = ew[q]
            cnt += 1
            neg[q] = True
    return deaths[:cnt], neg, n - cnt


@njit(cache=True)
def h1_pairs(
    eu: np.ndarray,
    ev: np.ndarray,
    ew: np.ndarray,
    neg: np.ndarray,
    e_idx: np.ndarray,
    n: int,
):
    """Dimension-1 persistence pairs of the flag complex.

    Returns (births, deaths) of positive-persistence pairs plus the births of
    essential (never-dying) classes; at the enclosing-radius threshold the
    essential list is empty.
    """
    m = eu.shape[0]
    pivot_of = Dict.empty(key_type=types.int64, value_type=types.int64)

    # reduced columns that own a pivot, flattened into one growable pool
    pool = np.empty(4 * m + 16, dtype=np.int64)
    col_off = np.empty(m + 1, dtype=np.int64)
    col_len = np.empty(m + 1, dtype=np.int64)
    pool_top = 0
    n_stored = 0

    births = np.empty(m, dtype=np.float64)
    deaths = np.empty(m, dtype=np.float64)
    n_pairs = 0
    ess = np.empty(m, dtype=np.float64)
    n_ess = 0

    cur = np.empty(n + 16, dtype=np.int64)
    tmp = np.empty(n + 16, dtype=np.int64)

    for q in range(m - 1, -1, -1):
        if neg[q]:
            continue
        i = eu[q]
        j = ev[q]
        # cofacet keys of edge q: triangles (i, j, k) inside the threshold
        c = 0
        for k in range(n):
            if k == i or k == j:
                continue
            q1 = e_idx[i, k]
            if q1 < 0:
                continue
            q2 = e_idx[j, k]
            if q2 < 0:
                continue
            qm = q
            v = k
            if q1 > qm:
                qm = q1
                v = j
            if q2 > qm:
                qm = q2
                v = i
            cur[c] = qm * n + v
            c += 1
        srt = np.sort(cur[:c])
        cur[:c] = srt

        while True:
            if c == 0:
                ess[n_ess] = ew[q]
                n_ess += 1
                break
            p = cur[0]
            if p in pivot_of:
                cid = pivot_of[p]
                off = col_off[cid]
                ln = col_len[cid]
                need = c + ln
                if tmp.shape[0] < need:
                    tmp = np.empty(2 * need, dtype=np.int64)
                # symmetric difference of two ascending key lists
                a = 0
                b = 0
                t = 0
                while a < c and b < ln:
                    x = cur[a]
                    y = pool[off + b]
                    if x < y:
                        tmp[t] = x
                        t += 1
                        a += 1
                    elif y < x:
                        tmp[t] = y
                        t += 1
                        b += 1
                    else:
                        a += 1
                        b += 1
                while a < c:
                    tmp[t] = cur[a]
                    t += 1
                    a += 1
                while b < ln:
                    tmp[t] = pool[off + b]
                    t += 1
                    b += 1
                swap = cur
                cur = tmp
                tmp = swap
                c = t
            else:
                while pool_top + c > pool.shape[0]:
                    bigger = np.empty(2 * pool.shape[0], dtype=np.int64)
                    bigger[:pool_top] = pool[:pool_top]
                    pool = bigger
                col_off[n_stored] = pool_top
                col_len[n_stored] = c
                pool[pool_top : pool_top + c] = cur[:c]
                pool_top += c
                pivot_of[p] = n_stored
                n_stored += 1
                d_val = ew[p // n]
                b_val = ew[q]
                if d_val > b_val:
                    births[n_pairs] = b_val
                    deaths[n_pairs] = d_val
                    n_pairs += 1
                break
    return births[:n_pairs].copy(), deaths[:n_pairs].copy(), ess[:n_ess].copy()
