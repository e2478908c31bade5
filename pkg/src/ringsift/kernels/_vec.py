"""Vectorized numpy fallbacks used when the numba backend is off.

Only the kernels that vectorize naturally live here; inherently sequential
drivers (tree building, cycle extraction) fall back to the un-jitted
reference loops in ``_impl``.  Semantics match ``_impl`` exactly.
"""

import numpy as np


def two_core_mask(indptr, nbr, n):
    if n == 0:
        return np.zeros(0, dtype=bool)
    node_of_entry = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    alive = np.ones(n, dtype=bool)
    while True:
        live = alive[node_of_entry] & alive[nbr]
        deg = np.bincount(node_of_entry[live], minlength=n)
        new_alive = alive & (deg >= 2)
        if np.array_equal(new_alive, alive):
            return alive
        alive = new_alive


def component_labels(indptr, nbr, n):
    labels = np.full(n, -1, np.int32)
    deg = np.diff(indptr)
    c = 0
    for s in range(n):
        if labels[s] != -1:
            continue
        labels[s] = c
        frontier = np.array([s], dtype=np.int64)
        while frontier.size:
            cnt = deg[frontier]
            total = int(cnt.sum())
            if total == 0:
                break
            offs = np.repeat(indptr[frontier], cnt)
            within = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
            neigh = nbr[offs + within]
            fresh = np.unique(neigh[labels[neigh] == -1])
            labels[fresh] = c
            frontier = fresh
        c += 1
    return labels, c
