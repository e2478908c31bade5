"""Kernel facade: numba-jitted hot loops with a plain fallback backend.

Set RINGSIFT_NO_NUMBA=1 before import to force the fallback path.
``BACKEND`` reports which one is active; ``benchmarks/bench_kernels.py``
times the two against each other.
"""

import numpy as np

from ._jit import JIT_ENABLED

BACKEND = "numba" if JIT_ENABLED else "plain"

from ._impl import (  # noqa: E402
    M61,
    bfs_tree,
    canonical_into,
    cycle_hash,
    dfs_tree,
    enumerate_driver,
    group_stats,
    least_rotation_start,
)

if JIT_ENABLED:
    from ._impl import component_labels, two_core_mask  # noqa: E402
else:
    from ._vec import component_labels, two_core_mask  # noqa: E402


def warmup():
    """Force compilation of the heavy kernels on a toy graph (no-op when plain)."""
    indptr = np.array([0, 2, 4, 6], np.int64)
    nbr = np.array([1, 2, 0, 2, 0, 1], np.int32)
    eid = np.array([0, 2, 0, 1, 2, 1], np.int32)
    edge_u = np.array([0, 1, 2], np.int32)
    edge_v = np.array([1, 2, 0], np.int32)
    labels, _ = component_labels(indptr, nbr, 3)
    comp_edges = np.array([0, 1, 2], np.int32)
    comp_edge_ptr = np.array([0, 3], np.int64)
    roots = np.array([0], np.int32)
    for use_dfs in (False, True):
        enumerate_driver(indptr, nbr, eid, edge_u, edge_v,
                         np.asarray(labels, np.int32), comp_edges, comp_edge_ptr,
                         roots, use_dfs, -1)
    two_core_mask(indptr, nbr, 3)
    group_stats(indptr, nbr, eid, np.full(3, -1, np.int64),
                np.array([0, 1, 2], np.int32), np.array([0, 3], np.int64), 3)
