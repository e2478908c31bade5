"""Cycle enumeration via spanning-tree / induced-subgraph differencing.

For every chosen root, the edges of the component's induced subgraph that are
missing from the root's spanning tree each close exactly one fundamental
cycle through the tree path between their endpoints.  The union over roots,
deduplicated by canonical key, is the suspicious-cycle candidate set.

Cycles are keyed by their vertex sequence up to rotation and reflection.  At
scale the dedup runs on a 2x61-bit rotation/reflection-invariant hash of the
cycle's edge multiset (collision odds are negligible; the edge set determines
a simple cycle uniquely); canonical vertex sequences are materialized only
for cycles below the retain limit, which is how million-cycle enumerations of
mostly-long cycles stay in memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import GraphError, SizeLimitError
from .graph import MultiGraph, SpanningTree, Strategy

ORACLE = "oracle"


class RootMode(Enum):
    ALL_ROOTS = "all"
    SINGLE_ROOT_PER_COMPONENT = "single"

    @classmethod
    def parse(cls, text):
        t = str(text).strip().lower()
        for m in cls:
            if t in (m.value, m.name.lower()):
                return m
        raise ValueError(f"unknown root mode {text!r} (expected 'all' or 'single')")


def canonical_key(vertices):
    """Lexicographically minimal rotation over both orientations.

    Works on any comparable items (node ids, driver keys); two cycles get
    equal keys iff they traverse the same vertices in the same cyclic order
    up to rotation/reflection.
    """
    seq = list(vertices)
    if not seq:
        raise ValueError("empty vertex sequence")
    best = None
    for s in (seq, seq[::-1]):
        for i in range(len(s)):
            rot = tuple(s[i:] + s[:i])
            if best is None or rot < best:
                best = rot
    return best


@dataclass(frozen=True)
class Cycle:
    """Closed vertex walk (first vertex implicitly follows the last)."""

    vertices: tuple
    closing_edge: int
    source: str

    @property
    def length(self):
        return len(self.vertices)

    @property
    def key(self):
        return canonical_key(self.vertices)


def _key_hash(key):
    arr = np.asarray(key, dtype=np.int32)
    h1, h2 = kernels.cycle_hash(arr, len(key))
    return int(h1), int(h2)


class CycleSet:
    """Deduplicated cycles, columnar.

    Distinct cycles live in discovery order in parallel arrays; iteration and
    ``keys()`` cover the *retained* cycles (those with a stored canonical
    vertex sequence) in canonical-key order.  ``retain_limit=None`` retains
    everything; otherwise only cycles shorter than the limit carry vertices
    while longer ones still count toward totals, bands and dedup.

    Provenance: every (root, strategy) emission is recorded; ``witnesses``
    reports the deduplicated set for one cycle.
    """

    def __init__(self, graph, source, root_mode, retain_limit,
                 lengths, h1, h2, offsets, first_root, closing_edge, verts,
                 wslot, wroot):
        self.graph = graph
        self.source = source
        self.root_mode = root_mode
        self.retain_limit = retain_limit
        self.lengths = np.asarray(lengths, np.int64)
        self.h1 = np.asarray(h1, np.int64)
        self.h2 = np.asarray(h2, np.int64)
        self.offsets = np.asarray(offsets, np.int64)
        self.first_root = np.asarray(first_root, np.int64)
        self.closing_edge = np.asarray(closing_edge, np.int64)
        self.verts = np.asarray(verts, np.int32)
        self._wslot = np.asarray(wslot, np.int64)
        self._wroot = np.asarray(wroot, np.int64)
        self._keys_cache = None
        self._hash_index = None
        self._witness_index = None

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_cycles(cls, graph, cycles, source, root_mode=None, witnesses=None):
        """Build a set from explicit Cycle objects (tests, oracle, file input)."""
        seen = {}
        order = []
        for i, c in enumerate(cycles):
            k = c.key
            if k not in seen:
                seen[k] = (len(order), c)
                order.append(k)
        n = len(order)
        lengths = np.array([len(k) for k in order], np.int64)
        h1 = np.empty(n, np.int64)
        h2 = np.empty(n, np.int64)
        offsets = np.empty(n, np.int64)
        closing = np.empty(n, np.int64)
        first = np.empty(n, np.int64)
        verts = np.empty(int(lengths.sum()) if n else 0, np.int32)
        pos = 0
        for j, k in enumerate(order):
            h1[j], h2[j] = _key_hash(k)
            offsets[j] = pos
            verts[pos:pos + len(k)] = k
            pos += len(k)
            closing[j] = seen[k][1].closing_edge
            first[j] = min(k)
        if witnesses is None:
            wslot = np.arange(n, dtype=np.int64)
            wroot = first.copy()
        else:
            wslot = np.array([seen[k][0] for k, _ in witnesses], np.int64)
            wroot = np.array([r for _, r in witnesses], np.int64)
        return cls(graph, source, root_mode, None, lengths, h1, h2, offsets,
                   first, closing, verts, wslot, wroot)

    # -- size and counts ------------------------------------------------------

    def __len__(self):
        return len(self.lengths)

    @property
    def total_count(self):
        return len(self.lengths)

    @property
    def retained_count(self):
        return int((self.offsets >= 0).sum())

    def band_counts(self):
        """Pre-filter cycle-size histogram (report bands)."""
        L = self.lengths
        return {
            "total": int(len(L)),
            "n_eq_2": int((L == 2).sum()),
            "n_eq_3": int((L == 3).sum()),
            "n_eq_4_or_5": int(((L == 4) | (L == 5)).sum()),
            "n_gt5_lt10": int(((L > 5) & (L < 10)).sum()),
            "n_ge10_lt50": int(((L >= 10) & (L < 50)).sum()),
            "n_ge50": int((L >= 50).sum()),
            "n_ge100": int((L >= 100).sum()),
            "n_ge150": int((L >= 150).sum()),
            "n_ge200": int((L >= 200).sum()),
            "n_ge500": int((L >= 500).sum()),
        }

    # -- key access -----------------------------------------------------------

    def _slot_key(self, slot):
        off = int(self.offsets[slot])
        if off < 0:
            return None
        L = int(self.lengths[slot])
        return tuple(int(x) for x in self.verts[off:off + L])

    def keys(self):
        """Canonical keys of retained cycles, canonically sorted."""
        if self._keys_cache is None:
            ks = []
            for slot in range(len(self.lengths)):
                k = self._slot_key(slot)
                if k is not None:
                    ks.append((k, slot))
            ks.sort(key=lambda t: (len(t[0]), t[0]))
            self._keys_cache = ks
        return [k for k, _ in self._keys_cache]

    def __iter__(self):
        return iter(self.keys())

    def _lookup(self, h1, h2, L):
        if self._hash_index is None:
            order = np.lexsort((self.h2, self.h1))
            self._hash_index = (order, self.h1[order])
        order, sorted_h1 = self._hash_index
        lo = np.searchsorted(sorted_h1, h1, "left")
        hi = np.searchsorted(sorted_h1, h1, "right")
        for i in range(int(lo), int(hi)):
            s = int(order[i])
            if int(self.h2[s]) == h2 and int(self.lengths[s]) == L:
                return s
        return None

    def find(self, key):
        """Slot index of a canonical key, or None."""
        h1, h2 = _key_hash(key)
        return self._lookup(h1, h2, len(key))

    def __contains__(self, key):
        if isinstance(key, Cycle):
            key = key.key
        return self.find(tuple(key)) is not None

    def get(self, key):
        key = canonical_key(key)
        slot = self.find(key)
        if slot is None:
            raise KeyError(key)
        stored = self._slot_key(slot)
        if stored is not None and stored != key:
            raise KeyError(key)  # hash collision; treat as absent
        return Cycle(vertices=key, closing_edge=int(self.closing_edge[slot]), source=self.source)

    def __getitem__(self, key):
        return self.get(key)

    def items(self):
        return [(k, self.get(k)) for k in self.keys()]

    # -- provenance -----------------------------------------------------------

    def witnesses(self, key):
        """Deduplicated (root, strategy) witnesses that emitted this cycle."""
        slot = self.find(canonical_key(key))
        if slot is None:
            raise KeyError(key)
        if self._witness_index is None:
            order = np.lexsort((self._wroot, self._wslot))
            self._witness_index = (self._wslot[order], self._wroot[order])
        ws, wr = self._witness_index
        lo = np.searchsorted(ws, slot, "left")
        hi = np.searchsorted(ws, slot, "right")
        roots = sorted(set(int(r) for r in wr[lo:hi]))
        return tuple((r, self.source) for r in roots)

    @property
    def emission_count(self):
        return len(self._wslot)

    # -- comparisons ----------------------------------------------------------

    def _hash_rows(self):
        rows = np.empty(len(self.lengths), dtype=[("h1", "<i8"), ("h2", "<i8"), ("L", "<i8")])
        rows["h1"] = self.h1
        rows["h2"] = self.h2
        rows["L"] = self.lengths
        return rows

    def symmetric_difference_counts(self, other):
        """(only in self, only in other), by canonical identity."""
        a = self._hash_rows()
        b = other._hash_rows()
        only_a = np.setdiff1d(a, b, assume_unique=True)
        only_b = np.setdiff1d(b, a, assume_unique=True)
        return len(only_a), len(only_b)

    def __eq__(self, other):
        if not isinstance(other, CycleSet):
            return NotImplemented
        return (np.array_equal(self.lengths, other.lengths)
                and np.array_equal(self.h1, other.h1)
                and np.array_equal(self.h2, other.h2)
                and np.array_equal(self.offsets, other.offsets)
                and np.array_equal(self.verts, other.verts)
                and np.array_equal(self._wslot, other._wslot)
                and np.array_equal(self._wroot, other._wroot))

    def __repr__(self):
        return (f"CycleSet(source={self.source!r}, total={self.total_count}, "
                f"retained={self.retained_count})")


# -- operations ----------------------------------------------------------------


def fundamental_cycles(graph, tree):
    """One cycle per induced-subgraph edge absent from the spanning tree.

    The emitted count always equals m_c - (n_c - 1) for the covered
    component.  A non-tree edge parallel to a tree edge yields a length-2
    walk; those are filtered out later by size and counted as the
    repeat-pair signal.
    """
    if not isinstance(tree, SpanningTree) or tree.graph is not graph:
        raise GraphError("spanning tree does not belong to this graph")
    covered = tree.order
    sub = graph.induced_subgraph(covered)
    tree_edge_ids = set(int(e) for e in tree.tree_edges())
    out = []
    for e in sub.edges:
        e = int(e)
        if e in tree_edge_ids:
            continue
        u, v = graph.edge_endpoints(e)
        walk = tree.path(u, v)
        out.append(Cycle(vertices=tuple(walk), closing_edge=e, source=tree.strategy.value))
    return out


def _component_edge_groups(graph):
    labels, count = graph.component_labels()
    m = graph.edge_count
    if m == 0:
        return np.empty(0, np.int32), np.zeros(count + 1, np.int64)
    lbl_e = labels[graph.edge_u]
    order = np.lexsort((np.arange(m), lbl_e))
    comp_edges = np.arange(m, dtype=np.int32)[order]
    ptr = np.zeros(count + 1, np.int64)
    np.cumsum(np.bincount(lbl_e, minlength=count), out=ptr[1:])
    return comp_edges, ptr


def enumerate_cycles(graph, strategy=Strategy.BREADTH_FIRST,
                     root_mode=RootMode.ALL_ROOTS, retain_limit=None):
    """Union of fundamental cycles over roots, deduplicated by canonical key.

    AllRoots roots a tree at every node (the faithful mode);
    SingleRootPerComponent roots one tree per component at its smallest node
    id (fast mode).  Output is deterministic given the graph and settings.
    ``retain_limit`` bounds memory: cycles at least that long keep only
    their hash/length (they still count and dedup).
    """
    strategy = Strategy(strategy)
    root_mode = RootMode(root_mode)
    labels, count = graph.component_labels()
    if root_mode is RootMode.ALL_ROOTS:
        roots = np.arange(graph.node_count, dtype=np.int32)
    else:
        if graph.node_count:
            _, first_idx = np.unique(labels, return_index=True)
            roots = np.sort(first_idx).astype(np.int32)
        else:
            roots = np.empty(0, np.int32)
    comp_edges, comp_ptr = _component_edge_groups(graph)
    limit = -1 if retain_limit is None else int(retain_limit)
    (nslots, lengths, h1, h2, offs, first_root, closing, verts,
     wslot, wroot) = kernels.enumerate_driver(
        graph.indptr, graph.nbr, graph.eid, graph.edge_u, graph.edge_v,
        labels, comp_edges, comp_ptr, roots,
        strategy is Strategy.DEPTH_FIRST, limit)
    return CycleSet(graph, strategy.value, root_mode.value, retain_limit,
                    lengths, h1, h2, offs, first_root, closing, verts, wslot, wroot)


def filter_by_size(cycle_set, min_exclusive=3, max_exclusive=50):
    """Retain cycles with min_exclusive < length < max_exclusive."""
    min_exclusive = int(min_exclusive)
    max_exclusive = int(max_exclusive)
    if not 0 < min_exclusive < max_exclusive:
        raise ValueError(f"invalid size bounds ({min_exclusive}, {max_exclusive})")
    cs = cycle_set
    mask = (cs.lengths > min_exclusive) & (cs.lengths < max_exclusive)
    idx = np.flatnonzero(mask)
    slot_map = np.full(len(cs.lengths), -1, np.int64)
    slot_map[idx] = np.arange(len(idx))
    wkeep = np.flatnonzero(slot_map[cs._wslot] >= 0)
    return CycleSet(cs.graph, cs.source, cs.root_mode, cs.retain_limit,
                    cs.lengths[idx], cs.h1[idx], cs.h2[idx], cs.offsets[idx],
                    cs.first_root[idx], cs.closing_edge[idx], cs.verts,
                    slot_map[cs._wslot[wkeep]], cs._wroot[wkeep])


def brute_force_simple_cycles(graph, max_nodes=16):
    """Exhaustive simple-cycle oracle for small graphs (tests/acceptance only).

    Enumerates every simple cycle by path extension from each minimal start
    vertex; a parallel edge pair counts as a length-2 cycle.  Refuses graphs
    with more than ``max_nodes`` nodes.
    """
    n = graph.node_count
    if n > max_nodes:
        raise SizeLimitError(f"oracle refuses graphs with more than {max_nodes} nodes (got {n})")
    pair_edges = {}
    for e in range(graph.edge_count):
        u, v = graph.edge_endpoints(e)
        pair_edges.setdefault((min(u, v), max(u, v)), []).append(e)
    adj = {v: sorted({w for (w, _) in graph.neighbors(v)}) for v in range(n)}

    cycles = []
    for (u, v), es in sorted(pair_edges.items()):
        if len(es) >= 2:
            cycles.append(Cycle(vertices=(u, v), closing_edge=es[1], source=ORACLE))

    for s in range(n):
        stack = [(s, [s])]
        while stack:
            last, path = stack.pop()
            for w in adj[last]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    closing = min(pair_edges[(min(last, s), max(last, s))])
                    cycles.append(Cycle(vertices=tuple(path), closing_edge=closing, source=ORACLE))
                elif w > s and w not in path:
                    stack.append((w, path + [w]))
    return CycleSet.from_cycles(graph, cycles, ORACLE)
