"""Undirected multigraph over dense integer node ids, with traversal primitives.

The graph is immutable once constructed: adjacency lives in CSR arrays sorted
by (neighbor id, edge id), which fixes the traversal order every other module
relies on for reproducibility.  Node ids are dense 0..n-1; an external string
key per node is kept in a bidirectional registry.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernels
from .errors import GraphError

MAX_NODES = 1 << 30  # edge-pair encoding in the cycle hash needs ids < 2**30


class Strategy(Enum):
    """Spanning-tree construction strategy."""

    BREADTH_FIRST = "bfs"
    DEPTH_FIRST = "dfs"

    @classmethod
    def parse(cls, text):
        t = str(text).strip().lower()
        for s in cls:
            if t in (s.value, s.name.lower()):
                return s
        raise ValueError(f"unknown strategy {text!r} (expected 'bfs' or 'dfs')")


class MultiGraph:
    """Finalized undirected multigraph.

    Parallel edges are kept (repeat collisions between the same driver pair
    are a fraud signal downstream); self-loops are rejected at construction.
    All read operations are safe under concurrent readers.
    """

    __slots__ = ("node_count", "edge_count", "edge_u", "edge_v",
                 "indptr", "nbr", "eid", "_keys", "_key_to_id",
                 "_labels", "_label_count")

    def __init__(self, node_count, edges, keys=None):
        node_count = int(node_count)
        if node_count < 0 or node_count > MAX_NODES:
            raise GraphError(f"node count {node_count} out of supported range")
        edges = list(edges) if not isinstance(edges, np.ndarray) else edges
        if len(edges):
            arr = np.asarray(edges, dtype=np.int64).reshape(len(edges), -1)
            if arr.shape[1] != 2:
                raise GraphError("edges must be (u, v) pairs")
            eu = arr[:, 0]
            ev = arr[:, 1]
        else:
            eu = np.empty(0, np.int64)
            ev = np.empty(0, np.int64)
        if len(eu):
            if eu.min() < 0 or ev.min() < 0 or eu.max() >= node_count or ev.max() >= node_count:
                raise GraphError("edge endpoint out of range")
            loops = eu == ev
            if loops.any():
                raise GraphError(
                    f"self-loop on node {int(eu[np.argmax(loops)])}: a driver cannot collide with themself")
        self.node_count = node_count
        self.edge_count = len(eu)
        self.edge_u = eu.astype(np.int32)
        self.edge_v = ev.astype(np.int32)

        ends = np.concatenate([eu, ev])
        others = np.concatenate([ev, eu]).astype(np.int32)
        eids = np.tile(np.arange(self.edge_count, dtype=np.int32), 2)
        order = np.lexsort((eids, others, ends))
        self.nbr = others[order]
        self.eid = eids[order]
        counts = np.bincount(ends, minlength=node_count) if len(ends) else np.zeros(node_count, np.int64)
        self.indptr = np.zeros(node_count + 1, np.int64)
        np.cumsum(counts, out=self.indptr[1:])

        if keys is not None:
            keys = list(keys)
            if len(keys) != node_count:
                raise GraphError("registry must assign exactly one key per node")
            if len(set(keys)) != node_count:
                raise GraphError("registry keys must be unique")
            self._keys = keys
        else:
            self._keys = None
        self._key_to_id = None
        self._labels = None
        self._label_count = None

    # -- registry -----------------------------------------------------------

    @property
    def keys(self):
        if self._keys is None:
            self._keys = [str(i) for i in range(self.node_count)]
        return self._keys

    def key_of(self, v):
        self._check_node(v)
        return self.keys[v]

    def id_of(self, key):
        if self._key_to_id is None:
            self._key_to_id = {k: i for i, k in enumerate(self.keys)}
        try:
            return self._key_to_id[key]
        except KeyError:
            raise GraphError(f"unknown external key {key!r}") from None

    # -- basic queries ------------------------------------------------------

    def _check_node(self, v):
        if not 0 <= int(v) < self.node_count:
            raise GraphError(f"invalid node id {v}")

    def degree(self, v):
        """Edge endpoints incident to v; parallel edges count with multiplicity."""
        self._check_node(v)
        return int(self.indptr[int(v) + 1] - self.indptr[int(v)])

    def degrees(self):
        return np.diff(self.indptr)

    def neighbors(self, v):
        """(neighbor, edge_id) pairs in ascending (neighbor, edge_id) order."""
        self._check_node(v)
        v = int(v)
        sl = slice(self.indptr[v], self.indptr[v + 1])
        return list(zip(self.nbr[sl].tolist(), self.eid[sl].tolist()))

    def edge_endpoints(self, e):
        if not 0 <= int(e) < self.edge_count:
            raise GraphError(f"invalid edge id {e}")
        return int(self.edge_u[int(e)]), int(self.edge_v[int(e)])

    # -- components ---------------------------------------------------------

    def component_labels(self):
        """Per-node component label; labels ordered by smallest member id."""
        if self._labels is None:
            labels, count = kernels.component_labels(self.indptr, self.nbr, self.node_count)
            self._labels = np.asarray(labels, np.int32)
            self._label_count = int(count)
        return self._labels, self._label_count

    def connected_components(self):
        """Maximal connected node sets, ordered by smallest member id."""
        labels, count = self.component_labels()
        order = np.argsort(labels, kind="stable")
        bounds = np.searchsorted(labels[order], np.arange(count + 1))
        return [order[bounds[c]:bounds[c + 1]].astype(np.int64) for c in range(count)]

    # -- spanning trees -----------------------------------------------------

    def spanning_tree(self, root, strategy=Strategy.BREADTH_FIRST):
        """Spanning tree of root's component.

        BreadthFirst depths equal shortest hop distances from the root;
        DepthFirst discovery is preorder.  Neighbor iteration is ascending
        (neighbor id, edge id), so tree shapes are reproducible.
        """
        self._check_node(root)
        root = int(root)
        strategy = Strategy(strategy)
        n = self.node_count
        parent_node = np.full(n, -1, np.int32)
        parent_edge = np.full(n, -1, np.int32)
        depth = np.full(n, -1, np.int32)
        order = np.empty(max(n, 1), np.int32)
        stamp = np.zeros(n, np.int32)
        ph1 = np.zeros(n, np.int64)
        ph2 = np.zeros(n, np.int64)
        if strategy is Strategy.DEPTH_FIRST:
            stack = np.empty(max(n, 1), np.int32)
            ptrs = np.empty(max(n, 1), np.int64)
            count = kernels.dfs_tree(self.indptr, self.nbr, self.eid, root, stamp, 1,
                                     parent_node, parent_edge, depth, order, stack, ptrs, ph1, ph2)
        else:
            count = kernels.bfs_tree(self.indptr, self.nbr, self.eid, root, stamp, 1,
                                     parent_node, parent_edge, depth, order, ph1, ph2)
        return SpanningTree(graph=self, root=root, strategy=strategy,
                            parent_node=parent_node, parent_edge=parent_edge,
                            depth=depth, order=order[:int(count)].copy())

    # -- induced subgraphs ----------------------------------------------------

    def induced_subgraph(self, nodes):
        """Node set plus exactly the edges internal to it."""
        nodes = np.asarray(sorted(int(v) for v in set(nodes)), dtype=np.int64)
        if len(nodes):
            if nodes[0] < 0 or nodes[-1] >= self.node_count:
                raise GraphError("induced subgraph over unknown node ids")
        mask = np.zeros(self.node_count, bool)
        mask[nodes] = True
        if self.edge_count:
            edges = np.flatnonzero(mask[self.edge_u] & mask[self.edge_v]).astype(np.int64)
        else:
            edges = np.empty(0, np.int64)
        return InducedSubgraph(nodes=nodes, edges=edges)

    def __repr__(self):
        return f"MultiGraph(nodes={self.node_count}, edges={self.edge_count})"


@dataclass
class InducedSubgraph:
    nodes: np.ndarray
    edges: np.ndarray

    @property
    def node_count(self):
        return len(self.nodes)

    @property
    def edge_count(self):
        return len(self.edges)


@dataclass
class SpanningTree:
    """Rooted spanning tree of one component; uncovered nodes have depth -1."""

    graph: MultiGraph
    root: int
    strategy: Strategy
    parent_node: np.ndarray
    parent_edge: np.ndarray
    depth: np.ndarray
    order: np.ndarray  # discovery order over the covered component

    def covers(self, v):
        self.graph._check_node(v)
        return bool(self.depth[int(v)] >= 0)

    @property
    def node_count(self):
        return len(self.order)

    def tree_edges(self):
        """Edge ids used by the tree: one per covered non-root node."""
        covered = self.order[self.order != self.root]
        return np.sort(self.parent_edge[covered].astype(np.int64))

    def path(self, u, v):
        """Unique tree path from u to v (inclusive), routed via their lca."""
        for x in (u, v):
            if not self.covers(x):
                raise GraphError(f"node {x} is outside the tree's component")
        u = int(u)
        v = int(v)
        up, vp = [], []
        du, dv = int(self.depth[u]), int(self.depth[v])
        a, b = u, v
        while du > dv:
            up.append(a)
            a = int(self.parent_node[a])
            du -= 1
        while dv > du:
            vp.append(b)
            b = int(self.parent_node[b])
            dv -= 1
        while a != b:
            up.append(a)
            vp.append(b)
            a = int(self.parent_node[a])
            b = int(self.parent_node[b])
        up.append(a)
        return up + vp[::-1]
