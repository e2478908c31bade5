"""Community-detection baselines and the cycle-vs-community comparison harness.

Two modularity maximizers are provided: a multilevel local-move algorithm
(deterministic ascending-id sweeps, no randomized order) and greedy
agglomeration (best positive-gain merge until none remains).  Both run on the
same pruned driver network as cycle detection; ``compare`` then pairs each
suspicious cycle with the community holding the majority of its nodes and
scores both with the same indicator registry, the paper-style review-burden
and fraud-likelihood contrast.

An externally computed partition (e.g. a walktrap run from another tool) can
be slotted into the harness through ``load_partition_csv``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import FormatError, GraphError
from .scoring import assess_cycle_set, score_node_set

_EPS = 1e-12


class Algorithm(Enum):
    MULTILEVEL = "multilevel"
    FAST_GREEDY = "fastgreedy"

    @classmethod
    def parse(cls, text):
        t = str(text).strip().lower().replace("-", "").replace("_", "")
        for a in cls:
            if t == a.value:
                return a
        raise ValueError(f"unknown community algorithm {text!r}")


@dataclass
class Partition:
    """Total assignment of nodes to communities, ids dense 0..k-1."""

    assignment: np.ndarray
    community_count: int
    modularity: float | None = None
    pass_modularities: list = field(default_factory=list)
    merge_gains: list = field(default_factory=list)

    def members(self, cid):
        return np.flatnonzero(self.assignment == cid)

    def validate(self, graph):
        a = self.assignment
        if len(a) != graph.node_count:
            raise GraphError("partition does not cover the graph's nodes")
        if len(a) and (a.min() < 0 or a.max() >= self.community_count):
            raise GraphError("partition ids must be dense 0..k-1")
        if len(a) and len(np.unique(a)) != self.community_count:
            raise GraphError("partition ids must be dense 0..k-1")


def _relabel_by_smallest_member(assignment):
    assignment = np.asarray(assignment, np.int64)
    if not len(assignment):
        return assignment.astype(np.int32), 0
    _, first_idx, inverse = np.unique(assignment, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first_idx))  # rank labels by first appearance
    dense = order[inverse]
    return dense.astype(np.int32), int(dense.max()) + 1 if len(dense) else 0


def modularity(graph, partition):
    """Newman modularity Q = sum_c (e_c/m - (d_c/2m)^2), multigraph-aware."""
    if graph.edge_count == 0:
        raise GraphError("modularity is undefined on an edgeless graph")
    partition.validate(graph)
    a = partition.assignment
    m = graph.edge_count
    k = partition.community_count
    internal = a[graph.edge_u] == a[graph.edge_v]
    e_c = np.bincount(a[graph.edge_u][internal], minlength=k)
    d_c = np.bincount(a, weights=graph.degrees(), minlength=k)
    return float((e_c / m - (d_c / (2.0 * m)) ** 2).sum())


# -- multilevel (local moving + aggregation) -------------------------------------


def _louvain_level(n, edges, weights, selfw, k_w, two_m):
    """One level of local moving; returns (assignment, moved_any, sweep_qs).

    ``edges``/``weights``: undirected weighted edge list between distinct
    level-nodes; ``selfw``: per-node self-loop weight (internal weight of the
    aggregated group); ``k_w``: weighted degree incl. 2*selfw.
    """
    adj = [[] for _ in range(n)]
    for (a, b), w in zip(edges, weights):
        adj[a].append((b, w))
        adj[b].append((a, w))
    comm = list(range(n))
    tot = k_w.copy()

    def sweep_q():
        internal = sum(selfw)
        for (a, b), w in zip(edges, weights):
            if comm[a] == comm[b]:
                internal += w
        used = {}
        for c in comm:
            used[c] = 0.0
        for v in range(n):
            used[comm[v]] += k_w[v]
        m = two_m / 2.0
        return internal / m - sum((t / two_m) ** 2 for t in used.values())

    sweep_qs = []
    moved_any = False
    while True:
        moved = 0
        for u in range(n):
            cu = comm[u]
            tot[cu] -= k_w[u]
            wlinks = {}
            for v, w in adj[u]:
                if v != u:
                    wlinks[comm[v]] = wlinks.get(comm[v], 0.0) + w
            best_c = cu
            best_gain = wlinks.get(cu, 0.0) - k_w[u] * tot[cu] / two_m
            for c in sorted(wlinks):
                gain = wlinks[c] - k_w[u] * tot[c] / two_m
                if gain > best_gain + _EPS or (gain > best_gain - _EPS and c < best_c):
                    best_gain = gain
                    best_c = c
            comm[u] = best_c
            tot[best_c] += k_w[u]
            if best_c != cu:
                moved += 1
        sweep_qs.append(sweep_q())
        if moved == 0:
            break
        moved_any = True
    return comm, moved_any, sweep_qs


def multilevel(graph):
    """Multilevel modularity optimization with deterministic sweep order."""
    if graph.edge_count == 0:
        raise GraphError("community detection needs at least one edge")
    n = graph.node_count
    two_m = 2.0 * graph.edge_count
    node_to_orig = [[v] for v in range(n)]
    edges = list(zip(graph.edge_u.tolist(), graph.edge_v.tolist()))
    weights = [1.0] * len(edges)
    selfw = [0.0] * n
    k_w = [0.0] * n
    for (a, b), w in zip(edges, weights):
        k_w[a] += w
        k_w[b] += w
    pass_qs = []

    while True:
        comm, moved_any, sweep_qs = _louvain_level(len(node_to_orig), edges, weights, selfw, k_w, two_m)
        pass_qs.extend(sweep_qs)
        if not moved_any:
            break
        # aggregate communities into the next level's nodes
        labels = sorted(set(comm))
        relabel = {c: i for i, c in enumerate(labels)}
        comm = [relabel[c] for c in comm]
        nn = len(labels)
        new_orig = [[] for _ in range(nn)]
        for v, c in enumerate(comm):
            new_orig[c].extend(node_to_orig[v])
        new_selfw = [0.0] * nn
        for v, c in enumerate(comm):
            new_selfw[c] += selfw[v]
        agg = {}
        for (a, b), w in zip(edges, weights):
            ca, cb = comm[a], comm[b]
            if ca == cb:
                new_selfw[ca] += w
            else:
                key = (min(ca, cb), max(ca, cb))
                agg[key] = agg.get(key, 0.0) + w
        edges = sorted(agg)
        weights = [agg[e] for e in edges]
        node_to_orig = new_orig
        selfw = new_selfw
        k_w = [2.0 * s for s in selfw]
        for (a, b), w in zip(edges, weights):
            k_w[a] += w
            k_w[b] += w
        if nn == 1:
            break

    assignment = np.empty(n, np.int64)
    for cid, members in enumerate(node_to_orig):
        assignment[members] = cid
    dense, count = _relabel_by_smallest_member(assignment)
    part = Partition(dense, count, pass_modularities=pass_qs)
    part.modularity = modularity(graph, part)
    return part


# -- greedy agglomeration ---------------------------------------------------------


def fast_greedy(graph):
    """Agglomerative best-merge by modularity gain until no positive gain."""
    if graph.edge_count == 0:
        raise GraphError("community detection needs at least one edge")
    n = graph.node_count
    m = float(graph.edge_count)
    deg = graph.degrees().astype(float)

    internal = [0.0] * n
    dsum = deg.tolist()
    between = [dict() for _ in range(n)]
    for e in range(graph.edge_count):
        u, v = graph.edge_endpoints(e)
        between[u][v] = between[u].get(v, 0.0) + 1.0
        between[v][u] = between[v].get(u, 0.0) + 1.0

    def gain(i, j):
        return between[i].get(j, 0.0) / m - dsum[i] * dsum[j] / (2.0 * m * m)

    alive = [True] * n
    heap = []
    for i in range(n):
        for j in between[i]:
            if i < j:
                heapq.heappush(heap, (-gain(i, j), i, j))

    parent = list(range(n))
    gains = []
    while heap:
        negdq, i, j = heapq.heappop(heap)
        if not (alive[i] and alive[j]) or j not in between[i]:
            continue
        dq = -negdq
        if abs(gain(i, j) - dq) > 1e-15:
            continue  # stale entry
        if dq <= 0:
            break
        # merge j into i
        gains.append(dq)
        alive[j] = False
        parent[j] = i
        internal[i] += internal[j] + between[i][j]
        del between[i][j]
        del between[j][i]
        for k, w in list(between[j].items()):
            del between[k][j]
            between[i][k] = between[i].get(k, 0.0) + w
            between[k][i] = between[i][k]
        between[j].clear()
        dsum[i] += dsum[j]
        for k in sorted(between[i]):
            a, b = (i, k) if i < k else (k, i)
            heapq.heappush(heap, (-gain(a, b), a, b))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    assignment = np.array([find(v) for v in range(n)], np.int64)
    dense, count = _relabel_by_smallest_member(assignment)
    part = Partition(dense, count, merge_gains=gains)
    part.modularity = modularity(graph, part)
    return part


def detect_communities(graph, algorithm):
    algorithm = Algorithm(algorithm) if not isinstance(algorithm, Algorithm) else algorithm
    if algorithm is Algorithm.MULTILEVEL:
        return multilevel(graph)
    return fast_greedy(graph)


def load_partition_csv(path, graph):
    """External partition file: ``node_external_key,community_id`` with header."""
    import csv

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError("empty partition file") from None
        if tuple(h.strip().lower() for h in header) != ("node_external_key", "community_id"):
            raise FormatError("partition header must be node_external_key,community_id")
        raw = np.full(graph.node_count, -1, np.int64)
        groups = {}
        for row in reader:
            if len(row) != 2:
                raise FormatError(f"bad partition row {row!r}")
            key, cid = row[0].strip(), row[1].strip()
            v = graph.id_of(key)
            if raw[v] != -1:
                raise FormatError(f"node {key!r} assigned twice")
            gid = groups.setdefault(cid, len(groups))
            raw[v] = gid
    if (raw < 0).any():
        missing = graph.key_of(int(np.flatnonzero(raw < 0)[0]))
        raise FormatError(f"partition misses node {missing!r}")
    dense, count = _relabel_by_smallest_member(raw)
    return Partition(dense, count)


# -- the comparison harness -------------------------------------------------------


@dataclass
class PairRow:
    algorithm: str
    community_id: int
    community_size: int
    community_score: float
    cycle_id: int
    cycle_size: int
    cycle_score: float
    contained: bool


@dataclass
class CyclePairing:
    algorithm: str
    cycle_id: int
    cycle_key: tuple
    cycle_score: float
    community_id: int
    community_score: float
    contained: bool


@dataclass
class ComparisonReport:
    group_counts: dict
    cycle_count: int
    rows: list = field(default_factory=list)       # per-community best cycle
    cycle_pairs: list = field(default_factory=list)

    def to_dict(self):
        return {
            "group_counts": dict(self.group_counts),
            "cycle_count": self.cycle_count,
            "rows": [
                {
                    "algorithm": r.algorithm,
                    "community_id": r.community_id,
                    "community_n": r.community_size,
                    "community_score": round(r.community_score, 6),
                    "cycle_id": r.cycle_id,
                    "cycle_n": r.cycle_size,
                    "cycle_score": round(r.cycle_score, 6),
                    "contained": r.contained,
                }
                for r in self.rows
            ],
        }


def compare(cycles, partitions, registry, graph, edge_dates=None):
    """Pair each cycle with its majority community and score both sides.

    ``partitions`` maps an algorithm name to a Partition computed on the
    same graph the cycles came from.  Community score targets the
    community's full node set with the identical registry.  A cycle whose
    nodes straddle communities is assigned by majority overlap (ties to the
    smallest community id); full containment is reported per pair.
    """
    for name, part in partitions.items():
        part.validate(graph)
    if cycles.graph is not graph:
        raise GraphError("cycle set was computed on a different graph")

    assessments = assess_cycle_set(registry, cycles, edge_dates)
    keys = cycles.keys()
    report = ComparisonReport(
        group_counts={name: part.community_count for name, part in partitions.items()},
        cycle_count=cycles.total_count,
    )
    for name in sorted(partitions):
        part = partitions[name]
        comm_scores = {}
        best_by_comm = {}
        for a, key in zip(assessments, keys):
            cids = part.assignment[list(key)]
            counts = np.bincount(cids)
            top = counts.max()
            cid = int(np.flatnonzero(counts == top)[0])
            contained = bool((cids == cid).all())
            if cid not in comm_scores:
                members = part.members(cid)
                comm_scores[cid] = (score_node_set(registry, members, graph, edge_dates).score,
                                    len(members))
            cscore, csize = comm_scores[cid]
            report.cycle_pairs.append(CyclePairing(
                algorithm=name, cycle_id=a.cycle_id, cycle_key=a.cycle_key,
                cycle_score=a.score, community_id=cid, community_score=cscore,
                contained=contained))
            cur = best_by_comm.get(cid)
            if cur is None or (a.score, -a.cycle_id) > (cur.score, -cur.cycle_id):
                best_by_comm[cid] = a
        for cid in sorted(best_by_comm):
            a = best_by_comm[cid]
            cscore, csize = comm_scores[cid]
            cids = part.assignment[list(a.cycle_key)]
            report.rows.append(PairRow(
                algorithm=name, community_id=cid, community_size=csize,
                community_score=cscore, cycle_id=a.cycle_id,
                cycle_size=a.node_count, cycle_score=a.score,
                contained=bool((cids == cid).all())))
    return report
