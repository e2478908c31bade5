"""Collision CSV parsing, driver-network projection, and 2-core pruning.

Input format (UTF-8, header required)::

    collision_id,driver_id,vehicle_id,date

One row per driver-per-collision; ``vehicle_id`` is reserved and unused;
``date`` is optional ISO 8601 (YYYY-MM-DD).  The two-mode collision/driver
structure is projected onto drivers by clique expansion: a collision with k
identified drivers contributes k*(k-1)/2 edges, each tagged with its source
collision id.
"""

from __future__ import annotations

import io
import sys
from dataclasses import dataclass, field
from datetime import date as _date
from pathlib import Path

import numpy as np

from . import kernels
from .errors import FormatError, GraphError
from .graph import MultiGraph

EXPECTED_HEADER = ("collision_id", "driver_id", "vehicle_id", "date")
DATE_MISSING = -1


@dataclass
class CollisionRecord:
    """One collision: every distinct driver key seen for its collision_id."""

    collision_id: str
    driver_keys: list
    occurred_on: _date | None = None


@dataclass
class SkipReport:
    rows_read: int = 0
    rows_used: int = 0
    missing_driver: int = 0
    malformed: int = 0
    duplicate_pairs: int = 0
    date_conflicts: int = 0

    def to_dict(self):
        return {
            "rows_read": self.rows_read,
            "rows_used": self.rows_used,
            "missing_driver": self.missing_driver,
            "malformed": self.malformed,
            "duplicate_pairs": self.duplicate_pairs,
            "date_conflicts": self.date_conflicts,
        }

    def emit(self, stream=None):
        stream = stream or sys.stderr
        d = self.to_dict()
        print("ingest skip report: " + ", ".join(f"{k}={v}" for k, v in d.items()), file=stream)


@dataclass
class CollisionDataset:
    records: list = field(default_factory=list)
    drivers: list = field(default_factory=list)  # first-seen order

    @property
    def driver_registry(self):
        return set(self.drivers)


def parse_collisions(source):
    """Parse the collision CSV into one record per distinct collision_id.

    Returns (dataset, skip_report).  Rows with a missing driver key are
    counted and skipped; duplicate (collision_id, driver_id) pairs are
    deduplicated and counted; rows that do not parse (wrong field count,
    bad date) are counted as malformed.
    """
    import csv

    if isinstance(source, (str, Path)):
        fh = open(source, "r", encoding="utf-8", newline="")
        close = True
    elif isinstance(source, (bytes, bytearray)):
        fh = io.StringIO(source.decode("utf-8"))
        close = False
    elif hasattr(source, "read"):
        raw = source.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        fh = io.StringIO(raw)
        close = False
    else:
        raise FormatError(f"unsupported collision source {type(source).__name__}")

    try:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError("empty input: missing CSV header") from None
        got = tuple(h.strip().lower() for h in header)
        if got != EXPECTED_HEADER:
            raise FormatError(
                f"bad header {got!r}; expected {','.join(EXPECTED_HEADER)}")

        report = SkipReport()
        by_id = {}
        order = []
        seen_pairs = set()
        drivers = []
        seen_drivers = set()
        for row in reader:
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            report.rows_read += 1
            if len(row) != 4:
                report.malformed += 1
                continue
            cid, driver, _vehicle, rawdate = (c.strip() for c in row)
            if not cid:
                report.malformed += 1
                continue
            if not driver:
                report.missing_driver += 1
                continue
            occurred = None
            if rawdate:
                try:
                    occurred = _date.fromisoformat(rawdate)
                except ValueError:
                    report.malformed += 1
                    continue
            if (cid, driver) in seen_pairs:
                report.duplicate_pairs += 1
                continue
            seen_pairs.add((cid, driver))
            rec = by_id.get(cid)
            if rec is None:
                rec = CollisionRecord(cid, [], occurred)
                by_id[cid] = rec
                order.append(cid)
            rec.driver_keys.append(driver)
            if occurred is not None:
                if rec.occurred_on is None:
                    rec.occurred_on = occurred
                elif rec.occurred_on != occurred:
                    report.date_conflicts += 1  # first non-null date wins
            if driver not in seen_drivers:
                seen_drivers.add(driver)
                drivers.append(driver)
            report.rows_used += 1
        return CollisionDataset([by_id[c] for c in order], drivers), report
    finally:
        if close:
            fh.close()


@dataclass
class CollisionNetwork:
    """Driver multigraph plus the edge -> collision side tables."""

    graph: MultiGraph
    edge_collision: list          # collision_id per edge id
    edge_dates: np.ndarray        # proleptic ordinal day per edge, -1 missing


def build_collision_network(dataset):
    """One-mode projection: a node per driver, a clique of edges per collision."""
    key_to_id = {k: i for i, k in enumerate(dataset.drivers)}
    edges = []
    edge_collision = []
    edge_dates = []
    for rec in dataset.records:
        ids = [key_to_id[k] for k in rec.driver_keys]
        d = rec.occurred_on.toordinal() if rec.occurred_on is not None else DATE_MISSING
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                edges.append((ids[i], ids[j]))
                edge_collision.append(rec.collision_id)
                edge_dates.append(d)
    graph = MultiGraph(len(dataset.drivers), edges, keys=list(dataset.drivers))
    return CollisionNetwork(graph, edge_collision, np.asarray(edge_dates, np.int64))


@dataclass
class PruneResult:
    graph: MultiGraph
    node_map: np.ndarray  # new id -> original id
    edge_map: np.ndarray  # new edge id -> original edge id


def prune_to_cycle_core(graph):
    """Iteratively remove degree-0/1 nodes to a fixed point (the 2-core).

    The result has minimum degree >= 2 or is empty, preserves every simple
    cycle, and is idempotent.  Node ids are re-densified; the mapping back
    to original ids is returned.
    """
    keep = np.asarray(kernels.two_core_mask(graph.indptr, graph.nbr, graph.node_count), bool)
    node_map = np.flatnonzero(keep).astype(np.int64)
    remap = np.full(graph.node_count, -1, np.int64)
    remap[node_map] = np.arange(len(node_map))
    if graph.edge_count:
        edge_map = np.flatnonzero(keep[graph.edge_u] & keep[graph.edge_v]).astype(np.int64)
        new_edges = np.stack([remap[graph.edge_u[edge_map]], remap[graph.edge_v[edge_map]]], axis=1)
    else:
        edge_map = np.empty(0, np.int64)
        new_edges = np.empty((0, 2), np.int64)
    keys = [graph.keys[i] for i in node_map]
    pruned = MultiGraph(len(node_map), new_edges, keys=keys)
    return PruneResult(pruned, node_map, edge_map)


def prune_network(net):
    """2-core pruning of a CollisionNetwork, side tables remapped along."""
    res = prune_to_cycle_core(net.graph)
    edge_collision = [net.edge_collision[i] for i in res.edge_map]
    edge_dates = net.edge_dates[res.edge_map] if len(net.edge_dates) else net.edge_dates
    return CollisionNetwork(res.graph, edge_collision, edge_dates), res
