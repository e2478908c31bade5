"""Indicator framework: raw measurements, binary suspicion flags, weighted score.

Each indicator measures one property of a suspicious group (a cycle's node
set, or any node set), flags it suspicious when the raw value crosses its
threshold in the suspicious direction, and the fraud score is the weighted
flag sum.  With unit weights the score is exactly the count of raised flags.

Thresholds and weights are conventions, not facts: real deployments tune
them per portfolio.  The built-in defaults are documented on
``default_registry``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernels
from .cycles import canonical_key
from .errors import ConfigError, GraphError

UNAVAILABLE = math.nan


class IndicatorKind(Enum):
    INDUCED_DENSITY = "induced_density"
    CHORD_COUNT = "chord_count"
    REPEAT_PAIR_COUNT = "repeat_pairs"
    MEAN_EXTERNAL_DEGREE = "mean_external_degree"
    SIZE_BAND = "size_band"
    TEMPORAL_SPAN_DAYS = "temporal_span_days"
    EXTERNAL = "external"

    @classmethod
    def parse(cls, text):
        t = str(text).strip().lower()
        for k in cls:
            if t == k.value:
                return k
        raise ConfigError(f"unknown indicator kind {text!r}")


class Direction(Enum):
    HIGHER_SUSPICIOUS = "higher"
    LOWER_SUSPICIOUS = "lower"

    @classmethod
    def parse(cls, text):
        t = str(text).strip().lower()
        for d in cls:
            if t == d.value:
                return d
        raise ConfigError(f"unknown direction {text!r} (expected 'higher' or 'lower')")


@dataclass(frozen=True)
class Indicator:
    id: str
    kind: IndicatorKind
    direction: Direction
    threshold: float
    weight: float = 1.0

    def __post_init__(self):
        if self.weight < 0:
            raise ConfigError(f"indicator {self.id!r}: weight must be non-negative")
        if not self.id:
            raise ConfigError("indicator id must be non-empty")


def default_registry():
    """Six built-in indicators with unit weights.

    Defaults: density >= 0.15, any chord, any repeat pair, mean external
    degree <= 2.0 (dedicated rings interact little with outsiders), mid
    size band 4..20, and all internal collisions within a year.
    """
    return [
        Indicator("density", IndicatorKind.INDUCED_DENSITY, Direction.HIGHER_SUSPICIOUS, 0.15),
        Indicator("chords", IndicatorKind.CHORD_COUNT, Direction.HIGHER_SUSPICIOUS, 1.0),
        Indicator("repeat_pairs", IndicatorKind.REPEAT_PAIR_COUNT, Direction.HIGHER_SUSPICIOUS, 1.0),
        Indicator("external_degree", IndicatorKind.MEAN_EXTERNAL_DEGREE, Direction.LOWER_SUSPICIOUS, 2.0),
        Indicator("size_band", IndicatorKind.SIZE_BAND, Direction.HIGHER_SUSPICIOUS, 1.0),
        Indicator("temporal_span", IndicatorKind.TEMPORAL_SPAN_DAYS, Direction.LOWER_SUSPICIOUS, 365.0),
    ]


def _check_registry(registry):
    regs = list(registry)
    if not regs:
        raise ConfigError("indicator registry is empty")
    ids = [ind.id for ind in regs]
    if len(set(ids)) != len(ids):
        raise ConfigError("indicator ids must be unique within a registry")
    return regs


@dataclass(frozen=True)
class GroupMetrics:
    """Induced-subgraph measurements for one node group."""

    node_count: int
    internal_edges: int          # chords and parallels included
    repeat_pairs: int            # sum of (multiplicity - 1) over node pairs
    external_endpoints: int      # edge endpoints leaving the group
    temporal_span_days: float    # NaN when no internal edge carries a date

    @property
    def density(self):
        n = self.node_count
        if n < 2:
            return 0.0
        return 2.0 * self.internal_edges / (n * (n - 1))

    @property
    def chord_count(self):
        return self.internal_edges - self.node_count

    @property
    def mean_external_degree(self):
        return self.external_endpoints / self.node_count if self.node_count else 0.0

    @property
    def size_band(self):
        return 1.0 if 4 <= self.node_count <= 20 else 0.0


def batch_group_metrics(groups, graph, edge_dates=None):
    """GroupMetrics for many node groups in one kernel pass."""
    groups = [sorted(int(v) for v in set(g)) for g in groups]
    for g in groups:
        if g and (g[0] < 0 or g[-1] >= graph.node_count):
            raise GraphError("group references a node absent from the graph")
    if edge_dates is None:
        edge_dates = np.full(graph.edge_count, -1, np.int64)
    else:
        edge_dates = np.asarray(edge_dates, np.int64)
        if len(edge_dates) != graph.edge_count:
            raise GraphError("edge_dates length does not match edge count")
    if not groups:
        return []
    lens = np.array([len(g) for g in groups], np.int64)
    ptr = np.zeros(len(groups) + 1, np.int64)
    np.cumsum(lens, out=ptr[1:])
    concat = np.fromiter((v for g in groups for v in g), np.int32, count=int(ptr[-1]))
    m_int, repeats, ext, dmin, dmax = kernels.group_stats(
        graph.indptr, graph.nbr, graph.eid, edge_dates, concat, ptr, graph.node_count)
    out = []
    for i in range(len(groups)):
        span = float(dmax[i] - dmin[i]) if dmax[i] >= 0 else UNAVAILABLE
        out.append(GroupMetrics(len(groups[i]), int(m_int[i]), int(repeats[i]),
                                int(ext[i]), span))
    return out


def group_metrics(nodes, graph, edge_dates=None):
    return batch_group_metrics([nodes], graph, edge_dates)[0]


def _raw_from_metrics(ind, metrics, externals=None):
    k = ind.kind
    if k is IndicatorKind.INDUCED_DENSITY:
        return metrics.density
    if k is IndicatorKind.CHORD_COUNT:
        return float(metrics.chord_count)
    if k is IndicatorKind.REPEAT_PAIR_COUNT:
        return float(metrics.repeat_pairs)
    if k is IndicatorKind.MEAN_EXTERNAL_DEGREE:
        return metrics.mean_external_degree
    if k is IndicatorKind.SIZE_BAND:
        return metrics.size_band
    if k is IndicatorKind.TEMPORAL_SPAN_DAYS:
        return metrics.temporal_span_days
    if k is IndicatorKind.EXTERNAL:
        if externals is None or ind.id not in externals:
            raise GraphError(f"external indicator {ind.id!r} needs a supplied value")
        return float(externals[ind.id])
    raise GraphError(f"unhandled indicator kind {k}")


def measure(indicator, cycle, graph, edge_dates=None, externals=None):
    """Raw indicator value for a cycle's node set."""
    vertices = cycle.vertices if hasattr(cycle, "vertices") else tuple(cycle)
    return _raw_from_metrics(indicator, group_metrics(vertices, graph, edge_dates), externals)


def flag(indicator, raw):
    """Binary suspicion flag; the unavailable sentinel never flags."""
    if isinstance(raw, float) and math.isnan(raw):
        return 0
    if indicator.direction is Direction.HIGHER_SUSPICIOUS:
        return 1 if raw >= indicator.threshold else 0
    return 1 if raw <= indicator.threshold else 0


@dataclass
class CycleAssessment:
    cycle_key: tuple
    node_count: int
    internal_edge_count: int
    density: float
    raw_values: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    score: float = 0.0
    cycle_id: int | None = None

    @property
    def density_exceeds_simple(self):
        """Density above the simple-graph bound: parallel edges in play.

        Reported raw rather than clamped; the repeat-pair signal is the
        point."""
        return self.density > 1.0

    def to_dict(self, graph=None):
        d = {
            "cycle_id": self.cycle_id,
            "n": self.node_count,
            "m": self.internal_edge_count,
            "density": round(self.density, 6),
            "density_exceeds_simple": self.density_exceeds_simple,
            "raw": {k: (None if isinstance(v, float) and math.isnan(v) else round(float(v), 6))
                    for k, v in self.raw_values.items()},
            "flags": dict(self.flags),
            "score": round(self.score, 6),
            "vertices": [int(v) for v in self.cycle_key],
        }
        if graph is not None:
            d["drivers"] = [graph.key_of(v) for v in self.cycle_key]
        return d


def _assessment_from_metrics(registry, key, metrics, externals=None):
    raws = {}
    flags_ = {}
    total = 0.0
    for ind in registry:
        raw = _raw_from_metrics(ind, metrics, externals)
        f = flag(ind, raw)
        raws[ind.id] = raw
        flags_[ind.id] = f
        total += ind.weight * f
    return CycleAssessment(
        cycle_key=tuple(int(v) for v in key),
        node_count=metrics.node_count,
        internal_edge_count=metrics.internal_edges,
        density=metrics.density,
        raw_values=raws,
        flags=flags_,
        score=total,
    )


def score(registry, cycle, graph, edge_dates=None, externals=None):
    """Full assessment of one cycle: raw values, flags, weighted score."""
    registry = _check_registry(registry)
    vertices = cycle.vertices if hasattr(cycle, "vertices") else tuple(cycle)
    key = canonical_key(vertices)
    metrics = group_metrics(vertices, graph, edge_dates)
    return _assessment_from_metrics(registry, key, metrics, externals)


def assess_cycle_set(registry, cycle_set, edge_dates=None, externals=None):
    """Assessments for every retained cycle, ids assigned in canonical order."""
    registry = _check_registry(registry)
    keys = cycle_set.keys()
    metrics = batch_group_metrics(keys, cycle_set.graph, edge_dates)
    out = []
    for i, (key, m) in enumerate(zip(keys, metrics)):
        a = _assessment_from_metrics(registry, key, m, externals)
        a.cycle_id = i
        out.append(a)
    return out


def score_node_set(registry, nodes, graph, edge_dates=None, externals=None):
    """Assess an arbitrary node set (used for community baselines)."""
    registry = _check_registry(registry)
    nodes = sorted(int(v) for v in set(nodes))
    metrics = group_metrics(nodes, graph, edge_dates)
    return _assessment_from_metrics(registry, tuple(nodes), metrics, externals)


def rank(assessments):
    """Descending score; ties by descending density, then ascending key."""
    return sorted(assessments, key=lambda a: (-a.score, -a.density, a.cycle_key))
