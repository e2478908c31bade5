"""Run-report structures and export writers (JSON, ranked CSV, GraphML, DOT).

The JSON report is deterministic except for its ``meta`` block (timestamps,
wall-clock timings, backend): same input and config produce byte-identical
reports once ``meta`` is dropped.  GraphML/DOT exports cover each suspicious
component (any component containing a ranked cycle) for external viewers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from xml.sax.saxutils import escape, quoteattr

import numpy as np


@dataclass
class RunReport:
    config: dict
    ingestion: dict = field(default_factory=dict)
    cycles: dict = field(default_factory=dict)
    comparison: dict | None = None
    assessments: list = field(default_factory=list)  # ranked CycleAssessment list
    meta: dict = field(default_factory=dict)

    def deterministic_dict(self, graph=None):
        d = {
            "config": self.config,
            "ingestion": self.ingestion,
            "cycles": self.cycles,
            "assessments": [a.to_dict(graph) for a in self.assessments],
        }
        if self.comparison is not None:
            d["comparison"] = self.comparison
        return d

    def to_dict(self, graph=None):
        out = {"meta": self.meta}
        out.update(self.deterministic_dict(graph))
        return out


def fresh_meta(backend, timings=None):
    return {
        "tool": "ringsift",
        "created": datetime.now(timezone.utc).isoformat(),
        "backend": backend,
        "timings_s": {k: round(v, 3) for k, v in (timings or {}).items()},
    }


def write_json_report(path, report, graph=None):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(graph), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_json_report(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


RANKED_COLUMNS = ("rank", "cycle_id", "n", "m", "density", "score", "node_external_keys")


def write_ranked_csv(path, ranked, graph):
    """Ranked assessments; driver keys joined by '|'."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(RANKED_COLUMNS) + "\n")
        for pos, a in enumerate(ranked, start=1):
            keys = "|".join(graph.key_of(v) for v in a.cycle_key)
            fh.write(f"{pos},{a.cycle_id},{a.node_count},{a.internal_edge_count},"
                     f"{a.density:.6f},{a.score:.6f},{keys}\n")


def write_comparison_csv(path, comparison_dict):
    cols = ("algorithm", "community_id", "community_n", "community_score",
            "cycle_id", "cycle_n", "cycle_score", "contained")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(cols) + "\n")
        for r in comparison_dict["rows"]:
            fh.write(",".join(str(r[c]) for c in cols) + "\n")


def suspicious_components(graph, assessments):
    """Components that contain at least one ranked cycle, with member flags.

    Returns a list of (component_label, node_ids, member_mask) where
    member_mask marks nodes that belong to some ranked cycle.
    """
    labels, _count = graph.component_labels()
    member = np.zeros(graph.node_count, bool)
    hit = set()
    for a in assessments:
        for v in a.cycle_key:
            member[v] = True
        if len(a.cycle_key):
            hit.add(int(labels[a.cycle_key[0]]))
    out = []
    for lbl in sorted(hit):
        nodes = np.flatnonzero(labels == lbl)
        out.append((lbl, nodes, member[nodes]))
    return out


def _component_edges(graph, nodes):
    mask = np.zeros(graph.node_count, bool)
    mask[nodes] = True
    if graph.edge_count == 0:
        return np.empty(0, np.int64)
    return np.flatnonzero(mask[graph.edge_u] & mask[graph.edge_v])


def write_graphml(path, graph, nodes, member_mask, edge_collision=None, graph_id="g"):
    """Minimal conforming GraphML for one component."""
    edges = _component_edges(graph, nodes)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write('<?xml version="1.0" encoding="UTF-8"?>\n')
        fh.write('<graphml xmlns="http://graphml.graphdrawing.org/xmlns">\n')
        fh.write('  <key id="d0" for="node" attr.name="driver_key" attr.type="string"/>\n')
        fh.write('  <key id="d1" for="node" attr.name="in_ranked_cycle" attr.type="boolean"/>\n')
        fh.write('  <key id="d2" for="edge" attr.name="collision_id" attr.type="string"/>\n')
        fh.write(f'  <graph id={quoteattr(str(graph_id))} edgedefault="undirected">\n')
        for v, flagged in zip(nodes.tolist(), member_mask.tolist()):
            fh.write(f'    <node id="n{v}">'
                     f'<data key="d0">{escape(graph.key_of(v))}</data>'
                     f'<data key="d1">{"true" if flagged else "false"}</data></node>\n')
        for e in edges.tolist():
            u, w = graph.edge_endpoints(e)
            cid = edge_collision[e] if edge_collision is not None else str(e)
            fh.write(f'    <edge id="e{e}" source="n{u}" target="n{w}">'
                     f'<data key="d2">{escape(str(cid))}</data></edge>\n')
        fh.write('  </graph>\n</graphml>\n')


def write_dot(path, graph, nodes, member_mask, edge_collision=None, graph_id="g"):
    """Graphviz DOT for one component; one node and one edge statement per line."""
    edges = _component_edges(graph, nodes)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f'graph "{graph_id}" {{\n')
        for v, flagged in zip(nodes.tolist(), member_mask.tolist()):
            label = graph.key_of(v).replace('"', r'\"')
            flag = ", suspicious=true" if flagged else ""
            fh.write(f'  n{v} [label="{label}"{flag}];\n')
        for e in edges.tolist():
            u, w = graph.edge_endpoints(e)
            cid = str(edge_collision[e] if edge_collision is not None else e).replace('"', r'\"')
            fh.write(f'  n{u} -- n{w} [collision="{cid}"];\n')
        fh.write('}\n')


def write_cycles_json(path, cycle_set, graph):
    """Detected-cycle interchange file consumed by the score subcommand."""
    items = []
    for i, key in enumerate(cycle_set.keys()):
        items.append({
            "id": i,
            "length": len(key),
            "drivers": [graph.key_of(v) for v in key],
        })
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"cycles": items}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_cycles_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return [tuple(c["drivers"]) for c in data["cycles"]]
