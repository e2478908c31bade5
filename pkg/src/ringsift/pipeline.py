"""End-to-end pipeline: ingest -> build -> prune -> enumerate -> filter ->
score -> rank, with optional community baselines and all export formats.

Each stage failure raises StageError tagged with its stage family so the CLI
can map it to a distinct exit code.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import kernels
from .communities import Algorithm, compare, detect_communities, load_partition_csv
from .cycles import Cycle, CycleSet, RootMode, enumerate_cycles, filter_by_size
from .errors import ConfigError, RingsiftError, StageError
from .graph import Strategy
from .ingest import build_collision_network, parse_collisions, prune_network
from .report import (RunReport, fresh_meta, load_cycles_json, suspicious_components,
                     write_comparison_csv, write_cycles_json, write_dot, write_graphml,
                     write_json_report, write_ranked_csv)
from .scoring import (Direction, Indicator, IndicatorKind, assess_cycle_set,
                      default_registry, rank, score_node_set)

ALL_FORMATS = ("csv", "json", "graphml", "dot")


def thread_hint():
    raw = os.environ.get("RINGSIFT_THREADS", "").strip()
    if raw.isdigit() and int(raw) > 0:
        return int(raw)
    return None


@dataclass
class RunConfig:
    input_path: str | None = None
    output_dir: str | None = None
    min_exclusive: int = 3
    max_exclusive: int = 50
    strategy: Strategy = Strategy.BREADTH_FIRST
    root_mode: RootMode = RootMode.ALL_ROOTS
    registry: list = field(default_factory=default_registry)
    baselines: tuple = ()
    external_partition: str | None = None
    formats: tuple = ALL_FORMATS
    seed: int = 42
    threads: int | None = None
    write_cycles: bool = False

    def validate(self):
        if not 0 < self.min_exclusive < self.max_exclusive:
            raise ConfigError(
                f"cycle size bounds must satisfy 0 < min < max, got ({self.min_exclusive}, {self.max_exclusive})")
        if self.input_path is not None and not str(self.input_path):
            raise ConfigError("input path must be non-empty")
        for f in self.formats:
            if f not in ALL_FORMATS:
                raise ConfigError(f"unknown export format {f!r}")
        if not self.registry:
            raise ConfigError("indicator registry is empty")

    def public_dict(self):
        return {
            "min_exclusive": self.min_exclusive,
            "max_exclusive": self.max_exclusive,
            "strategy": self.strategy.value,
            "root_mode": self.root_mode.value,
            "baselines": [Algorithm(b).value for b in self.baselines],
            "indicators": [
                {"id": i.id, "kind": i.kind.value, "direction": i.direction.value,
                 "threshold": i.threshold, "weight": i.weight}
                for i in self.registry
            ],
        }


def parse_indicator_spec(text):
    """One config-file indicator line: ``id,kind,direction,threshold,weight``."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 5:
        raise ConfigError(f"indicator spec needs 5 comma-separated fields, got {text!r}")
    return Indicator(parts[0], IndicatorKind.parse(parts[1]), Direction.parse(parts[2]),
                     float(parts[3]), float(parts[4]))


def parse_config_file(path):
    """Key-value run config: ``key = value`` lines, ``#`` comments,
    ``indicator`` repeatable."""
    values = {}
    indicators = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = stripped.partition("=")
            key = key.strip().lower()
            value = value.strip()
            if key == "indicator":
                indicators.append(parse_indicator_spec(value))
            else:
                values[key] = value
    return values, indicators


def config_from_mapping(values, indicators=(), base=None):
    cfg = base or RunConfig()
    kw = {}
    if "input" in values:
        kw["input_path"] = values["input"]
    if "output_dir" in values:
        kw["output_dir"] = values["output_dir"]
    if "min_exclusive" in values:
        kw["min_exclusive"] = int(values["min_exclusive"])
    if "max_exclusive" in values:
        kw["max_exclusive"] = int(values["max_exclusive"])
    if "strategy" in values:
        kw["strategy"] = Strategy.parse(values["strategy"])
    if "root_mode" in values:
        kw["root_mode"] = RootMode.parse(values["root_mode"])
    if "baselines" in values:
        raw = values["baselines"].strip()
        kw["baselines"] = tuple(Algorithm.parse(b) for b in raw.split(",") if b.strip()) if raw else ()
    if "formats" in values:
        kw["formats"] = tuple(f.strip() for f in values["formats"].split(",") if f.strip())
    if "seed" in values:
        kw["seed"] = int(values["seed"])
    if "threads" in values:
        kw["threads"] = int(values["threads"])
    if "external_partition" in values:
        kw["external_partition"] = values["external_partition"]
    if indicators:
        kw["registry"] = list(indicators)
    try:
        cfg = replace(cfg, **kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def _stage(tag):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, StageError):
                if isinstance(exc, (RingsiftError, OSError, ValueError, KeyError)):
                    raise StageError(tag, str(exc)) from exc
            return False

    return _Ctx()


@dataclass
class PipelineResult:
    report: RunReport
    network: object = None          # pruned CollisionNetwork
    raw_network: object = None
    cycles: object = None           # pre-filter CycleSet
    filtered: object = None
    ranked: list = field(default_factory=list)
    partitions: dict = field(default_factory=dict)


def _apply_thread_hint(cfg):
    threads = cfg.threads or thread_hint()
    if threads and kernels.BACKEND == "numba":
        import numba

        numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))


def ingest_stage(cfg):
    with _stage("ingest"):
        dataset, skips = parse_collisions(cfg.input_path)
        skips.emit()
        raw = build_collision_network(dataset)
        pruned, prune_res = prune_network(raw)
        degs_before = raw.graph.degrees()
        degs_after = pruned.graph.degrees()
        ingestion = {
            "skips": skips.to_dict(),
            "collisions": len(dataset.records),
            "drivers": len(dataset.drivers),
            "nodes": int(raw.graph.node_count),
            "edges": int(raw.graph.edge_count),
            "min_degree": int(degs_before.min()) if len(degs_before) else 0,
            "max_degree": int(degs_before.max()) if len(degs_before) else 0,
            "pruned_nodes": int(pruned.graph.node_count),
            "pruned_edges": int(pruned.graph.edge_count),
            "pruned_min_degree": int(degs_after.min()) if len(degs_after) else 0,
            "pruned_max_degree": int(degs_after.max()) if len(degs_after) else 0,
        }
        return raw, pruned, ingestion


def detect_stage(cfg, pruned):
    with _stage("detect"):
        t0 = time.perf_counter()
        cycles = enumerate_cycles(pruned.graph, cfg.strategy, cfg.root_mode,
                                  retain_limit=cfg.max_exclusive)
        wall = time.perf_counter() - t0
        filtered = filter_by_size(cycles, cfg.min_exclusive, cfg.max_exclusive)
        bands = cycles.band_counts()
        cycles_dict = {
            "strategy": cfg.strategy.value,
            "root_mode": cfg.root_mode.value,
            "bands": bands,
            "distinct_total": cycles.total_count,
            "emissions": cycles.emission_count,
            "filtered_count": filtered.total_count,
            "removed_parallel_pair_cycles": bands["n_eq_2"],
        }
        return cycles, filtered, cycles_dict, wall


def score_stage(cfg, filtered, edge_dates):
    with _stage("score"):
        assessments = assess_cycle_set(cfg.registry, filtered, edge_dates)
        return rank(assessments)


def baseline_stage(cfg, pruned, filtered, edge_dates):
    with _stage("baseline"):
        partitions = {}
        for algo in cfg.baselines:
            algo = Algorithm(algo)
            partitions[algo.value] = detect_communities(pruned.graph, algo)
        if cfg.external_partition:
            partitions["external"] = load_partition_csv(cfg.external_partition, pruned.graph)
        if not partitions:
            return {}, None
        rep = compare(filtered, partitions, cfg.registry, pruned.graph, edge_dates)
        comparison = rep.to_dict()
        comparison["modularity"] = {
            name: (None if p.modularity is None else round(p.modularity, 6))
            for name, p in partitions.items()
        }
        return partitions, comparison


def export_stage(cfg, report, pruned, filtered, ranked):
    with _stage("export"):
        outdir = Path(cfg.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
        written = []
        if "csv" in cfg.formats:
            p = outdir / "ranked.csv"
            write_ranked_csv(p, ranked, pruned.graph)
            written.append(str(p))
            if report.comparison is not None:
                p = outdir / "comparison.csv"
                write_comparison_csv(p, report.comparison)
                written.append(str(p))
        if cfg.write_cycles and filtered is not None:
            p = outdir / "cycles.json"
            write_cycles_json(p, filtered, pruned.graph)
            written.append(str(p))
        if "graphml" in cfg.formats or "dot" in cfg.formats:
            comps = suspicious_components(pruned.graph, ranked)
            for lbl, nodes, member in comps:
                if "graphml" in cfg.formats:
                    p = outdir / f"component_{lbl}.graphml"
                    write_graphml(p, pruned.graph, nodes, member,
                                  pruned.edge_collision, graph_id=f"component_{lbl}")
                    written.append(str(p))
                if "dot" in cfg.formats:
                    p = outdir / f"component_{lbl}.dot"
                    write_dot(p, pruned.graph, nodes, member,
                              pruned.edge_collision, graph_id=f"component_{lbl}")
                    written.append(str(p))
        if "json" in cfg.formats:
            p = outdir / "report.json"
            write_json_report(p, report, pruned.graph)
            written.append(str(p))
        return written


def run_pipeline(cfg):
    """Full pipeline per the run config; returns a PipelineResult."""
    cfg.validate()
    _apply_thread_hint(cfg)
    timings = {}
    t0 = time.perf_counter()
    raw, pruned, ingestion = ingest_stage(cfg)
    timings["ingest"] = time.perf_counter() - t0

    cycles, filtered, cycles_dict, wall = detect_stage(cfg, pruned)
    timings[f"detect_{cfg.strategy.value}"] = wall

    t0 = time.perf_counter()
    ranked = score_stage(cfg, filtered, pruned.edge_dates)
    timings["score"] = time.perf_counter() - t0

    comparison = None
    partitions = {}
    if cfg.baselines or cfg.external_partition:
        t0 = time.perf_counter()
        partitions, comparison = baseline_stage(cfg, pruned, filtered, pruned.edge_dates)
        timings["baseline"] = time.perf_counter() - t0

    report = RunReport(
        config=cfg.public_dict(),
        ingestion=ingestion,
        cycles=cycles_dict,
        comparison=comparison,
        assessments=ranked,
        meta=fresh_meta(kernels.BACKEND, timings),
    )
    if cfg.output_dir:
        t0 = time.perf_counter()
        export_stage(cfg, report, pruned, filtered, ranked)
        timings["export"] = time.perf_counter() - t0
        report.meta = fresh_meta(kernels.BACKEND, timings)
        if "json" in cfg.formats:
            write_json_report(Path(cfg.output_dir) / "report.json", report, pruned.graph)
    return PipelineResult(report=report, network=pruned, raw_network=raw,
                          cycles=cycles, filtered=filtered, ranked=ranked,
                          partitions=partitions)


def score_cycles_file(cfg, cycles_path):
    """Score a detected-cycle interchange file against the input network."""
    cfg.validate()
    raw, pruned, ingestion = ingest_stage(cfg)
    with _stage("score"):
        driver_cycles = load_cycles_json(cycles_path)
        cycles = []
        for drivers in driver_cycles:
            ids = tuple(pruned.graph.id_of(k) for k in drivers)
            for i, u in enumerate(ids):
                v = ids[(i + 1) % len(ids)]
                if all(w != v for w, _ in pruned.graph.neighbors(u)):
                    raise StageError("score", f"cycle {drivers!r} is not a closed walk in the network")
            cycles.append(Cycle(vertices=ids, closing_edge=-1, source="file"))
        cset = CycleSet.from_cycles(pruned.graph, cycles, "file")
        ranked = score_stage(cfg, cset, pruned.edge_dates)
    report = RunReport(
        config=cfg.public_dict(),
        ingestion=ingestion,
        cycles={"from_file": str(cycles_path), "count": cset.total_count},
        assessments=ranked,
        meta=fresh_meta(kernels.BACKEND),
    )
    if cfg.output_dir:
        export_stage(cfg, report, pruned, None, ranked)
    return PipelineResult(report=report, network=pruned, raw_network=raw,
                          filtered=cset, ranked=ranked)
