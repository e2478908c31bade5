"""Command-line interface.

Subcommands: run (full pipeline), gen (synthetic dataset), detect (cycles
only), score (score a cycle file), compare (community baselines), export
(re-export from a saved report).  Exit codes: 0 success, 2 usage/config,
3 ingest, 4 detect, 5 score, 6 baseline, 7 export, 1 unexpected.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .communities import Algorithm
from .cycles import RootMode
from .errors import ConfigError, RingsiftError, StageError
from .graph import Strategy
from .pipeline import (ALL_FORMATS, RunConfig, config_from_mapping, parse_config_file,
                       run_pipeline, score_cycles_file)
from .synth import (RingSpec, SyntheticSpec, comparison_benchmark_spec,
                    default_benchmark_spec, generate, write_collisions_csv)

STAGE_EXIT = {"ingest": 3, "detect": 4, "score": 5, "baseline": 6, "export": 7}


def _add_common(p):
    p.add_argument("--config", help="key-value config file; flags override it")
    p.add_argument("--input", help="collision CSV path")
    p.add_argument("--out", help="output directory")
    p.add_argument("--strategy", help="bfs | dfs")
    p.add_argument("--root-mode", help="all | single")
    p.add_argument("--min-exclusive", type=int, help="keep cycles longer than this (default 3)")
    p.add_argument("--max-exclusive", type=int, help="keep cycles shorter than this (default 50)")
    p.add_argument("--threads", type=int, help="thread-count hint (or RINGSIFT_THREADS)")


def _build_config(args, require_input=True, require_out=True):
    values, indicators = ({}, [])
    if getattr(args, "config", None):
        values, indicators = parse_config_file(args.config)
    cfg = config_from_mapping(values, indicators)
    overrides = {}
    if getattr(args, "input", None):
        overrides["input"] = args.input
    if getattr(args, "out", None):
        overrides["output_dir"] = args.out
    if getattr(args, "strategy", None):
        overrides["strategy"] = args.strategy
    if getattr(args, "root_mode", None):
        overrides["root_mode"] = args.root_mode
    if getattr(args, "min_exclusive", None) is not None:
        overrides["min_exclusive"] = args.min_exclusive
    if getattr(args, "max_exclusive", None) is not None:
        overrides["max_exclusive"] = args.max_exclusive
    if getattr(args, "threads", None) is not None:
        overrides["threads"] = args.threads
    if getattr(args, "baselines", None):
        overrides["baselines"] = args.baselines
    if getattr(args, "external_partition", None):
        overrides["external_partition"] = args.external_partition
    if getattr(args, "formats", None):
        overrides["formats"] = args.formats
    cfg = config_from_mapping(overrides, base=cfg)
    if require_input and not cfg.input_path:
        raise ConfigError("an input CSV is required (--input or config 'input')")
    if require_out and not cfg.output_dir:
        raise ConfigError("an output directory is required (--out or config 'output_dir')")
    return cfg


def _parse_ring(text):
    parts = text.split(":")
    if not 1 <= len(parts) <= 3:
        raise ConfigError(f"ring spec {text!r}; expected SIZE[:CHORDS[:ATTACHMENTS]]")
    size = int(parts[0])
    chords = int(parts[1]) if len(parts) > 1 else 0
    attach = int(parts[2]) if len(parts) > 2 else 0
    return RingSpec(size, chords, attach)


def cmd_gen(args):
    if args.preset == "default":
        spec = default_benchmark_spec(seed=args.seed)
    elif args.preset == "comparison":
        spec = comparison_benchmark_spec(seed=args.seed)
    else:
        parties = ((2, 1.0),)
        if args.parties:
            parts = []
            for piece in args.parties.split(","):
                k, _, w = piece.partition(":")
                parts.append((int(k), float(w)))
            parties = tuple(parts)
        spec = SyntheticSpec(
            driver_count=args.drivers,
            background_collision_count=args.background,
            planted_rings=tuple(_parse_ring(r) for r in (args.ring or [])),
            parties_per_collision=parties,
            seed=args.seed,
            date_range=tuple(args.dates.split(":")) if args.dates else None,
        )
    dataset, truth = generate(spec)
    write_collisions_csv(dataset, args.out_csv)
    if args.truth_out:
        truth.write_json(args.truth_out)
    print(f"wrote {len(dataset.records)} collisions / {len(dataset.drivers)} drivers to {args.out_csv}")
    return 0


def cmd_run(args):
    cfg = _build_config(args)
    result = run_pipeline(cfg)
    r = result.report
    print(f"nodes={r.ingestion['nodes']} pruned={r.ingestion['pruned_nodes']} "
          f"cycles={r.cycles['distinct_total']} filtered={r.cycles['filtered_count']} "
          f"ranked={len(result.ranked)}")
    return 0


def cmd_detect(args):
    cfg = _build_config(args)
    cfg.write_cycles = bool(args.cycles_out)
    cfg = _replace_formats(cfg, ("json",))
    result = run_pipeline(cfg)
    if args.cycles_out:
        from .report import write_cycles_json

        write_cycles_json(args.cycles_out, result.filtered, result.network.graph)
    b = result.report.cycles["bands"]
    print(f"distinct={result.report.cycles['distinct_total']} "
          f"filtered={result.report.cycles['filtered_count']} ge50={b['n_ge50']}")
    return 0


def _replace_formats(cfg, formats):
    from dataclasses import replace

    return replace(cfg, formats=tuple(formats))


def cmd_score(args):
    cfg = _build_config(args)
    cfg = _replace_formats(cfg, ("csv", "json"))
    result = score_cycles_file(cfg, args.cycles)
    print(f"scored {len(result.ranked)} cycles")
    return 0


def cmd_compare(args):
    cfg = _build_config(args)
    if not cfg.baselines and not cfg.external_partition:
        cfg = config_from_mapping({"baselines": "multilevel,fastgreedy"}, base=cfg)
    result = run_pipeline(cfg)
    comp = result.report.comparison
    counts = " ".join(f"{k}={v}" for k, v in sorted(comp["group_counts"].items()))
    print(f"cycles={comp['cycle_count']} {counts}")
    return 0


def cmd_export(args):
    cfg = _build_config(args)
    result = run_pipeline(cfg)
    print(f"exported {', '.join(sorted(cfg.formats))} to {cfg.output_dir}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="ringsift",
                                 description="Collision-network fraud ring detection")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="full pipeline: ingest, detect, score, export")
    _add_common(p)
    p.add_argument("--baselines", help="comma list: multilevel,fastgreedy")
    p.add_argument("--external-partition", help="CSV partition to include in the comparison")
    p.add_argument("--formats", help="comma list of csv,json,graphml,dot")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("gen", help="generate a synthetic collision dataset")
    p.add_argument("--preset", choices=["default", "comparison"], help="canonical benchmark specs")
    p.add_argument("--drivers", type=int, default=1000)
    p.add_argument("--background", type=int, default=1000)
    p.add_argument("--ring", action="append", help="SIZE[:CHORDS[:ATTACHMENTS]], repeatable")
    p.add_argument("--parties", help="party-count weights, e.g. 2:0.9,3:0.1")
    p.add_argument("--dates", help="uniform random dates, START:END (ISO)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-csv", required=True)
    p.add_argument("--truth-out", help="ground-truth JSON path")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("detect", help="cycles only (no scoring exports)")
    _add_common(p)
    p.add_argument("--cycles-out", help="write detected cycles JSON here")
    p.set_defaults(fn=cmd_detect)

    p = sub.add_parser("score", help="score a cycles JSON file against the network")
    _add_common(p)
    p.add_argument("--cycles", required=True, help="cycles JSON from detect --cycles-out")
    p.set_defaults(fn=cmd_score)

    p = sub.add_parser("compare", help="community baselines vs detected cycles")
    _add_common(p)
    p.add_argument("--baselines", help="comma list: multilevel,fastgreedy")
    p.add_argument("--external-partition", help="CSV partition to include")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("export", help="run and write the selected export formats")
    _add_common(p)
    p.add_argument("--formats", help="comma list of csv,json,graphml,dot")
    p.set_defaults(fn=cmd_export)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"ringsift: config error: {exc}", file=sys.stderr)
        return 2
    except StageError as exc:
        print(f"ringsift: {exc}", file=sys.stderr)
        return STAGE_EXIT.get(exc.stage, 1)
    except RingsiftError as exc:
        print(f"ringsift: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
