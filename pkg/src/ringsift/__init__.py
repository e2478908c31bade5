"""ringsift: organized-fraud ring detection on collision networks.

Builds the undirected driver multigraph from collision records, prunes it to
its 2-core, enumerates suspicious cycles by spanning-tree differencing,
scores them with a weighted indicator registry, ranks them for expert
review, and contrasts the result against community-detection baselines.
"""

from .cycles import (Cycle, CycleSet, RootMode, brute_force_simple_cycles,
                     canonical_key, enumerate_cycles, filter_by_size,
                     fundamental_cycles)
from .errors import (ConfigError, FormatError, GraphError, RingsiftError,
                     SizeLimitError, StageError)
from .graph import InducedSubgraph, MultiGraph, SpanningTree, Strategy
from .ingest import (CollisionDataset, CollisionNetwork, CollisionRecord,
                     build_collision_network, parse_collisions, prune_network,
                     prune_to_cycle_core)
from .kernels import BACKEND
from .scoring import (CycleAssessment, Direction, Indicator, IndicatorKind,
                      default_registry, flag, measure, rank, score,
                      score_node_set)
from .communities import (Algorithm, Partition, compare, detect_communities,
                          fast_greedy, load_partition_csv, modularity,
                          multilevel)
from .synth import (GroundTruth, RingSpec, SyntheticSpec, evaluate_recall,
                    comparison_benchmark_spec, default_benchmark_spec,
                    generate, recall_details, write_collisions_csv)
from .pipeline import RunConfig, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Algorithm", "CollisionDataset", "CollisionNetwork",
    "CollisionRecord", "ConfigError", "Cycle", "CycleAssessment", "CycleSet",
    "Direction", "FormatError", "GraphError", "GroundTruth", "InducedSubgraph",
    "Indicator", "IndicatorKind", "MultiGraph", "Partition", "RingSpec",
    "RingsiftError", "RootMode", "RunConfig", "SizeLimitError", "SpanningTree",
    "StageError", "Strategy", "SyntheticSpec", "brute_force_simple_cycles",
    "build_collision_network", "canonical_key", "compare",
    "comparison_benchmark_spec", "default_benchmark_spec", "default_registry",
    "detect_communities", "enumerate_cycles", "evaluate_recall", "fast_greedy",
    "filter_by_size", "flag", "fundamental_cycles", "generate",
    "load_partition_csv", "measure", "modularity", "multilevel",
    "parse_collisions", "prune_network", "prune_to_cycle_core", "rank",
    "recall_details", "run_pipeline", "score", "score_node_set",
    "write_collisions_csv",
]
