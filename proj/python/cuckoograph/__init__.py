"""Dynamic directed graph store built on chained cuckoo hash tables."""

from ._core import (
    CapacityExhausted,
    DeleteOutcome,
    DeleteResult,
    Graph,
    GraphParams,
    GraphStats,
    InsertOutcome,
    InsertResult,
    LevelCounters,
    ParseError,
    WeightedGraph,
    generate,
    load_edges,
    run_benchmark,
)

__all__ = [
    "CapacityExhausted",
    "DeleteOutcome",
    "DeleteResult",
    "Graph",
    "GraphParams",
    "GraphStats",
    "InsertOutcome",
    "InsertResult",
    "LevelCounters",
    "ParseError",
    "WeightedGraph",
    "generate",
    "load_edges",
    "run_benchmark",
]
