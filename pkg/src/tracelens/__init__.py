"""Interrogative debugging engine for taint-analysis fact bases.

Loads the relational facts exported by an upstream analyzer and answers
why / why-not / what-if questions about taint flows under speculative
third-party library model changes, for a CLI and a web UI.
"""

from .engine import (
    EMPTY_OVERLAY,
    Condensation,
    EnumLimits,
    FlowPath,
    Overlay,
    PathSet,
    active_edges,
    condense,
    coreachable_set,
    enumerate_paths,
    reachable_set,
    reaches,
)
from .factbase import (
    ApiRecord,
    EdgeRecord,
    FactBase,
    NodeRecord,
    api_lookup,
    build_factbase,
    list_apis,
    list_sinks,
    list_sources,
    load_facts,
    node_lookup,
    write_facts,
)
from .queries import (
    affected_sinks,
    branch_points,
    count_passthrough_apis,
    count_paths,
    divergent_sinks,
    divergent_sources,
    global_impact,
    run_query,
    why_flow,
    why_not_flow,
)

__version__ = "0.1.0"

__all__ = [
    "ApiRecord",
    "Condensation",
    "EdgeRecord",
    "EMPTY_OVERLAY",
    "EnumLimits",
    "FactBase",
    "FlowPath",
    "NodeRecord",
    "Overlay",
    "PathSet",
    "active_edges",
    "affected_sinks",
    "api_lookup",
    "branch_points",
    "build_factbase",
    "condense",
    "coreachable_set",
    "count_passthrough_apis",
    "count_paths",
    "divergent_sinks",
    "divergent_sources",
    "enumerate_paths",
    "global_impact",
    "list_apis",
    "list_sinks",
    "list_sources",
    "load_facts",
    "node_lookup",
    "reachable_set",
    "reaches",
    "run_query",
    "why_flow",
    "why_not_flow",
    "write_facts",
]
