"""Render-ready graph payloads and the canonical wire formats.

The payload carries symbolic node roles (source / sink / api / intermediate)
and edge kinds (actual / plausible); the UI owns the actual palette. JSON is
the single wire schema shared by ``tracelens query --format json`` and the
HTTP service, canonicalized (sorted keys, compact separators, UTF-8, one
trailing newline) so identical results serialize byte-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .engine import PathSet
from .factbase import FactBase, PLAUSIBLE
from .queries import (
    AffectedSinksAnswer,
    ApiCountAnswer,
    BranchPointsAnswer,
    DivergenceAnswer,
    ImpactAnswer,
    PathCountAnswer,
    QueryInfo,
    QueryResult,
    WhyFlowAnswer,
    WhyNotAnswer,
)

ROLE_SOURCE = "source"
ROLE_SINK = "sink"
ROLE_API = "api"
ROLE_INTERMEDIATE = "intermediate"

# DOT fill colors per role; the web UI keeps its own single palette table.
DOT_COLORS = {
    ROLE_SOURCE: "green",
    ROLE_SINK: "red",
    ROLE_API: "orange",
    ROLE_INTERMEDIATE: "blue",
}


@dataclass(frozen=True)
class GraphPayload:
    query: dict
    truncated: bool
    answer: dict
    nodes: tuple[dict, ...]
    edges: tuple[dict, ...]


def _paths_json(paths: PathSet) -> list[dict]:
    return [
        {"nodes": list(p.nodes), "edges": list(p.edges)} for p in paths.paths
    ]


def _api_list_json(pairs) -> list[dict]:
    return [{"id": a, "signature": sig} for a, sig in pairs]


def _query_json(info: QueryInfo) -> dict:
    out: dict = {"type": info.type, "params": dict(info.params)}
    if info.limits is not None:
        out["limits"] = {
            "maxPaths": info.limits.max_paths,
            "maxDepth": info.limits.max_depth,
        }
    return out


def node_role(fb: FactBase, node_id: int) -> tuple[str, bool]:
    """Role plus dual-role flag. Source wins over sink; a node that names an
    API call (destination of a marked edge) is api unless it is a source or
    sink itself."""
    is_source = node_id in fb.sources
    is_sink = node_id in fb.sinks
    if is_source:
        return ROLE_SOURCE, is_sink
    if is_sink:
        return ROLE_SINK, False
    if node_id in fb.api_nodes:
        return ROLE_API, False
    return ROLE_INTERMEDIATE, False


def to_graph_payload(fb: FactBase, result: QueryResult) -> GraphPayload:
    """Graph for exactly the nodes/edges the answer mentions plus the query
    endpoints; GlobalImpact attaches per-API scores for node sizing."""
    node_ids: set[int] = set()
    edge_ids: set[int] = set()
    truncated = False
    scores_by_api: dict[int, int] = {}

    if isinstance(result, WhyFlowAnswer):
        answer = {
            "paths": _paths_json(result.paths),
            "apisOnPaths": _api_list_json(result.apis_on_paths),
        }
        truncated = result.paths.truncated
        for p in result.paths.paths:
            node_ids.update(p.nodes)
            edge_ids.update(p.edges)
    elif isinstance(result, WhyNotAnswer):
        answer = {
            "plausiblePaths": _paths_json(result.plausible_paths),
            "blockingApis": _api_list_json(result.blocking_apis),
        }
        truncated = result.plausible_paths.truncated
        for p in result.plausible_paths.paths:
            node_ids.update(p.nodes)
            edge_ids.update(p.edges)
    elif isinstance(result, AffectedSinksAnswer):
        answer = {
            "killed": list(result.killed),
            "surviving": list(result.surviving),
            "apiUnused": result.api_unused,
        }
        node_ids.update(result.killed)
        node_ids.update(result.surviving)
    elif isinstance(result, DivergenceAnswer):
        answer = {"points": list(result.points), "mode": result.mode}
        node_ids.update(result.points)
    elif isinstance(result, ImpactAnswer):
        answer = {
            "ranking": [
                {"id": a, "signature": sig, "score": score}
                for a, sig, score in result.ranking
            ]
        }
        truncated = result.truncated
        for p in result.paths.paths:
            node_ids.update(p.nodes)
            edge_ids.update(p.edges)
        scores_by_api = {a: score for a, _, score in result.ranking}
    elif isinstance(result, BranchPointsAnswer):
        answer = {"points": list(result.points)}
        node_ids.update(result.points)
    elif isinstance(result, PathCountAnswer):
        answer = {"count": result.count}
        truncated = result.truncated
    elif isinstance(result, ApiCountAnswer):
        answer = {"count": result.count}
    else:
        raise TypeError(f"unsupported result type {type(result).__name__}")

    # Query endpoints are always shown, even on empty answers. The "api"
    # parameter is an API id, not a node id.
    node_ids.update(
        v for k, v in result.query.params.items() if k != "api"
    )

    edges = []
    score_by_node: dict[int, int] = {}
    for edge_id in sorted(edge_ids):
        e = fb.edges[edge_id]
        entry = {
            "id": e.id,
            "src": e.src,
            "dst": e.dst,
            "kind": e.kind,
            "onAnswerPath": True,
        }
        api_id = fb.lib_flows.get(edge_id)
        if api_id is not None:
            entry["api"] = fb.apis[api_id].signature
            if api_id in scores_by_api:
                prev = score_by_node.get(e.dst, -1)
                score_by_node[e.dst] = max(prev, scores_by_api[api_id])
        edges.append(entry)

    nodes = []
    for node_id in sorted(node_ids):
        rec = fb.nodes[node_id]
        role, dual = node_role(fb, node_id)
        entry = {
            "id": rec.id,
            "label": rec.label,
            "file": rec.file,
            "line": rec.line,
            "column": rec.column,
            "role": role,
        }
        if dual:
            entry["dualRole"] = True
        if role == ROLE_API and node_id in score_by_node:
            entry["score"] = score_by_node[node_id]
        nodes.append(entry)

    return GraphPayload(
        query=_query_json(result.query),
        truncated=truncated,
        answer=answer,
        nodes=tuple(nodes),
        edges=tuple(edges),
    )


def canonical_json(obj) -> str:
    """Canonical wire form: sorted keys, compact separators, UTF-8, newline."""
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n"


def to_json(payload: GraphPayload) -> str:
    return canonical_json(
        {
            "query": payload.query,
            "truncated": payload.truncated,
            "answer": payload.answer,
            "graph": {"nodes": list(payload.nodes), "edges": list(payload.edges)},
        }
    )


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(payload: GraphPayload) -> str:
    """Graphviz rendering: fillcolor by role, dashed plausible edges, sorted
    by id so output is byte-deterministic."""
    lines = ["digraph tracelens {", "  rankdir=LR;", "  node [style=filled];"]
    for n in payload.nodes:
        label = _dot_escape(f"{n['label']}\n{n['file']}:{n['line']}:{n['column']}")
        lines.append(
            f'  n{n["id"]} [label="{label}", fillcolor={DOT_COLORS[n["role"]]}];'
        )
    for e in payload.edges:
        attrs = []
        if e.get("api"):
            attrs.append(f'label="{_dot_escape(e["api"])}"')
        if e["kind"] == PLAUSIBLE:
            attrs.append("style=dashed")
        suffix = f' [{", ".join(attrs)}]' if attrs else ""
        lines.append(f'  n{e["src"]} -> n{e["dst"]}{suffix};')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Catalog listings share one canonical form between `tracelens list` and the
# service's GET endpoints.


def nodes_listing(entries) -> list[dict]:
    return [
        {
            "id": rec.id,
            "label": rec.label,
            "file": rec.file,
            "line": rec.line,
            "column": rec.column,
        }
        for _, rec in entries
    ]


def apis_listing(entries) -> list[dict]:
    return [{"id": api_id, "signature": sig} for api_id, sig in entries]
