"""The interrogative query templates over a loaded FactBase.

Six flow templates (why-flow, why-not-flow, affected-sinks, divergent-sinks,
divergent-sources, global-impact) plus the branch-point extension and the two
quantitative questions (path count, pass-through API count). Every operation
is read-only over the FactBase and deterministic; each answer carries enough
structure for the exporter to build its render subgraph.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import engine
from .engine import EMPTY_OVERLAY, DEFAULT_LIMITS, EnumLimits, Overlay, PathSet
from .errors import (
    FlowExists,
    InvalidParams,
    NoFlow,
    NotASink,
    NotASource,
    NotReachable,
    UnknownApi,
)
from .factbase import ACTUAL, PLAUSIBLE, FactBase


@dataclass(frozen=True)
class QueryInfo:
    """Echo of the request, embedded in every answer and wire payload."""

    type: str
    params: dict[str, int]
    limits: EnumLimits | None = None


@dataclass(frozen=True)
class WhyFlowAnswer:
    query: QueryInfo
    paths: PathSet
    apis_on_paths: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class WhyNotAnswer:
    query: QueryInfo
    plausible_paths: PathSet
    blocking_apis: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class AffectedSinksAnswer:
    query: QueryInfo
    killed: tuple[int, ...]
    surviving: tuple[int, ...]
    api_unused: bool


@dataclass(frozen=True)
class DivergenceAnswer:
    query: QueryInfo
    points: tuple[int, ...]
    mode: str  # "divergent_sinks" or "divergent_sources"


@dataclass(frozen=True)
class ImpactAnswer:
    query: QueryInfo
    ranking: tuple[tuple[int, str, int], ...]  # (api id, signature, score)
    paths: PathSet
    truncated: bool


@dataclass(frozen=True)
class BranchPointsAnswer:
    query: QueryInfo
    points: tuple[int, ...]


@dataclass(frozen=True)
class PathCountAnswer:
    query: QueryInfo
    count: int
    truncated: bool


@dataclass(frozen=True)
class ApiCountAnswer:
    query: QueryInfo
    count: int


QueryResult = (
    WhyFlowAnswer
    | WhyNotAnswer
    | AffectedSinksAnswer
    | DivergenceAnswer
    | ImpactAnswer
    | BranchPointsAnswer
    | PathCountAnswer
    | ApiCountAnswer
)


def _require_source(fb: FactBase, node_id: int) -> None:
    fb.require_node(node_id)
    if node_id not in fb.sources:
        raise NotASource(f"node {node_id} is not marked as a source", node=node_id)


def _require_sink(fb: FactBase, node_id: int) -> None:
    fb.require_node(node_id)
    if node_id not in fb.sinks:
        raise NotASink(f"node {node_id} is not marked as a sink", node=node_id)


def _require_api(fb: FactBase, api_id: int) -> None:
    if api_id not in fb.apis:
        raise UnknownApi(f"unknown api id {api_id}", id=api_id)


def _apis_on_paths(fb: FactBase, paths: PathSet) -> tuple[tuple[int, str], ...]:
    """APIs marking at least one edge of at least one path, deduplicated and
    ordered by first appearance, then signature."""
    first_seen: dict[int, int] = {}
    position = 0
    for path in paths.paths:
        for edge_id in path.edges:
            api_id = fb.lib_flows.get(edge_id)
            if api_id is not None and api_id not in first_seen:
                first_seen[api_id] = position
                position += 1
    ordered = sorted(
        first_seen, key=lambda a: (first_seen[a], fb.apis[a].signature)
    )
    return tuple((a, fb.apis[a].signature) for a in ordered)


def why_flow(
    fb: FactBase, source: int, sink: int, limits: EnumLimits = DEFAULT_LIMITS
) -> WhyFlowAnswer:
    """Why is there a taint flow from this source to this sink?

    Answers with the simple paths under the empty overlay and the library
    APIs marking any edge on them. Raises NoFlow when the sink is not
    reachable at all (why-not is then the right question).
    """
    _require_source(fb, source)
    _require_sink(fb, sink)
    if not engine.reaches(fb, EMPTY_OVERLAY, source, sink):
        raise NoFlow(
            f"no taint flow from {source} to {sink}; ask whynot instead",
            source=source,
            sink=sink,
        )
    paths = engine.enumerate_paths(fb, EMPTY_OVERLAY, source, sink, limits)
    info = QueryInfo("whyflow", {"source": source, "sink": sink}, limits)
    return WhyFlowAnswer(info, paths, _apis_on_paths(fb, paths))


def _marked_plausible_apis(fb: FactBase) -> frozenset[int]:
    return frozenset(
        api_id
        for edge_id, api_id in fb.lib_flows.items()
        if fb.edges[edge_id].kind == PLAUSIBLE
    )


def why_not_flow(
    fb: FactBase, source: int, sink: int, limits: EnumLimits = DEFAULT_LIMITS
) -> WhyNotAnswer:
    """Why is there no taint flow from this source to this sink?

    Speculatively activates every API that marks a plausible edge and
    enumerates the paths that would then exist; the APIs of the plausible
    edges used are the candidate blockers. Empty answer means the absence
    is structural, not caused by a library model. Raises FlowExists when
    the flow is already present.
    """
    _require_source(fb, source)
    _require_sink(fb, sink)
    if engine.reaches(fb, EMPTY_OVERLAY, source, sink):
        raise FlowExists(
            f"taint flow from {source} to {sink} already exists; ask whyflow instead",
            source=source,
            sink=sink,
        )
    overlay = Overlay(activated=_marked_plausible_apis(fb))
    raw = engine.enumerate_paths(fb, overlay, source, sink, limits)
    # Unreachability under the empty overlay guarantees every path here uses
    # a plausible edge; the filter only guards that assumption.
    kept = tuple(
        p for p in raw.paths if any(fb.edges[e].kind == PLAUSIBLE for e in p.edges)
    )
    plausible_paths = PathSet(kept, raw.truncated)

    first_seen: dict[int, int] = {}
    position = 0
    for path in kept:
        for edge_id in path.edges:
            if fb.edges[edge_id].kind != PLAUSIBLE:
                continue
            api_id = fb.lib_flows[edge_id]
            if api_id not in first_seen:
                first_seen[api_id] = position
                position += 1
    ordered = sorted(first_seen, key=lambda a: (first_seen[a], fb.apis[a].signature))
    blocking = tuple((a, fb.apis[a].signature) for a in ordered)

    info = QueryInfo("whynot", {"source": source, "sink": sink}, limits)
    return WhyNotAnswer(info, plausible_paths, blocking)


def affected_sinks(fb: FactBase, source: int, api: int) -> AffectedSinksAnswer:
    """What-if: treat one API as a sanitizer; which reported sinks die?

    killed/surviving partition the sinks reachable from the source under the
    empty overlay. ``api_unused`` warns that no active edge carries the API,
    in which case killed is provably empty.
    """
    _require_source(fb, source)
    _require_api(fb, api)
    base = engine.reachable_set(fb, EMPTY_OVERLAY, source)
    base_sinks = sorted(n for n in base if n in fb.sinks)
    after = engine.reachable_set(fb, Overlay(sanitized=frozenset((api,))), source)
    killed = tuple(n for n in base_sinks if n not in after)
    surviving = tuple(n for n in base_sinks if n in after)
    api_unused = not any(
        fb.edges[edge_id].kind == ACTUAL and marked == api
        for edge_id, marked in fb.lib_flows.items()
    )
    info = QueryInfo("affected-sinks", {"source": source, "api": api})
    return AffectedSinksAnswer(info, killed, surviving, api_unused)


def _topological_order(cond: engine.Condensation) -> list[int]:
    indegree = {ci: 0 for ci in range(len(cond.components))}
    for targets in cond.dag.values():
        for t in targets:
            indegree[t] += 1
    ready = sorted(ci for ci, d in indegree.items() if d == 0)
    order = []
    while ready:
        ci = ready.pop()
        order.append(ci)
        for t in cond.dag.get(ci, ()):
            indegree[t] -= 1
            if indegree[t] == 0:
                ready.append(t)
    return order


def _extremal_members(fb: FactBase, members: set[int], maximal: bool) -> tuple[int, ...]:
    """Members whose SCC is extremal (no member strictly later/earlier) in
    the condensation order of the active graph under the empty overlay."""
    if not members:
        return ()
    cond = engine.condense(fb, EMPTY_OVERLAY)
    member_sccs = {cond.membership[n] for n in members}
    order = _topological_order(cond)

    if maximal:
        # reaches_member[ci]: some strict descendant of ci is a member SCC.
        reaches_member = {ci: False for ci in range(len(cond.components))}
        for ci in reversed(order):
            reaches_member[ci] = any(
                t in member_sccs or reaches_member[t] for t in cond.dag.get(ci, ())
            )
        extremal_sccs = {ci for ci in member_sccs if not reaches_member[ci]}
    else:
        reached_from_member = {ci: False for ci in range(len(cond.components))}
        for ci in order:
            for t in cond.dag.get(ci, ()):
                if ci in member_sccs or reached_from_member[ci]:
                    reached_from_member[t] = True
        extremal_sccs = {ci for ci in member_sccs if not reached_from_member[ci]}

    return tuple(sorted(n for n in members if cond.membership[n] in extremal_sccs))


def divergent_sinks(
    fb: FactBase, source: int, sink_a: int, sink_b: int
) -> DivergenceAnswer:
    """Last common points where one source's flow splits toward two sinks."""
    _require_source(fb, source)
    _require_sink(fb, sink_a)
    _require_sink(fb, sink_b)
    if sink_a == sink_b:
        raise InvalidParams("sinkA and sinkB must be different sinks")
    for sink in (sink_a, sink_b):
        if not engine.reaches(fb, EMPTY_OVERLAY, source, sink):
            raise NotReachable(
                f"sink {sink} is not reachable from source {source}",
                sink=sink,
                source=source,
            )
    common = (
        engine.reachable_set(fb, EMPTY_OVERLAY, source)
        & engine.coreachable_set(fb, EMPTY_OVERLAY, sink_a)
        & engine.coreachable_set(fb, EMPTY_OVERLAY, sink_b)
    )
    points = _extremal_members(fb, common, maximal=True)
    info = QueryInfo(
        "divergent-sinks", {"source": source, "sinkA": sink_a, "sinkB": sink_b}
    )
    return DivergenceAnswer(info, points, "divergent_sinks")


def divergent_sources(
    fb: FactBase, source_a: int, source_b: int, sink: int
) -> DivergenceAnswer:
    """First common points where two sources' flows merge toward one sink."""
    _require_source(fb, source_a)
    _require_source(fb, source_b)
    _require_sink(fb, sink)
    if source_a == source_b:
        raise InvalidParams("sourceA and sourceB must be different sources")
    for source in (source_a, source_b):
        if not engine.reaches(fb, EMPTY_OVERLAY, source, sink):
            raise NotReachable(
                f"sink {sink} is not reachable from source {source}",
                sink=sink,
                source=source,
            )
    common = (
        engine.reachable_set(fb, EMPTY_OVERLAY, source_a)
        & engine.reachable_set(fb, EMPTY_OVERLAY, source_b)
        & engine.coreachable_set(fb, EMPTY_OVERLAY, sink)
    )
    points = _extremal_members(fb, common, maximal=False)
    info = QueryInfo(
        "divergent-sources", {"sourceA": source_a, "sourceB": source_b, "sink": sink}
    )
    return DivergenceAnswer(info, points, "divergent_sources")


def global_impact(
    fb: FactBase, source: int, sink: int, limits: EnumLimits = DEFAULT_LIMITS
) -> ImpactAnswer:
    """Rank APIs by how many distinct source->sink paths they appear on.

    A path using an API on several edges still counts once for that API, so
    every score is bounded by the path count.
    """
    _require_source(fb, source)
    _require_sink(fb, sink)
    if not engine.reaches(fb, EMPTY_OVERLAY, source, sink):
        raise NoFlow(
            f"no taint flow from {source} to {sink}", source=source, sink=sink
        )
    paths = engine.enumerate_paths(fb, EMPTY_OVERLAY, source, sink, limits)
    scores: dict[int, int] = {}
    for path in paths.paths:
        apis_here = {
            fb.lib_flows[e] for e in path.edges if e in fb.lib_flows
        }
        for api_id in apis_here:
            scores[api_id] = scores.get(api_id, 0) + 1
    ranking = tuple(
        (a, fb.apis[a].signature, scores[a])
        for a in sorted(scores, key=lambda a: (-scores[a], fb.apis[a].signature))
    )
    info = QueryInfo("global-impact", {"source": source, "sink": sink}, limits)
    return ImpactAnswer(info, ranking, paths, paths.truncated)


def branch_points(fb: FactBase, overlay: Overlay = EMPTY_OVERLAY) -> BranchPointsAnswer:
    """Nodes whose flow branches: out-degree over active edges > 1, counting
    parallel edges to the same target separately."""
    active = engine.active_edges(fb, overlay)
    out_degree: dict[int, int] = {}
    for edge_id in active:
        src = fb.edges[edge_id].src
        out_degree[src] = out_degree.get(src, 0) + 1
    points = tuple(sorted(n for n, c in out_degree.items() if c > 1))
    return BranchPointsAnswer(QueryInfo("branch-points", {}), points)


def count_paths(
    fb: FactBase, source: int, sink: int, limits: EnumLimits = DEFAULT_LIMITS
) -> PathCountAnswer:
    """How many distinct dataflow paths exist between source and sink."""
    _require_source(fb, source)
    _require_sink(fb, sink)
    paths = engine.enumerate_paths(fb, EMPTY_OVERLAY, source, sink, limits)
    info = QueryInfo("count-paths", {"source": source, "sink": sink}, limits)
    return PathCountAnswer(info, len(paths.paths), paths.truncated)


def count_passthrough_apis(fb: FactBase, source: int, sink: int) -> ApiCountAnswer:
    """Number of marked edges wired between the source and the sink.

    Counts distinct edges carrying a library-flow mark whose src is reachable
    from the source and whose dst reaches the sink, via closures only, so the
    count is exact even on cyclic graphs.
    """
    _require_source(fb, source)
    _require_sink(fb, sink)
    forward = engine.reachable_set(fb, EMPTY_OVERLAY, source)
    backward = engine.coreachable_set(fb, EMPTY_OVERLAY, sink)
    count = sum(
        1
        for edge_id in fb.lib_flows
        if fb.edges[edge_id].src in forward and fb.edges[edge_id].dst in backward
    )
    info = QueryInfo("count-apis", {"source": source, "sink": sink})
    return ApiCountAnswer(info, count)


# ---------------------------------------------------------------------------
# Uniform dispatch used by both the CLI and the HTTP service, so the two
# front doors validate and execute identically.

QUERY_PARAMS: dict[str, tuple[tuple[str, ...], bool]] = {
    # name -> (required params, takes limits)
    "whyflow": (("source", "sink"), True),
    "whynot": (("source", "sink"), True),
    "affected-sinks": (("source", "api"), False),
    "divergent-sinks": (("source", "sinkA", "sinkB"), False),
    "divergent-sources": (("sourceA", "sourceB", "sink"), False),
    "global-impact": (("source", "sink"), True),
    "branch-points": ((), False),
    "count-paths": (("source", "sink"), True),
    "count-apis": (("source", "sink"), False),
}

QUERY_TYPES = tuple(QUERY_PARAMS)


def run_query(
    fb: FactBase,
    query_type: str,
    params: dict[str, int],
    limits: EnumLimits | None = None,
) -> QueryResult:
    """Validate a request against the template's parameter list and run it."""
    if query_type not in QUERY_PARAMS:
        raise InvalidParams(
            f"unknown query type {query_type!r}; expected one of {', '.join(QUERY_TYPES)}",
            type=query_type,
        )
    required, takes_limits = QUERY_PARAMS[query_type]
    missing = [p for p in required if p not in params]
    if missing:
        raise InvalidParams(
            f"query {query_type} requires parameter(s): {', '.join(missing)}",
            missing=missing,
        )
    extra = [p for p in params if p not in required]
    if extra:
        raise InvalidParams(
            f"query {query_type} does not accept parameter(s): {', '.join(sorted(extra))}",
            extra=sorted(extra),
        )
    values = {}
    for name in required:
        value = params[name]
        if isinstance(value, bool) or not isinstance(value, int):
            raise InvalidParams(f"parameter {name} must be an integer id", param=name)
        values[name] = value
    limits = limits if limits is not None else DEFAULT_LIMITS

    if query_type == "whyflow":
        return why_flow(fb, values["source"], values["sink"], limits)
    if query_type == "whynot":
        return why_not_flow(fb, values["source"], values["sink"], limits)
    if query_type == "affected-sinks":
        return affected_sinks(fb, values["source"], values["api"])
    if query_type == "divergent-sinks":
        return divergent_sinks(fb, values["source"], values["sinkA"], values["sinkB"])
    if query_type == "divergent-sources":
        return divergent_sources(fb, values["sourceA"], values["sourceB"], values["sink"])
    if query_type == "global-impact":
        return global_impact(fb, values["source"], values["sink"], limits)
    if query_type == "branch-points":
        return branch_points(fb)
    if query_type == "count-paths":
        return count_paths(fb, values["source"], values["sink"], limits)
    return count_passthrough_apis(fb, values["source"], values["sink"])
