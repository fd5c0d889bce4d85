"""Deterministic synthetic fact bases at real-export scale.

Generates a universe whose headline counts match a production export from a
large Java service (8,101 nodes, 6,901 edges, 26 sources, 265 sinks, 85
marked third-party APIs): a layered flow core with branching, a few cycles,
marked pass-through edges, plausible edges for why-not answers, and a large
sparse remainder, which is how real exports look.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import engine
from .engine import EMPTY_OVERLAY, Overlay
from .factbase import ACTUAL, PLAUSIBLE, ApiRecord, EdgeRecord, FactBase, NodeRecord, build_factbase

TABLE_NODES = 8101
TABLE_EDGES = 6901
TABLE_SOURCES = 26
TABLE_SINKS = 265
TABLE_APIS = 85

_LAYERS = 40
_LAYER_WIDTH = 60


@dataclass(frozen=True)
class BenchEndpoints:
    """Concrete query arguments picked from a generated universe."""

    flow_source: int
    flow_sink: int
    second_sink: int
    merge_source_a: int
    merge_source_b: int
    merge_sink: int
    sanitizer_api: int
    missing_source: int
    missing_sink: int


def generate(seed: int = 7) -> FactBase:
    """Build the scale universe; same seed, same FactBase, byte-for-byte."""
    rng = random.Random(seed)

    n_sources = TABLE_SOURCES
    sink_ids = list(range(TABLE_NODES - TABLE_SINKS + 1, TABLE_NODES + 1))
    nodes = [
        NodeRecord(
            id=i,
            label=f"v{i}.op()",
            file=f"src/Mod{i % 57}.java",
            line=(i % 797) + 1,
            column=(i % 89) + 1,
        )
        for i in range(1, TABLE_NODES + 1)
    ]

    # Layer 0 is the sources; 40 middle layers of 60 nodes follow.
    layers = [list(range(1, n_sources + 1))]
    next_id = n_sources + 1
    for _ in range(_LAYERS):
        layers.append(list(range(next_id, next_id + _LAYER_WIDTH)))
        next_id += _LAYER_WIDTH
    gadget_a, gadget_b = next_id, next_id + 1
    spare_start = next_id + 2
    reserved_sink = sink_ids[-1]  # fed only by the why-not gadget
    feedable_sinks = sink_ids[:-1]

    edges: list[EdgeRecord] = []
    edge_id = 0

    def add(src: int, dst: int, kind: str) -> int:
        nonlocal edge_id
        edge_id += 1
        edges.append(EdgeRecord(edge_id, src, dst, kind))
        return edge_id

    # Backbone: every middle node is fed from the previous layer.
    for depth in range(1, _LAYERS + 1):
        for node in layers[depth]:
            add(rng.choice(layers[depth - 1]), node, ACTUAL)

    # Extra forward branching across 1-3 layers.
    branch_ids = []
    for _ in range(1200):
        i = rng.randrange(0, _LAYERS)
        j = min(_LAYERS, i + rng.randint(1, 3))
        branch_ids.append(add(rng.choice(layers[i]), rng.choice(layers[j]), ACTUAL))

    # Sink feeds: every sink (except the reserved one) gets a late-layer feed.
    feed_ids = []
    for sink in feedable_sinks:
        feed_ids.append(add(rng.choice(layers[rng.randint(35, _LAYERS)]), sink, ACTUAL))
    for _ in range(236):
        feed_ids.append(
            add(rng.choice(layers[rng.randint(20, _LAYERS)]), rng.choice(feedable_sinks), ACTUAL)
        )

    # A few back edges so the graph is not a DAG.
    for _ in range(60):
        j = rng.randrange(5, _LAYERS)
        i = rng.randrange(1, j)
        add(rng.choice(layers[j]), rng.choice(layers[i]), ACTUAL)

    # Plausible edges, all marked, scattered forward and into sinks.
    plausible_ids = []
    for k in range(400):
        i = rng.randrange(0, _LAYERS)
        src = rng.choice(layers[i])
        if k % 5 == 0:
            dst = rng.choice(feedable_sinks)
        else:
            dst = rng.choice(layers[min(_LAYERS, i + rng.randint(1, 4))])
        plausible_ids.append(add(src, dst, PLAUSIBLE))

    # Why-not gadget: the reserved sink is reachable from source 26 only if
    # the plausible hop is activated.
    add(n_sources, gadget_a, ACTUAL)
    gadget_plausible = add(gadget_a, gadget_b, PLAUSIBLE)
    add(gadget_b, reserved_sink, ACTUAL)

    # Spend the remaining budget on inert chains in the sparse remainder.
    remaining = TABLE_EDGES - len(edges)
    assert remaining >= 0, "edge budget overspent"
    chain = spare_start
    for _ in range(remaining):
        add(chain, chain + 1, ACTUAL)
        chain += 1
    assert chain + 1 < sink_ids[0], "chain ran into the sink id range"

    apis = [
        ApiRecord(i, f"lib.ext.Api{i}.call(arg{i % 7})") for i in range(1, TABLE_APIS + 1)
    ]
    lib_flows: dict[int, int] = {}
    rotation = 0

    def mark(eid: int) -> None:
        nonlocal rotation
        lib_flows[eid] = (rotation % TABLE_APIS) + 1
        rotation += 1

    for eid in plausible_ids:
        mark(eid)
    mark(gadget_plausible)
    for eid in branch_ids[::2]:
        mark(eid)
    for eid in feed_ids[::3]:
        mark(eid)

    return build_factbase(
        nodes=nodes,
        edges=edges,
        sources=set(range(1, n_sources + 1)),
        sinks=set(sink_ids),
        lib_flows=lib_flows,
        apis=apis,
    )


def pick_endpoints(fb: FactBase) -> BenchEndpoints:
    """Choose benchmark arguments that actually exercise each template."""
    sinks = sorted(fb.sinks)
    reach: dict[int, set[int]] = {}
    flow = None
    for source in sorted(fb.sources):
        reach[source] = engine.reachable_set(fb, EMPTY_OVERLAY, source)
        reached_sinks = [s for s in sinks if s in reach[source]]
        if flow is None and len(reached_sinks) >= 2:
            flow = (source, reached_sinks[0], reached_sinks[1])
    if flow is None:
        raise RuntimeError("universe has no source reaching two sinks")
    flow_source, flow_sink, second_sink = flow

    merge = None
    for a in sorted(fb.sources):
        for b in sorted(fb.sources):
            if b <= a:
                continue
            common = [s for s in sinks if s in reach[a] and s in reach[b]]
            if common:
                merge = (a, b, common[0])
                break
        if merge:
            break
    if merge is None:
        raise RuntimeError("universe has no sink shared by two sources")

    sanitizer_api = None
    for edge_id, api_id in sorted(fb.lib_flows.items()):
        e = fb.edges[edge_id]
        if e.kind == ACTUAL and e.src in reach[flow_source]:
            sanitizer_api = api_id
            break
    if sanitizer_api is None:
        raise RuntimeError("no marked actual edge reachable from the flow source")

    missing = None
    full = Overlay(activated=frozenset(
        api for eid, api in fb.lib_flows.items() if fb.edges[eid].kind == PLAUSIBLE
    ))
    for source in sorted(fb.sources):
        speculative = engine.reachable_set(fb, full, source)
        for sink in sinks:
            if sink not in reach[source] and sink in speculative:
                missing = (source, sink)
                break
        if missing:
            break
    if missing is None:
        raise RuntimeError("universe has no model-explainable missing flow")

    return BenchEndpoints(
        flow_source=flow_source,
        flow_sink=flow_sink,
        second_sink=second_sink,
        merge_source_a=merge[0],
        merge_source_b=merge[1],
        merge_sink=merge[2],
        sanitizer_api=sanitizer_api,
        missing_source=missing[0],
        missing_sink=missing[1],
    )
