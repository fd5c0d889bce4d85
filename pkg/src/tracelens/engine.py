"""Reachability, simple-path enumeration and what-if overlay evaluation.

An :class:`Overlay` is a speculative hypothesis about third-party library
models: APIs treated as sanitizers kill the actual edges they mark, APIs
treated as pass-throughs bring the plausible edges they mark to life. The
overlay never mutates the FactBase; every operation here is a pure function
of (FactBase, Overlay, args).

Traversal order is fixed everywhere: successors are visited in ascending
(node id, edge id) order, so path enumeration emits paths in lexicographic
order of their step sequences and all results are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import OverlayConflict, UnknownApi
from .factbase import ACTUAL, FactBase

DEFAULT_MAX_PATHS = 1024
DEFAULT_MAX_DEPTH = 256


@dataclass(frozen=True)
class Overlay:
    """What-if hypothesis set; ``sanitized`` and ``activated`` are disjoint."""

    sanitized: frozenset[int] = frozenset()
    activated: frozenset[int] = frozenset()

    def validate(self, fb: FactBase) -> None:
        clash = self.sanitized & self.activated
        if clash:
            raise OverlayConflict(
                f"apis {sorted(clash)} are both sanitized and activated",
                apis=sorted(clash),
            )
        for api_id in sorted(self.sanitized | self.activated):
            if api_id not in fb.apis:
                raise UnknownApi(f"unknown api id {api_id}", id=api_id)


EMPTY_OVERLAY = Overlay()


@dataclass(frozen=True)
class EnumLimits:
    max_paths: int = DEFAULT_MAX_PATHS
    max_depth: int = DEFAULT_MAX_DEPTH

    def __post_init__(self):
        if self.max_paths < 1 or self.max_depth < 1:
            raise ValueError("max_paths and max_depth must be >= 1")


DEFAULT_LIMITS = EnumLimits()


@dataclass(frozen=True)
class FlowPath:
    """Node-simple path; edges[i] connects nodes[i] -> nodes[i+1]."""

    nodes: tuple[int, ...]
    edges: tuple[int, ...]


@dataclass(frozen=True)
class PathSet:
    paths: tuple[FlowPath, ...]
    truncated: bool  # true iff an enumeration limit was hit


def active_edges(fb: FactBase, overlay: Overlay) -> frozenset[int]:
    """Edge ids live under the overlay.

    Active = actual edges minus those marked with a sanitized API, plus
    plausible edges marked with an activated API. Unmarked plausible edges
    are inert under every overlay.
    """
    overlay.validate(fb)
    out = set()
    for e in fb.edges.values():
        mark = fb.lib_flows.get(e.id)
        if e.kind == ACTUAL:
            if mark is None or mark not in overlay.sanitized:
                out.add(e.id)
        else:
            if mark is not None and mark in overlay.activated:
                out.add(e.id)
    return frozenset(out)


class _ActiveView:
    """Sorted adjacency over the active edges of one (FactBase, Overlay) pair."""

    def __init__(self, fb: FactBase, overlay: Overlay):
        overlay.validate(fb)
        self.fb = fb
        self.overlay = overlay

    def _merged(self, actual_adj, plausible_adj, node: int) -> tuple[tuple[int, int], ...]:
        fb, overlay = self.fb, self.overlay
        entries = []
        for other, edge_id in actual_adj.get(node, ()):
            mark = fb.lib_flows.get(edge_id)
            if mark is None or mark not in overlay.sanitized:
                entries.append((other, edge_id))
        for other, edge_id in plausible_adj.get(node, ()):
            mark = fb.lib_flows.get(edge_id)
            if mark is not None and mark in overlay.activated:
                entries.append((other, edge_id))
        entries.sort()
        return tuple(entries)

    def successors(self, node: int) -> tuple[tuple[int, int], ...]:
        return self._merged(self.fb.fwd_actual, self.fb.fwd_plausible, node)

    def predecessors(self, node: int) -> tuple[tuple[int, int], ...]:
        return self._merged(self.fb.rev_actual, self.fb.rev_plausible, node)


def _closure(view: _ActiveView, seed: int, forward: bool) -> set[int]:
    step = view.successors if forward else view.predecessors
    seen = {seed}
    frontier = [seed]
    while frontier:
        node = frontier.pop()
        for other, _ in step(node):
            if other not in seen:
                seen.add(other)
                frontier.append(other)
    return seen


def reachable_set(fb: FactBase, overlay: Overlay, from_node: int) -> set[int]:
    """Forward closure over active edges, including the seed."""
    fb.require_node(from_node)
    return _closure(_ActiveView(fb, overlay), from_node, forward=True)


def coreachable_set(fb: FactBase, overlay: Overlay, to_node: int) -> set[int]:
    """Backward closure over active edges, including the seed."""
    fb.require_node(to_node)
    return _closure(_ActiveView(fb, overlay), to_node, forward=False)


def reaches(fb: FactBase, overlay: Overlay, a: int, b: int) -> bool:
    """True iff b is reachable from a over active edges; reflexive."""
    fb.require_node(a)
    fb.require_node(b)
    if a == b:
        return True
    view = _ActiveView(fb, overlay)
    seen = {a}
    frontier = [a]
    while frontier:
        node = frontier.pop()
        for other, _ in view.successors(node):
            if other == b:
                return True
            if other not in seen:
                seen.add(other)
                frontier.append(other)
    return False


def enumerate_paths(
    fb: FactBase,
    overlay: Overlay,
    src: int,
    dst: int,
    limits: EnumLimits = DEFAULT_LIMITS,
) -> PathSet:
    """All simple paths src -> dst over active edges, up to the limits.

    Paths come out in lexicographic order of their (node id, edge id) step
    sequences (depth-first, sorted successors). ``truncated`` is set iff a
    limit cut the search short: either max_paths was reached or the depth
    cap pruned an unexplored extension; results may then be incomplete.
    src == dst yields the single zero-length path.
    """
    fb.require_node(src)
    fb.require_node(dst)
    if src == dst:
        return PathSet((FlowPath((src,), ()),), False)

    view = _ActiveView(fb, overlay)
    paths: list[FlowPath] = []
    truncated = False

    path_nodes = [src]
    path_edges: list[int] = []
    on_path = {src}
    # Stack of per-node successor cursors for an iterative DFS.
    stack: list[tuple[tuple[tuple[int, int], ...], int]] = [(view.successors(src), 0)]

    while stack:
        succ, idx = stack[-1]
        if idx >= len(succ):
            stack.pop()
            if stack:
                on_path.discard(path_nodes.pop())
                path_edges.pop()
            continue
        stack[-1] = (succ, idx + 1)
        nxt, edge_id = succ[idx]
        if nxt in on_path:
            continue  # keeps paths node-simple; also skips self-loops
        if nxt == dst:
            paths.append(FlowPath(tuple(path_nodes) + (nxt,), tuple(path_edges) + (edge_id,)))
            if len(paths) >= limits.max_paths:
                truncated = True
                break
            continue
        if len(path_edges) + 1 >= limits.max_depth:
            # One more hop would hit the cap; any continuation through nxt
            # is abandoned unexplored.
            if any(n not in on_path for n, _ in view.successors(nxt)):
                truncated = True
            continue
        path_nodes.append(nxt)
        path_edges.append(edge_id)
        on_path.add(nxt)
        stack.append((view.successors(nxt), 0))

    return PathSet(tuple(paths), truncated)


@dataclass(frozen=True)
class Condensation:
    """SCC condensation of the active-edge graph.

    Components are numbered 0..k-1 ascending by their smallest member node
    id; ``membership`` maps node id -> component index; ``dag`` maps each
    component to the sorted tuple of distinct successor components.
    """

    components: tuple[tuple[int, ...], ...]
    membership: dict[int, int]
    dag: dict[int, tuple[int, ...]] = field(default_factory=dict)


def condense(fb: FactBase, overlay: Overlay) -> Condensation:
    view = _ActiveView(fb, overlay)
    order = sorted(fb.nodes)

    # Tarjan's algorithm, iterative so node count is not bound by the
    # interpreter recursion limit.
    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    tarjan_stack: list[int] = []
    counter = 0
    raw_components: list[list[int]] = []

    for root in order:
        if root in index:
            continue
        work: list[tuple[int, int]] = [(root, 0)]
        while work:
            node, child_idx = work[-1]
            if child_idx == 0:
                index[node] = lowlink[node] = counter
                counter += 1
                tarjan_stack.append(node)
                on_stack.add(node)
            succ = view.successors(node)
            advanced = False
            while child_idx < len(succ):
                child = succ[child_idx][0]
                child_idx += 1
                if child not in index:
                    work[-1] = (node, child_idx)
                    work.append((child, 0))
                    advanced = True
                    break
                if child in on_stack:
                    lowlink[node] = min(lowlink[node], index[child])
            if advanced:
                continue
            work.pop()
            if lowlink[node] == index[node]:
                comp = []
                while True:
                    member = tarjan_stack.pop()
                    on_stack.discard(member)
                    comp.append(member)
                    if member == node:
                        break
                raw_components.append(sorted(comp))
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])

    raw_components.sort(key=lambda comp: comp[0])
    components = tuple(tuple(comp) for comp in raw_components)
    membership = {n: ci for ci, comp in enumerate(components) for n in comp}

    dag_sets: dict[int, set[int]] = {ci: set() for ci in range(len(components))}
    for node in order:
        ci = membership[node]
        for other, _ in view.successors(node):
            cj = membership[other]
            if ci != cj:
                dag_sets[ci].add(cj)
    dag = {ci: tuple(sorted(targets)) for ci, targets in dag_sets.items()}
    return Condensation(components, membership, dag)
