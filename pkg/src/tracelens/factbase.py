"""Loading, validation and indexing of exported taint-analysis facts.

A fact directory is the relational encoding of one upstream analysis run:
seven tab-separated files (``node.facts``, ``edge.facts``,
``plausible_edge.facts``, ``source.facts``, ``sink.facts``,
``library_flow.facts``, ``library_model.facts``), one fact per line, UTF-8,
no header. Loading is all-or-nothing and the resulting :class:`FactBase` is
immutable, so any number of queries can read it concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import DanglingReference, DuplicateId, MissingFile, ParseError, UnknownId

ACTUAL = "actual"
PLAUSIBLE = "plausible"

NODE_FILE = "node.facts"
EDGE_FILE = "edge.facts"
PLAUSIBLE_EDGE_FILE = "plausible_edge.facts"
SOURCE_FILE = "source.facts"
SINK_FILE = "sink.facts"
LIBRARY_FLOW_FILE = "library_flow.facts"
LIBRARY_MODEL_FILE = "library_model.facts"

FACT_FILES = (
    NODE_FILE,
    EDGE_FILE,
    PLAUSIBLE_EDGE_FILE,
    SOURCE_FILE,
    SINK_FILE,
    LIBRARY_FLOW_FILE,
    LIBRARY_MODEL_FILE,
)


@dataclass(frozen=True)
class NodeRecord:
    id: int
    label: str
    file: str
    line: int
    column: int


@dataclass(frozen=True)
class EdgeRecord:
    id: int
    src: int
    dst: int
    kind: str  # ACTUAL or PLAUSIBLE


@dataclass(frozen=True)
class ApiRecord:
    id: int
    signature: str


# Adjacency entry: (neighbor node id, edge id), kept sorted so traversal
# order is deterministic everywhere.
Adjacency = dict[int, tuple[tuple[int, int], ...]]


@dataclass(frozen=True)
class FactBase:
    """Read-only universe of one analysis run, fully indexed.

    ``edges`` holds actual and plausible edges in a single id namespace.
    ``lib_flows`` maps edge id -> api id (at most one mark per edge).
    Adjacency indexes are split by edge kind; entries are sorted by
    (neighbor node id, edge id).
    """

    nodes: dict[int, NodeRecord]
    edges: dict[int, EdgeRecord]
    sources: frozenset[int]
    sinks: frozenset[int]
    lib_flows: dict[int, int]
    apis: dict[int, ApiRecord]
    fwd_actual: Adjacency
    fwd_plausible: Adjacency
    rev_actual: Adjacency
    rev_plausible: Adjacency
    # Nodes that name an API call: destinations of marked edges.
    api_nodes: frozenset[int]

    def node(self, node_id: int) -> NodeRecord:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownId(f"unknown node id {node_id}", id=node_id) from None

    def api(self, api_id: int) -> ApiRecord:
        try:
            return self.apis[api_id]
        except KeyError:
            raise UnknownId(f"unknown api id {api_id}", id=api_id) from None

    def require_node(self, node_id: int) -> None:
        if node_id not in self.nodes:
            raise UnknownId(f"unknown node id {node_id}", id=node_id)


def node_lookup(fb: FactBase, node_id: int) -> NodeRecord:
    return fb.node(node_id)


def api_lookup(fb: FactBase, api_id: int) -> ApiRecord:
    return fb.api(api_id)


def list_sources(fb: FactBase) -> list[tuple[int, NodeRecord]]:
    return [(i, fb.nodes[i]) for i in sorted(fb.sources)]


def list_sinks(fb: FactBase) -> list[tuple[int, NodeRecord]]:
    return [(i, fb.nodes[i]) for i in sorted(fb.sinks)]


def list_apis(fb: FactBase) -> list[tuple[int, str]]:
    return [(i, fb.apis[i].signature) for i in sorted(fb.apis)]


def find_nodes(fb: FactBase, label_substring: str) -> list[tuple[int, NodeRecord]]:
    """Nodes whose label contains the substring, case-insensitive, id order."""
    needle = label_substring.lower()
    return [
        (i, rec)
        for i, rec in sorted(fb.nodes.items())
        if needle in rec.label.lower()
    ]


def find_apis(fb: FactBase, substring: str) -> list[tuple[int, str]]:
    needle = substring.lower()
    return [
        (i, rec.signature)
        for i, rec in sorted(fb.apis.items())
        if needle in rec.signature.lower()
    ]


# ---------------------------------------------------------------------------
# Parsing


def _read_rows(directory: Path, name: str, width: int) -> list[tuple[int, list[str]]]:
    path = directory / name
    if not path.is_file():
        raise MissingFile(f"missing fact file {name} in {directory}", file=name)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(name, 0, f"not valid UTF-8: {exc}") from None
    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if line == "":
            raise ParseError(name, line_no, "blank line")
        fields = line.split("\t")
        if len(fields) != width:
            raise ParseError(
                name, line_no, f"expected {width} tab-separated fields, got {len(fields)}"
            )
        rows.append((line_no, fields))
    return rows


def _parse_int(name: str, line_no: int, text: str, what: str, minimum: int = 0) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError(name, line_no, f"{what} is not an integer: {text!r}") from None
    if value < minimum:
        raise ParseError(name, line_no, f"{what} must be >= {minimum}, got {value}")
    return value


def load_facts(directory: str | Path) -> FactBase:
    """Load and validate a fact directory; raises on the first defect found.

    Errors: :class:`MissingFile`, :class:`ParseError` (with file and line),
    :class:`DuplicateId` (node, edge or api id seen twice, or an edge marked
    twice), :class:`DanglingReference` (edge endpoint, source/sink mark, or
    library-flow mark pointing at nothing).
    """
    directory = Path(directory)

    nodes: dict[int, NodeRecord] = {}
    for line_no, f in _read_rows(directory, NODE_FILE, 5):
        node_id = _parse_int(NODE_FILE, line_no, f[0], "node id")
        if not f[1]:
            raise ParseError(NODE_FILE, line_no, "label must be non-empty")
        line = _parse_int(NODE_FILE, line_no, f[3], "line", minimum=1)
        column = _parse_int(NODE_FILE, line_no, f[4], "column", minimum=1)
        if node_id in nodes:
            raise DuplicateId(f"node id {node_id} defined twice", kind="node", id=node_id)
        nodes[node_id] = NodeRecord(node_id, f[1], f[2], line, column)

    edges: dict[int, EdgeRecord] = {}
    for file_name, kind in ((EDGE_FILE, ACTUAL), (PLAUSIBLE_EDGE_FILE, PLAUSIBLE)):
        for line_no, f in _read_rows(directory, file_name, 3):
            edge_id = _parse_int(file_name, line_no, f[0], "edge id")
            src = _parse_int(file_name, line_no, f[1], "src")
            dst = _parse_int(file_name, line_no, f[2], "dst")
            if edge_id in edges:
                raise DuplicateId(
                    f"edge id {edge_id} defined twice (edge and plausible_edge share "
                    "one id namespace)",
                    kind="edge",
                    id=edge_id,
                )
            for endpoint, which in ((src, "src"), (dst, "dst")):
                if endpoint not in nodes:
                    raise DanglingReference(
                        f"edge {edge_id} references unknown node {endpoint} ({which})",
                        edge=edge_id,
                        node=endpoint,
                    )
            edges[edge_id] = EdgeRecord(edge_id, src, dst, kind)

    def _node_set(file_name: str) -> frozenset[int]:
        marks = set()
        for line_no, f in _read_rows(directory, file_name, 1):
            node_id = _parse_int(file_name, line_no, f[0], "node id")
            if node_id not in nodes:
                raise DanglingReference(
                    f"{file_name} references unknown node {node_id}", node=node_id
                )
            marks.add(node_id)
        return frozenset(marks)

    sources = _node_set(SOURCE_FILE)
    sinks = _node_set(SINK_FILE)

    apis: dict[int, ApiRecord] = {}
    signatures: dict[str, int] = {}
    for line_no, f in _read_rows(directory, LIBRARY_MODEL_FILE, 2):
        api_id = _parse_int(LIBRARY_MODEL_FILE, line_no, f[0], "api id")
        if api_id in apis:
            raise DuplicateId(f"api id {api_id} defined twice", kind="api", id=api_id)
        if f[1] in signatures:
            raise DuplicateId(
                f"api signature {f[1]!r} defined twice (ids {signatures[f[1]]} and {api_id})",
                kind="api_signature",
            )
        apis[api_id] = ApiRecord(api_id, f[1])
        signatures[f[1]] = api_id

    lib_flows: dict[int, int] = {}
    for line_no, f in _read_rows(directory, LIBRARY_FLOW_FILE, 2):
        edge_id = _parse_int(LIBRARY_FLOW_FILE, line_no, f[0], "edge id")
        api_id = _parse_int(LIBRARY_FLOW_FILE, line_no, f[1], "api id")
        if edge_id not in edges:
            raise DanglingReference(
                f"library_flow references unknown edge {edge_id}", edge=edge_id
            )
        if api_id not in apis:
            raise DanglingReference(
                f"library_flow on edge {edge_id} references unknown api {api_id}",
                edge=edge_id,
                api=api_id,
            )
        if edge_id in lib_flows:
            raise DuplicateId(
                f"edge {edge_id} marked twice in library_flow", kind="mark", id=edge_id
            )
        lib_flows[edge_id] = api_id

    return _index(nodes, edges, sources, sinks, lib_flows, apis)


def _index(
    nodes: dict[int, NodeRecord],
    edges: dict[int, EdgeRecord],
    sources: frozenset[int],
    sinks: frozenset[int],
    lib_flows: dict[int, int],
    apis: dict[int, ApiRecord],
) -> FactBase:
    nodes = {i: nodes[i] for i in sorted(nodes)}
    edges = {i: edges[i] for i in sorted(edges)}
    lib_flows = {i: lib_flows[i] for i in sorted(lib_flows)}
    apis = {i: apis[i] for i in sorted(apis)}

    fwd: dict[str, dict[int, list[tuple[int, int]]]] = {ACTUAL: {}, PLAUSIBLE: {}}
    rev: dict[str, dict[int, list[tuple[int, int]]]] = {ACTUAL: {}, PLAUSIBLE: {}}
    for e in edges.values():
        fwd[e.kind].setdefault(e.src, []).append((e.dst, e.id))
        rev[e.kind].setdefault(e.dst, []).append((e.src, e.id))

    def _freeze(table: dict[int, list[tuple[int, int]]]) -> Adjacency:
        return {n: tuple(sorted(entries)) for n, entries in sorted(table.items())}

    return FactBase(
        nodes=nodes,
        edges=edges,
        sources=sources,
        sinks=sinks,
        lib_flows=lib_flows,
        apis=apis,
        fwd_actual=_freeze(fwd[ACTUAL]),
        fwd_plausible=_freeze(fwd[PLAUSIBLE]),
        rev_actual=_freeze(rev[ACTUAL]),
        rev_plausible=_freeze(rev[PLAUSIBLE]),
        api_nodes=frozenset(edges[e].dst for e in lib_flows),
    )


def build_factbase(
    nodes: list[NodeRecord],
    edges: list[EdgeRecord],
    sources: set[int],
    sinks: set[int],
    lib_flows: dict[int, int],
    apis: list[ApiRecord],
) -> FactBase:
    """Assemble a FactBase from in-memory records (tests, synthetic data).

    Applies the same referential checks as :func:`load_facts`.
    """
    node_map: dict[int, NodeRecord] = {}
    for rec in nodes:
        if rec.id in node_map:
            raise DuplicateId(f"node id {rec.id} defined twice", kind="node", id=rec.id)
        node_map[rec.id] = rec
    edge_map: dict[int, EdgeRecord] = {}
    for e in edges:
        if e.id in edge_map:
            raise DuplicateId(f"edge id {e.id} defined twice", kind="edge", id=e.id)
        if e.src not in node_map or e.dst not in node_map:
            raise DanglingReference(f"edge {e.id} references an unknown node", edge=e.id)
        edge_map[e.id] = e
    api_map: dict[int, ApiRecord] = {}
    for a in apis:
        if a.id in api_map:
            raise DuplicateId(f"api id {a.id} defined twice", kind="api", id=a.id)
        api_map[a.id] = a
    for marked, api_id in lib_flows.items():
        if marked not in edge_map:
            raise DanglingReference(f"library_flow references unknown edge {marked}", edge=marked)
        if api_id not in api_map:
            raise DanglingReference(f"library_flow references unknown api {api_id}", api=api_id)
    for n in set(sources) | set(sinks):
        if n not in node_map:
            raise DanglingReference(f"source/sink mark references unknown node {n}", node=n)
    return _index(
        node_map, edge_map, frozenset(sources), frozenset(sinks), dict(lib_flows), api_map
    )


def write_facts(fb: FactBase, directory: str | Path) -> None:
    """Serialize a FactBase back into the seven-file directory layout.

    Reloading the written directory yields a structurally equal FactBase.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    def _write(name: str, rows: list[list[object]]) -> None:
        text = "".join("\t".join(str(v) for v in row) + "\n" for row in rows)
        (directory / name).write_text(text, encoding="utf-8")

    _write(
        NODE_FILE,
        [[n.id, n.label, n.file, n.line, n.column] for n in fb.nodes.values()],
    )
    _write(
        EDGE_FILE,
        [[e.id, e.src, e.dst] for e in fb.edges.values() if e.kind == ACTUAL],
    )
    _write(
        PLAUSIBLE_EDGE_FILE,
        [[e.id, e.src, e.dst] for e in fb.edges.values() if e.kind == PLAUSIBLE],
    )
    _write(SOURCE_FILE, [[n] for n in sorted(fb.sources)])
    _write(SINK_FILE, [[n] for n in sorted(fb.sinks)])
    _write(LIBRARY_FLOW_FILE, [[e, a] for e, a in fb.lib_flows.items()])
    _write(LIBRARY_MODEL_FILE, [[a.id, a.signature] for a in fb.apis.values()])
