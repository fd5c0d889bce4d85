from __future__ import annotations

import random
from pathlib import Path

import pytest

from tracelens.factbase import (
    ACTUAL,
    PLAUSIBLE,
    ApiRecord,
    EdgeRecord,
    FactBase,
    NodeRecord,
    build_factbase,
    write_facts,
)


def _node(i: int, label: str, file: str = "App.java", line: int = 1, col: int = 1) -> NodeRecord:
    return NodeRecord(i, label, file, line, col)


ENC_API = 1
FMT_API = 1
EXTRACT_API = 1
STD_API = 2


@pytest.fixture(scope="session")
def g1_fb() -> FactBase:
    """SSN pass-through shape: one source, two sinks, one marked hop.

    1=user.getSSN() [source] -> 2 -> 3=encrypt(SSN) -> 4=log(SSN) [sink],
    plus 2 -> 5=send(SSN) [sink]. Edge 2->3 is marked with the encrypt API.
    """
    return build_factbase(
        nodes=[
            _node(1, "user.getSSN()", "User.java", 3, 9),
            _node(2, "ssn", "User.java", 4, 5),
            _node(3, "encrypt(SSN)", "Crypto.java", 17, 12),
            _node(4, "log(SSN)", "Logger.java", 21, 3),
            _node(5, "send(SSN)", "Net.java", 30, 8),
        ],
        edges=[
            EdgeRecord(1, 1, 2, ACTUAL),
            EdgeRecord(2, 2, 3, ACTUAL),
            EdgeRecord(3, 3, 4, ACTUAL),
            EdgeRecord(4, 2, 5, ACTUAL),
        ],
        sources={1},
        sinks={4, 5},
        lib_flows={2: ENC_API},
        apis=[ApiRecord(ENC_API, "encrypt(SSN)")],
    )


@pytest.fixture(scope="session")
def g2_fb() -> FactBase:
    """Missing-flow shape: the middle hop exists only as a plausible edge
    marked with the format API (modeled as a sanitizer upstream)."""
    return build_factbase(
        nodes=[
            _node(1, "user.getSSN()", "User.java", 3, 9),
            _node(2, "ssn", "User.java", 4, 5),
            _node(3, "format(SSN)", "Text.java", 8, 14),
            _node(4, "log(SSN)", "Logger.java", 21, 3),
        ],
        edges=[
            EdgeRecord(1, 1, 2, ACTUAL),
            EdgeRecord(2, 2, 3, PLAUSIBLE),
            EdgeRecord(3, 3, 4, ACTUAL),
        ],
        sources={1},
        sinks={4},
        lib_flows={2: FMT_API},
        apis=[ApiRecord(FMT_API, "format(SSN)")],
    )


@pytest.fixture(scope="session")
def g3_fb() -> FactBase:
    """Impact-ranking shape: three source->sink paths; the extract API lies
    on two of them, the standardize API on one."""
    return build_factbase(
        nodes=[
            _node(1, "user.getSSN()", "User.java", 3, 9),
            _node(2, "part1", "Util.java", 5, 1),
            _node(3, "part2", "Util.java", 6, 1),
            _node(4, "extractParts(standardizedSSN)", "Util.java", 9, 2),
            _node(5, "standardize(SSN)", "Util.java", 12, 2),
            _node(6, "log(SSN)", "Logger.java", 21, 3),
        ],
        edges=[
            EdgeRecord(1, 1, 2, ACTUAL),
            EdgeRecord(2, 1, 3, ACTUAL),
            EdgeRecord(3, 2, 4, ACTUAL),
            EdgeRecord(4, 3, 4, ACTUAL),
            EdgeRecord(5, 4, 6, ACTUAL),
            EdgeRecord(6, 1, 5, ACTUAL),
            EdgeRecord(7, 5, 6, ACTUAL),
        ],
        sources={1},
        sinks={6},
        lib_flows={3: EXTRACT_API, 4: EXTRACT_API, 6: STD_API},
        apis=[
            ApiRecord(EXTRACT_API, "extractParts(standardizedSSN)"),
            ApiRecord(STD_API, "standardize(SSN)"),
        ],
    )


@pytest.fixture(scope="session")
def g4_fb() -> FactBase:
    """Merge shape: two sources join at one node before the sink."""
    return build_factbase(
        nodes=[
            _node(1, "req.getHeader()", "Http.java", 2, 1),
            _node(2, "req.getParam()", "Http.java", 3, 1),
            _node(3, "buf", "Http.java", 9, 1),
            _node(4, "warn(msg)", "Log.java", 40, 5),
        ],
        edges=[
            EdgeRecord(1, 1, 3, ACTUAL),
            EdgeRecord(2, 2, 3, ACTUAL),
            EdgeRecord(3, 3, 4, ACTUAL),
        ],
        sources={1, 2},
        sinks={4},
        lib_flows={},
        apis=[],
    )


@pytest.fixture(scope="session")
def fixture_dirs(tmp_path_factory, g1_fb, g2_fb, g3_fb, g4_fb) -> dict[str, Path]:
    root = tmp_path_factory.mktemp("fixture-facts")
    dirs = {}
    for name, fb in (("g1", g1_fb), ("g2", g2_fb), ("g3", g3_fb), ("g4", g4_fb)):
        target = root / name
        write_facts(fb, target)
        dirs[name] = target
    return dirs


@pytest.fixture()
def raw_fact_dir(tmp_path):
    """Write a fact directory from raw text, for malformed-input tests.
    Every call gets a fresh subdirectory."""
    counter = iter(range(1_000_000))

    def _write(**files: str) -> Path:
        target = tmp_path / f"facts{next(counter)}"
        target.mkdir()
        defaults = {
            "node.facts": "",
            "edge.facts": "",
            "plausible_edge.facts": "",
            "source.facts": "",
            "sink.facts": "",
            "library_flow.facts": "",
            "library_model.facts": "",
        }
        defaults.update(files)
        for name, content in defaults.items():
            (target / name).write_text(content, encoding="utf-8")
        return target

    return _write


# ---------------------------------------------------------------------------
# Random universes for oracle and property suites.


def random_factbase(rng: random.Random) -> FactBase:
    """Small random universe: <=12 nodes, <=24 edges, mixed DAG/cyclic,
    random plausible edges, marks, and source/sink sets (may overlap)."""
    n = rng.randint(2, 12)
    node_ids = list(range(1, n + 1))
    nodes = [_node(i, f"expr{i}", f"F{i % 3}.java", i, 1) for i in node_ids]

    n_apis = rng.randint(0, 5)
    apis = [ApiRecord(i, f"lib.Api{i}.call()") for i in range(1, n_apis + 1)]

    force_dag = rng.random() < 0.5
    m = rng.randint(0, 24)
    edges = []
    lib_flows = {}
    for edge_id in range(1, m + 1):
        if force_dag:
            src = rng.randint(1, n - 1) if n > 1 else 1
            dst = rng.randint(src + 1, n)
        else:
            src = rng.choice(node_ids)
            dst = rng.choice(node_ids)  # self-loops permitted
        plausible = rng.random() < 0.25
        edges.append(EdgeRecord(edge_id, src, dst, PLAUSIBLE if plausible else ACTUAL))
        mark_p = 0.8 if plausible else 0.4
        if apis and rng.random() < mark_p:
            lib_flows[edge_id] = rng.choice(apis).id

    sources = set(rng.sample(node_ids, rng.randint(1, min(3, n))))
    sinks = set(rng.sample(node_ids, rng.randint(1, min(3, n))))
    return build_factbase(
        nodes=nodes,
        edges=edges,
        sources=sources,
        sinks=sinks,
        lib_flows=lib_flows,
        apis=apis,
    )


def corpus(count: int, seed: int = 2024) -> list[FactBase]:
    rng = random.Random(seed)
    return [random_factbase(rng) for _ in range(count)]
