from __future__ import annotations

import json

import pytest

from tracelens import cli


def run_cli(capsys, *argv: str):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_list_sources_table(capsys, fixture_dirs):
    code, out, _ = run_cli(capsys, "list", "sources", "--facts", str(fixture_dirs["g1"]))
    assert code == 0
    assert out == "1\tuser.getSSN()\tUser.java:3:9\n"


def test_list_sinks_ascending(capsys, fixture_dirs):
    code, out, _ = run_cli(capsys, "list", "sinks", "--facts", str(fixture_dirs["g1"]))
    assert code == 0
    assert [line.split("\t")[0] for line in out.splitlines()] == ["4", "5"]


def test_list_apis_json(capsys, fixture_dirs):
    code, out, _ = run_cli(
        capsys, "list", "apis", "--facts", str(fixture_dirs["g3"]), "--format", "json"
    )
    assert code == 0
    assert json.loads(out) == [
        {"id": 1, "signature": "extractParts(standardizedSSN)"},
        {"id": 2, "signature": "standardize(SSN)"},
    ]


def test_find_by_label_substring(capsys, fixture_dirs):
    code, out, _ = run_cli(
        capsys, "find", "--label", "ssn", "--facts", str(fixture_dirs["g1"])
    )
    assert code == 0
    ids = [line.split("\t")[1] for line in out.splitlines() if line.startswith("node")]
    assert ids == ["1", "2", "3", "4", "5"]  # case-insensitive match on SSN
    api_rows = [line for line in out.splitlines() if line.startswith("api")]
    assert api_rows == ["api\t1\tencrypt(SSN)"]


def test_whyflow_json(capsys, fixture_dirs):
    code, out, err = run_cli(
        capsys,
        "query", "whyflow",
        "--source", "1", "--sink", "4",
        "--facts", str(fixture_dirs["g1"]),
        "--format", "json",
    )
    assert code == 0 and err == ""
    doc = json.loads(out)
    assert doc["answer"]["paths"] == [{"nodes": [1, 2, 3, 4], "edges": [1, 2, 3]}]
    assert doc["answer"]["apisOnPaths"] == [{"id": 1, "signature": "encrypt(SSN)"}]


def test_whyflow_table(capsys, fixture_dirs):
    code, out, _ = run_cli(
        capsys,
        "query", "whyflow",
        "--source", "1", "--sink", "4",
        "--facts", str(fixture_dirs["g1"]),
    )
    assert code == 0
    assert "1 -> 2 -> 3 -> 4" in out
    assert "encrypt(SSN)" in out


def test_unknown_id_exits_2(capsys, fixture_dirs):
    code, out, err = run_cli(
        capsys,
        "query", "whyflow",
        "--source", "9999", "--sink", "4",
        "--facts", str(fixture_dirs["g1"]),
        "--format", "json",
    )
    assert code == 2
    assert json.loads(err)["error"]["code"] == "unknown_id"


def test_no_flow_exits_1(capsys, fixture_dirs):
    code, _, err = run_cli(
        capsys,
        "query", "whyflow",
        "--source", "1", "--sink", "4",
        "--facts", str(fixture_dirs["g2"]),
        "--format", "json",
    )
    assert code == 1
    assert json.loads(err)["error"]["code"] == "no_flow"


def test_flow_exists_exits_1(capsys, fixture_dirs):
    code, _, err = run_cli(
        capsys,
        "query", "whynot",
        "--source", "1", "--sink", "4",
        "--facts", str(fixture_dirs["g1"]),
    )
    assert code == 1
    assert json.loads(err)["error"]["code"] == "flow_exists"


def test_missing_param_exits_2(capsys, fixture_dirs):
    code, _, err = run_cli(
        capsys, "query", "whyflow", "--source", "1", "--facts", str(fixture_dirs["g1"])
    )
    assert code == 2
    assert json.loads(err)["error"]["code"] == "invalid_params"


def test_load_error_exits_2(capsys, tmp_path):
    code, _, err = run_cli(capsys, "list", "sources", "--facts", str(tmp_path))
    assert code == 2
    assert json.loads(err)["error"]["code"] == "missing_file"


def test_usage_error_exits_2(fixture_dirs):
    with pytest.raises(SystemExit) as exc:
        cli.run(["query", "bogus", "--facts", str(fixture_dirs["g1"])])
    assert exc.value.code == 2


def test_dot_output(capsys, fixture_dirs):
    code, out, _ = run_cli(
        capsys,
        "query", "whynot",
        "--source", "1", "--sink", "4",
        "--facts", str(fixture_dirs["g2"]),
        "--format", "dot",
    )
    assert code == 0
    assert out.count("style=dashed") == 1
    assert out.startswith("digraph")


def test_output_flag_writes_file(tmp_path, capsys, fixture_dirs):
    target = tmp_path / "answer.json"
    code, out, _ = run_cli(
        capsys,
        "query", "count-paths",
        "--source", "1", "--sink", "6",
        "--facts", str(fixture_dirs["g3"]),
        "--format", "json",
        "--output", str(target),
    )
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["answer"]["count"] == 3


def test_limit_flags_reach_the_engine(capsys, fixture_dirs):
    code, out, _ = run_cli(
        capsys,
        "query", "count-paths",
        "--source", "1", "--sink", "6",
        "--max-paths", "2",
        "--facts", str(fixture_dirs["g3"]),
        "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["answer"]["count"] == 2
    assert doc["truncated"] is True


def test_bad_limit_exits_2(capsys, fixture_dirs):
    code, _, err = run_cli(
        capsys,
        "query", "count-paths",
        "--source", "1", "--sink", "6",
        "--max-paths", "0",
        "--facts", str(fixture_dirs["g3"]),
    )
    assert code == 2
    assert json.loads(err)["error"]["code"] == "invalid_params"


def test_branch_points_needs_no_ids(capsys, fixture_dirs):
    code, out, _ = run_cli(
        capsys,
        "query", "branch-points",
        "--facts", str(fixture_dirs["g1"]),
        "--format", "json",
    )
    assert code == 0
    assert json.loads(out)["answer"]["points"] == [2]


def test_divergent_queries_via_cli(capsys, fixture_dirs):
    code, out, _ = run_cli(
        capsys,
        "query", "divergent-sinks",
        "--source", "1", "--sink-a", "4", "--sink-b", "5",
        "--facts", str(fixture_dirs["g1"]),
        "--format", "json",
    )
    assert code == 0
    assert json.loads(out)["answer"]["points"] == [2]

    code, out, _ = run_cli(
        capsys,
        "query", "divergent-sources",
        "--source-a", "1", "--source-b", "2", "--sink", "4",
        "--facts", str(fixture_dirs["g4"]),
        "--format", "json",
    )
    assert code == 0
    assert json.loads(out)["answer"]["points"] == [3]


def test_not_reachable_exits_1(capsys, raw_fact_dir):
    d = raw_fact_dir(
        **{
            "node.facts": "1\ta\tf\t1\t1\n2\tb\tf\t2\t1\n3\tc\tf\t3\t1\n",
            "edge.facts": "1\t1\t2\n",
            "source.facts": "1\n",
            "sink.facts": "2\n3\n",
        }
    )
    code, _, err = run_cli(
        capsys,
        "query", "divergent-sinks",
        "--source", "1", "--sink-a", "2", "--sink-b", "3",
        "--facts", str(d),
    )
    assert code == 1
    assert json.loads(err)["error"]["code"] == "not_reachable"
