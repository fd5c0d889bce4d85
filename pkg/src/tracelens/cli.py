"""Batch command-line front door.

Grammar::

    tracelens list (sources|sinks|apis) --facts DIR [--format table|json]
    tracelens find --label SUBSTR --facts DIR [--format table|json]
    tracelens query QTYPE [--source N] [--sink N] [--sink-a N --sink-b N]
                   [--source-a N --source-b N] [--api N]
                   [--max-paths N] [--max-depth N]
                   --facts DIR --format (table|json|dot) [--output PATH]

Exit codes: 0 success; 1 domain precondition errors (no_flow, flow_exists,
not_reachable, not_a_source, not_a_sink) with error JSON on stderr; 2 usage
and load errors (bad arguments, unknown ids, unreadable fact directory).

``--format json`` output is byte-identical to the HTTP service response body
for the same query; both go through the same exporter.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import exporter, factbase, queries
from .engine import EnumLimits
from .errors import TraceLensError, exit_code_for
from .exporter import canonical_json

# CLI flag name -> wire parameter name.
_PARAM_FLAGS = {
    "source": "source",
    "sink": "sink",
    "sink_a": "sinkA",
    "sink_b": "sinkB",
    "source_a": "sourceA",
    "source_b": "sourceB",
    "api": "api",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracelens",
        description="Ask why / why-not / what-if questions about taint-analysis facts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, formats):
        p.add_argument("--facts", required=True, help="fact directory")
        p.add_argument("--format", choices=formats, default="table")
        p.add_argument("--output", help="write to this file instead of stdout")

    p_list = sub.add_parser("list", help="list catalog entries")
    p_list.add_argument("what", choices=("sources", "sinks", "apis"))
    add_common(p_list, ("table", "json"))

    p_find = sub.add_parser("find", help="find nodes/APIs by label substring")
    p_find.add_argument("--label", required=True)
    add_common(p_find, ("table", "json"))

    p_query = sub.add_parser("query", help="run a query template")
    p_query.add_argument("qtype", choices=queries.QUERY_TYPES)
    for flag in ("--source", "--sink", "--sink-a", "--sink-b", "--source-a", "--source-b", "--api"):
        p_query.add_argument(flag, type=int)
    p_query.add_argument("--max-paths", type=int)
    p_query.add_argument("--max-depth", type=int)
    add_common(p_query, ("table", "json", "dot"))

    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _location(rec: factbase.NodeRecord) -> str:
    return f"{rec.file}:{rec.line}:{rec.column}"


def _render_listing(kind: str, fb: factbase.FactBase, fmt: str) -> str:
    if kind == "apis":
        entries = factbase.list_apis(fb)
        if fmt == "json":
            return canonical_json(exporter.apis_listing(entries))
        return "".join(f"{api_id}\t{sig}\n" for api_id, sig in entries)
    entries = factbase.list_sources(fb) if kind == "sources" else factbase.list_sinks(fb)
    if fmt == "json":
        return canonical_json(exporter.nodes_listing(entries))
    return "".join(
        f"{node_id}\t{rec.label}\t{_location(rec)}\n" for node_id, rec in entries
    )


def _render_find(fb: factbase.FactBase, label: str, fmt: str) -> str:
    nodes = factbase.find_nodes(fb, label)
    apis = factbase.find_apis(fb, label)
    if fmt == "json":
        return canonical_json(
            {
                "nodes": exporter.nodes_listing(nodes),
                "apis": exporter.apis_listing(apis),
            }
        )
    lines = [f"node\t{i}\t{rec.label}\t{_location(rec)}" for i, rec in nodes]
    lines += [f"api\t{i}\t{sig}" for i, sig in apis]
    return "".join(line + "\n" for line in lines)


def _path_str(path_json: dict) -> str:
    return " -> ".join(str(n) for n in path_json["nodes"])


def _render_table(payload: exporter.GraphPayload) -> str:
    answer = payload.answer
    lines = [f"query: {payload.query['type']}"]
    if payload.truncated:
        lines.append("warning: results truncated by enumeration limits")

    if "paths" in answer:
        lines.append(f"paths: {len(answer['paths'])}")
        lines += [f"  {_path_str(p)}" for p in answer["paths"]]
    if "plausiblePaths" in answer:
        lines.append(f"plausible paths: {len(answer['plausiblePaths'])}")
        lines += [f"  {_path_str(p)}" for p in answer["plausiblePaths"]]
    if "apisOnPaths" in answer:
        lines.append("apis on paths:")
        lines += [f"  {a['id']}\t{a['signature']}" for a in answer["apisOnPaths"]]
    if "blockingApis" in answer:
        lines.append("blocking apis:")
        lines += [f"  {a['id']}\t{a['signature']}" for a in answer["blockingApis"]]
    if "killed" in answer:
        if answer.get("apiUnused"):
            lines.append("warning: api marks no active edge (nothing can be killed)")
        lines.append("killed sinks: " + (", ".join(map(str, answer["killed"])) or "none"))
        lines.append(
            "surviving sinks: " + (", ".join(map(str, answer["surviving"])) or "none")
        )
    if "points" in answer:
        label = "divergence points" if "mode" in answer else "branch points"
        lines.append(f"{label}: " + (", ".join(map(str, answer["points"])) or "none"))
    if "ranking" in answer:
        lines.append("impact ranking:")
        lines += [
            f"  {row['score']}\t{row['id']}\t{row['signature']}"
            for row in answer["ranking"]
        ]
    if "count" in answer:
        lines.append(f"count: {answer['count']}")
    return "".join(line + "\n" for line in lines)


def run(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        fb = factbase.load_facts(args.facts)

        if args.command == "list":
            _emit(_render_listing(args.what, fb, args.format), args.output)
            return 0

        if args.command == "find":
            _emit(_render_find(fb, args.label, args.format), args.output)
            return 0

        params = {}
        for flag, wire_name in _PARAM_FLAGS.items():
            value = getattr(args, flag)
            if value is not None:
                params[wire_name] = value
        limits = None
        if args.max_paths is not None or args.max_depth is not None:
            limits = EnumLimits(
                max_paths=args.max_paths if args.max_paths is not None else 1024,
                max_depth=args.max_depth if args.max_depth is not None else 256,
            )
        result = queries.run_query(fb, args.qtype, params, limits)
        payload = exporter.to_graph_payload(fb, result)
        if args.format == "json":
            _emit(exporter.to_json(payload), args.output)
        elif args.format == "dot":
            _emit(exporter.to_dot(payload), args.output)
        else:
            _emit(_render_table(payload), args.output)
        return 0
    except TraceLensError as err:
        sys.stderr.write(canonical_json({"error": err.to_payload()}))
        return exit_code_for(err)
    except ValueError as err:
        # e.g. EnumLimits rejecting non-positive --max-paths
        sys.stderr.write(
            canonical_json({"error": {"code": "invalid_params", "message": str(err)}})
        )
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
