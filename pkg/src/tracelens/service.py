"""HTTP query service consumed by the web UI.

Endpoints::

    GET  /api/health            node/edge/source/sink/api counts
    GET  /api/sources           [{id,label,file,line,column}, ...]
    GET  /api/sinks
    GET  /api/apis              [{id,signature}, ...]
    GET  /api/find?label=SUB    {"nodes":[...], "apis":[...]}
    POST /api/query             {"type","params",("limits")} -> canonical result

The fact base is loaded once at startup and never mutated, so handlers are
freely concurrent. POST /api/query bodies are byte-identical to the CLI's
``--format json`` output for the same query. Domain errors map to stable
statuses: 400 malformed request, 404 unknown id, 409 precondition failures
(flow_exists, no_flow, ...); 503 when a query exceeds the server timeout.
"""

from __future__ import annotations

import argparse
import asyncio
import os
import sys

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from starlette.concurrency import run_in_threadpool

from . import exporter, factbase, queries
from .engine import EnumLimits
from .errors import FactLoadError, InvalidParams, TraceLensError, http_status_for
from .exporter import canonical_json
from .factbase import FactBase

DEFAULT_BIND = "127.0.0.1:8787"
DEFAULT_TIMEOUT_S = 30.0


def _json_response(obj, status: int = 200) -> Response:
    return Response(
        content=canonical_json(obj),
        status_code=status,
        media_type="application/json",
    )


def _error_response(err: TraceLensError) -> Response:
    return _json_response({"error": err.to_payload()}, status=http_status_for(err))


def _parse_limits(raw) -> EnumLimits | None:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise InvalidParams("limits must be an object")
    allowed = {"maxPaths", "maxDepth"}
    extra = set(raw) - allowed
    if extra:
        raise InvalidParams(f"unknown limit field(s): {', '.join(sorted(extra))}")
    values = {}
    for wire, attr in (("maxPaths", "max_paths"), ("maxDepth", "max_depth")):
        if wire in raw:
            value = raw[wire]
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidParams(f"{wire} must be a positive integer")
            values[attr] = value
    return EnumLimits(**values) if values else None


def create_app(
    fb: FactBase,
    allowed_origin: str | None = None,
    timeout_s: float = DEFAULT_TIMEOUT_S,
) -> FastAPI:
    app = FastAPI(title="tracelens", docs_url=None, redoc_url=None)
    if allowed_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[allowed_origin],
            allow_methods=["GET", "POST"],
            allow_headers=["*"],
        )

    @app.get("/api/health")
    def health() -> Response:
        edges = list(fb.edges.values())
        return _json_response(
            {
                "status": "ok",
                "factCounts": {
                    "nodes": len(fb.nodes),
                    "edges": len(edges),
                    "sources": len(fb.sources),
                    "sinks": len(fb.sinks),
                    "apis": len(fb.apis),
                },
            }
        )

    @app.get("/api/sources")
    def sources() -> Response:
        return _json_response(exporter.nodes_listing(factbase.list_sources(fb)))

    @app.get("/api/sinks")
    def sinks() -> Response:
        return _json_response(exporter.nodes_listing(factbase.list_sinks(fb)))

    @app.get("/api/apis")
    def apis() -> Response:
        return _json_response(exporter.apis_listing(factbase.list_apis(fb)))

    @app.get("/api/find")
    def find(label: str = "") -> Response:
        return _json_response(
            {
                "nodes": exporter.nodes_listing(factbase.find_nodes(fb, label)),
                "apis": exporter.apis_listing(factbase.find_apis(fb, label)),
            }
        )

    def _execute_query(body) -> str:
        if not isinstance(body, dict):
            raise InvalidParams("request body must be a JSON object")
        extra = set(body) - {"type", "params", "limits"}
        if extra:
            raise InvalidParams(f"unknown request field(s): {', '.join(sorted(extra))}")
        qtype = body.get("type")
        if not isinstance(qtype, str):
            raise InvalidParams("request must name a query 'type'")
        params = body.get("params", {})
        if not isinstance(params, dict):
            raise InvalidParams("params must be an object")
        limits = _parse_limits(body.get("limits"))
        result = queries.run_query(fb, qtype, params, limits)
        payload = exporter.to_graph_payload(fb, result)
        return exporter.to_json(payload)

    @app.post("/api/query")
    async def query(request: Request) -> Response:
        try:
            body = await request.json()
        except Exception:
            return _error_response(InvalidParams("request body is not valid JSON"))
        try:
            text = await asyncio.wait_for(
                run_in_threadpool(_execute_query, body), timeout=timeout_s
            )
        except TraceLensError as err:
            return _error_response(err)
        except ValueError as err:
            return _error_response(InvalidParams(str(err)))
        except asyncio.TimeoutError:
            return _json_response(
                {
                    "error": {
                        "code": "timeout",
                        "message": (
                            f"query exceeded the {timeout_s:g}s server budget; "
                            "retry with tighter limits (maxPaths/maxDepth) — "
                            "truncated answers are flagged, never silent"
                        ),
                    }
                },
                status=503,
            )
        return Response(content=text, media_type="application/json")

    return app


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(
        prog="tracelens-serve", description="Serve taint-analysis queries over HTTP."
    )
    parser.add_argument(
        "--facts",
        default=os.environ.get("TRACELENS_FACTS"),
        help="fact directory (env TRACELENS_FACTS)",
    )
    parser.add_argument(
        "--bind",
        default=os.environ.get("TRACELENS_BIND", DEFAULT_BIND),
        help="host:port to listen on (env TRACELENS_BIND)",
    )
    parser.add_argument(
        "--allow-origin",
        default=os.environ.get("TRACELENS_ALLOW_ORIGIN"),
        help="CORS origin allowed to call the API (env TRACELENS_ALLOW_ORIGIN)",
    )
    parser.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT_S)
    args = parser.parse_args(argv)

    if not args.facts:
        parser.error("--facts is required (or set TRACELENS_FACTS)")
    host, _, port_text = args.bind.rpartition(":")
    if not host or not port_text.isdigit():
        parser.error(f"--bind must be host:port, got {args.bind!r}")

    try:
        fb = factbase.load_facts(args.facts)
    except FactLoadError as err:
        sys.stderr.write(canonical_json({"error": err.to_payload()}))
        sys.exit(2)

    app = create_app(fb, allowed_origin=args.allow_origin, timeout_s=args.timeout)

    import uvicorn

    uvicorn.run(app, host=host, port=int(port_text), log_level="warning")


if __name__ == "__main__":
    main()
