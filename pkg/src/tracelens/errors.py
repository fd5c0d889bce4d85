"""Error taxonomy shared by the fact loader, engine, queries, CLI and service.

Every error carries a stable machine-readable ``code``. The CLI and the HTTP
service both map codes through :data:`ERROR_CATALOG`, so the two front doors
can never drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass


class TraceLensError(Exception):
    """Base class; ``code`` identifies the condition on the wire."""

    code = "internal"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_payload(self) -> dict:
        payload = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = {k: self.details[k] for k in sorted(self.details)}
        return payload


# ---------------------------------------------------------------------------
# Load-time errors: the fact directory itself is unusable. The CLI exits 2,
# the service refuses to start.


class FactLoadError(TraceLensError):
    code = "load_error"


class MissingFile(FactLoadError):
    code = "missing_file"


class ParseError(FactLoadError):
    code = "parse_error"

    def __init__(self, file: str, line_no: int, reason: str):
        super().__init__(
            f"{file}:{line_no}: {reason}", file=file, line=line_no, reason=reason
        )


class DanglingReference(FactLoadError):
    code = "dangling_reference"


class DuplicateId(FactLoadError):
    code = "duplicate_id"


# ---------------------------------------------------------------------------
# Usage errors: the request referenced something that does not exist or was
# malformed. CLI exit 2, HTTP 400/404.


class UnknownId(TraceLensError):
    code = "unknown_id"


class UnknownApi(TraceLensError):
    code = "unknown_api"


class OverlayConflict(TraceLensError):
    code = "overlay_conflict"


class InvalidParams(TraceLensError):
    code = "invalid_params"


# ---------------------------------------------------------------------------
# Domain precondition errors: the question is well-formed but does not apply
# to this fact base (e.g. asking why-flow when there is no flow). CLI exit 1,
# HTTP 409.


class QueryPreconditionError(TraceLensError):
    pass


class NotASource(QueryPreconditionError):
    code = "not_a_source"


class NotASink(QueryPreconditionError):
    code = "not_a_sink"


class NoFlow(QueryPreconditionError):
    code = "no_flow"


class FlowExists(QueryPreconditionError):
    code = "flow_exists"


class NotReachable(QueryPreconditionError):
    code = "not_reachable"


@dataclass(frozen=True)
class ErrorDisposition:
    exit_code: int
    http_status: int | None  # None: aborts service startup, never reaches HTTP


# One row per documented error condition. ``http_status`` is None for load
# errors because the service loads facts before binding a socket.
ERROR_CATALOG: dict[str, ErrorDisposition] = {
    MissingFile.code: ErrorDisposition(exit_code=2, http_status=None),
    ParseError.code: ErrorDisposition(exit_code=2, http_status=None),
    DanglingReference.code: ErrorDisposition(exit_code=2, http_status=None),
    DuplicateId.code: ErrorDisposition(exit_code=2, http_status=None),
    UnknownId.code: ErrorDisposition(exit_code=2, http_status=404),
    UnknownApi.code: ErrorDisposition(exit_code=2, http_status=404),
    OverlayConflict.code: ErrorDisposition(exit_code=2, http_status=400),
    InvalidParams.code: ErrorDisposition(exit_code=2, http_status=400),
    NotASource.code: ErrorDisposition(exit_code=1, http_status=409),
    NotASink.code: ErrorDisposition(exit_code=1, http_status=409),
    NoFlow.code: ErrorDisposition(exit_code=1, http_status=409),
    FlowExists.code: ErrorDisposition(exit_code=1, http_status=409),
    NotReachable.code: ErrorDisposition(exit_code=1, http_status=409),
}


def exit_code_for(err: TraceLensError) -> int:
    disp = ERROR_CATALOG.get(err.code)
    return disp.exit_code if disp else 2


def http_status_for(err: TraceLensError) -> int:
    disp = ERROR_CATALOG.get(err.code)
    if disp is None or disp.http_status is None:
        return 400
    return disp.http_status
