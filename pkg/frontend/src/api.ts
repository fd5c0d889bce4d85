// HTTP client for the query service. The UI never computes analysis results
// itself: everything it shows comes from these calls, and query responses
// keep their raw body text so answers stay byte-traceable in the session log.

import type {
  ApiListing,
  ErrorBody,
  HealthBody,
  NodeListing,
  QueryRequest,
  QueryResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function parseErrorBody(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = (await response.json()) as ErrorBody;
    if (body?.error?.code) {
      code = body.error.code;
      message = body.error.message;
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.url(path));
    if (!response.ok) {
      throw await parseErrorBody(response);
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthBody> {
    return this.getJson("/api/health");
  }

  sources(): Promise<NodeListing[]> {
    return this.getJson("/api/sources");
  }

  sinks(): Promise<NodeListing[]> {
    return this.getJson("/api/sinks");
  }

  apis(): Promise<ApiListing[]> {
    return this.getJson("/api/apis");
  }

  find(label: string): Promise<{ nodes: NodeListing[]; apis: ApiListing[] }> {
    return this.getJson(`/api/find?label=${encodeURIComponent(label)}`);
  }

  async query(request: QueryRequest): Promise<{ doc: QueryResponse; raw: string }> {
    const response = await fetch(this.url("/api/query"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!response.ok) {
      throw await parseErrorBody(response);
    }
    const raw = await response.text();
    return { doc: JSON.parse(raw) as QueryResponse, raw };
  }
}
