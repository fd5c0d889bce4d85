// Session state: chosen template, chosen ids, current payload, layout and
// collapse state, and a log tying every shown answer to the exact bytes the
// service returned. One query in flight at a time: a newer submission
// cancels-and-replaces an older one, so the final state is deterministic.

import { ApiClient, ApiError } from "./api.js";
import type { LayoutKind } from "./layout.js";
import { TEMPLATES, TemplateSpec, templateById, type FieldKind } from "./templates.js";
import type { QueryRequest, QueryResponse, QueryType } from "./types.js";

export interface Banner {
  kind: "error" | "info" | "warning";
  text: string;
  hint?: string;
}

export interface LogEntry {
  request: string;
  response: string;
}

// Actionable hints per service error code; precondition errors steer the
// analyst to the template that does apply.
const ERROR_HINTS: Record<string, string> = {
  flow_exists: "A flow already exists between these endpoints — ask WhyFlow instead.",
  no_flow: "There is no flow between these endpoints — ask WhyNotFlow to see what blocks it.",
  not_reachable: "Pick a sink that is actually reachable from this source (try WhyFlow first).",
  not_a_source: "That node is not marked as a source — pick one from the source dropdown.",
  not_a_sink: "That node is not marked as a sink — pick one from the sink dropdown.",
  unknown_id: "That id does not exist in the loaded fact base.",
  unknown_api: "That API id does not exist in the loaded catalog.",
  invalid_params: "The query is missing a required selection.",
  timeout: "The query exceeded the server budget — lower max paths/depth and retry.",
};

export function errorBanner(err: unknown): Banner {
  if (err instanceof ApiError) {
    return { kind: "error", text: err.message, hint: ERROR_HINTS[err.code] };
  }
  const message = err instanceof Error ? err.message : String(err);
  return { kind: "error", text: `service unreachable: ${message}`, hint: "Check the service URL, then retry." };
}

export class UiSession {
  template: TemplateSpec;
  readonly selection = new Map<FieldKind, number>();
  layout: LayoutKind = "breadth-first";
  payload: QueryResponse | null = null;
  collapsed = new Set<string>();
  banner: Banner | null = null;
  readonly log: LogEntry[] = [];

  private inflight = 0;

  constructor(private readonly client: ApiClient) {
    this.template = TEMPLATES[0]!;
  }

  selectTemplate(id: QueryType): void {
    const next = templateById(id);
    // Keep selections whose field also exists on the new template.
    for (const field of [...this.selection.keys()]) {
      if (!next.fields.includes(field)) {
        this.selection.delete(field);
      }
    }
    this.template = next;
    this.banner = null;
  }

  setParam(field: FieldKind, id: number | null): void {
    if (!this.template.fields.includes(field)) {
      return;
    }
    if (id === null) {
      this.selection.delete(field);
    } else {
      this.selection.set(field, id);
    }
  }

  /** Submission stays disabled until every field of the template is chosen. */
  get canSubmit(): boolean {
    return this.template.fields.every((f) => this.selection.has(f));
  }

  buildRequest(): QueryRequest {
    const params: Record<string, number> = {};
    for (const field of this.template.fields) {
      params[field] = this.selection.get(field)!;
    }
    return { type: this.template.id, params };
  }

  async submit(): Promise<void> {
    if (!this.canSubmit) {
      return;
    }
    const token = ++this.inflight;
    const request = this.buildRequest();
    try {
      const { doc, raw } = await this.client.query(request);
      if (token !== this.inflight) {
        return; // replaced by a newer submission
      }
      this.payload = doc;
      this.collapsed = new Set();
      this.log.push({ request: JSON.stringify(request), response: raw });
      this.banner = this.describeAnswer(doc);
    } catch (err) {
      if (token !== this.inflight) {
        return;
      }
      this.banner = errorBanner(err);
    }
  }

  private describeAnswer(doc: QueryResponse): Banner | null {
    const paths = (doc.answer["paths"] ?? doc.answer["plausiblePaths"]) as
      | unknown[]
      | undefined;
    if (paths !== undefined && paths.length === 0) {
      return { kind: "info", text: "no paths — only the query endpoints are shown" };
    }
    if (doc.truncated) {
      return {
        kind: "warning",
        text: "results truncated by enumeration limits; counts are lower bounds",
      };
    }
    return null;
  }

  /** Pure view change: never re-queries, never touches the payload or log. */
  toggleLayout(layout: LayoutKind): void {
    this.layout = layout;
  }

  collapseChain(chainId: string): void {
    this.collapsed.add(chainId);
  }

  expandChain(chainId: string): void {
    this.collapsed.delete(chainId);
  }

  toggleChain(chainId: string): void {
    if (this.collapsed.has(chainId)) {
      this.collapsed.delete(chainId);
    } else {
      this.collapsed.add(chainId);
    }
  }
}
