// Wire types for the query service's canonical JSON schema.

export type Role = "source" | "sink" | "api" | "intermediate";
export type EdgeKind = "actual" | "plausible";

export type QueryType =
  | "whyflow"
  | "whynot"
  | "affected-sinks"
  | "divergent-sinks"
  | "divergent-sources"
  | "global-impact"
  | "branch-points"
  | "count-paths"
  | "count-apis";

export interface PayloadNode {
  id: number;
  label: string;
  file: string;
  line: number;
  column: number;
  role: Role;
  score?: number;
  dualRole?: boolean;
}

export interface PayloadEdge {
  id: number;
  src: number;
  dst: number;
  kind: EdgeKind;
  api?: string;
  onAnswerPath: boolean;
}

export interface Graph {
  nodes: PayloadNode[];
  edges: PayloadEdge[];
}

export interface QueryRequest {
  type: QueryType;
  params: Record<string, number>;
  limits?: { maxPaths?: number; maxDepth?: number };
}

export interface QueryResponse {
  query: { type: QueryType; params: Record<string, number>; limits?: { maxPaths: number; maxDepth: number } };
  truncated: boolean;
  answer: Record<string, unknown>;
  graph: Graph;
}

export interface NodeListing {
  id: number;
  label: string;
  file: string;
  line: number;
  column: number;
}

export interface ApiListing {
  id: number;
  signature: string;
}

export interface HealthBody {
  status: string;
  factCounts: { nodes: number; edges: number; sources: number; sinks: number; apis: number };
}

export interface ErrorBody {
  error: { code: string; message: string; details?: Record<string, unknown> };
}

export interface NavigationTarget {
  label: string;
  file: string;
  line: number;
  column: number;
}
