// Query templates and their parameter shapes. The form renders exactly the
// fields listed here; submission stays disabled until all are chosen.

import type { QueryType } from "./types.js";

export type FieldKind =
  | "source"
  | "sink"
  | "sinkA"
  | "sinkB"
  | "sourceA"
  | "sourceB"
  | "api";

export type CatalogKind = "sources" | "sinks" | "apis";

export interface TemplateSpec {
  id: QueryType;
  title: string;
  question: string;
  fields: FieldKind[];
}

export const TEMPLATES: readonly TemplateSpec[] = [
  {
    id: "whyflow",
    title: "WhyFlow",
    question: "Why is there a taint flow from this source to this sink?",
    fields: ["source", "sink"],
  },
  {
    id: "whynot",
    title: "WhyNotFlow",
    question: "Why is there no taint flow from this source to this sink?",
    fields: ["source", "sink"],
  },
  {
    id: "affected-sinks",
    title: "AffectedSinks",
    question: "If this API were modeled as a sanitizer, which sinks are affected?",
    fields: ["source", "api"],
  },
  {
    id: "divergent-sinks",
    title: "DivergentSinks",
    question: "Where does this source's flow split toward two different sinks?",
    fields: ["source", "sinkA", "sinkB"],
  },
  {
    id: "divergent-sources",
    title: "DivergentSources",
    question: "Where do two sources' flows merge on the way to this sink?",
    fields: ["sourceA", "sourceB", "sink"],
  },
  {
    id: "global-impact",
    title: "GlobalImpact",
    question: "Which API has the largest influence on flows from this source to this sink?",
    fields: ["source", "sink"],
  },
  {
    id: "branch-points",
    title: "BranchPoints",
    question: "Which nodes branch into multiple flow targets?",
    fields: [],
  },
  {
    id: "count-paths",
    title: "CountPaths",
    question: "How many distinct dataflow paths exist between source and sink?",
    fields: ["source", "sink"],
  },
  {
    id: "count-apis",
    title: "CountApis",
    question: "How many pass-through API points sit between source and sink?",
    fields: ["source", "sink"],
  },
];

export function templateById(id: QueryType): TemplateSpec {
  const spec = TEMPLATES.find((t) => t.id === id);
  if (!spec) {
    throw new Error(`unknown template: ${id}`);
  }
  return spec;
}

/** Which catalog dropdown feeds a given parameter field. */
export function fieldCatalog(field: FieldKind): CatalogKind {
  switch (field) {
    case "source":
    case "sourceA":
    case "sourceB":
      return "sources";
    case "sink":
    case "sinkA":
    case "sinkB":
      return "sinks";
    case "api":
      return "apis";
  }
}
