// SVG rendering of a view model. Colors come exclusively from the palette
// table; plausible edges are dashed; impact scores scale node radius.
// Hovering a node shows its fully qualified label and file:line:column;
// clicking emits a navigation target. Collapsed super-nodes toggle on click.

import type { ViewEdge, ViewNode } from "./collapse.js";
import type { Point } from "./layout.js";
import {
  NODE_RADIUS_BASE,
  PLAUSIBLE_DASH,
  ROLE_COLORS,
  SUPER_NODE_COLOR,
  nodeRadius,
} from "./palette.js";
import type { Graph, NavigationTarget } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface RenderCallbacks {
  onNavigate?: (target: NavigationTarget) => void;
  onToggleChain?: (chainId: string) => void;
}

/** Returns a human-readable defect description for payloads the renderer
 * cannot draw, or null when the graph is well-formed. */
export function validateGraph(graph: unknown): string | null {
  if (typeof graph !== "object" || graph === null) {
    return "payload graph is not an object";
  }
  const g = graph as Graph;
  if (!Array.isArray(g.nodes) || !Array.isArray(g.edges)) {
    return "payload graph must have node and edge arrays";
  }
  const ids = new Set<number>();
  for (const node of g.nodes) {
    if (typeof node?.id !== "number" || typeof node?.label !== "string") {
      return "payload node missing id or label";
    }
    if (!(node.role in ROLE_COLORS)) {
      return `payload node ${node.id} has unknown role ${String(node.role)}`;
    }
    ids.add(node.id);
  }
  for (const edge of g.edges) {
    if (!ids.has(edge?.src) || !ids.has(edge?.dst)) {
      return `payload edge ${edge?.id} references a missing node`;
    }
    if (edge.kind !== "actual" && edge.kind !== "plausible") {
      return `payload edge ${edge.id} has unknown kind ${String(edge.kind)}`;
    }
  }
  return null;
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

function maxScore(nodes: ViewNode[]): number {
  let top = 0;
  for (const n of nodes) {
    if (n.kind === "node" && typeof n.node.score === "number") {
      top = Math.max(top, n.node.score);
    }
  }
  return top;
}

export function renderGraph(
  container: HTMLElement,
  view: { nodes: ViewNode[]; edges: ViewEdge[] },
  positions: Map<string, Point>,
  callbacks: RenderCallbacks = {},
  size: { width: number; height: number } = { width: 960, height: 600 },
): SVGSVGElement {
  container.replaceChildren();
  const svg = svgEl("svg", {
    viewBox: `0 0 ${size.width} ${size.height}`,
    width: "100%",
    class: "graph-canvas",
  });

  const defs = svgEl("defs");
  const marker = svgEl("marker", {
    id: "arrow",
    viewBox: "0 0 10 10",
    refX: "9",
    refY: "5",
    markerWidth: "7",
    markerHeight: "7",
    orient: "auto-start-reverse",
  });
  marker.appendChild(svgEl("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#555" }));
  defs.appendChild(marker);
  svg.appendChild(defs);

  const top = maxScore(view.nodes);

  for (const edge of view.edges) {
    const from = positions.get(edge.src);
    const to = positions.get(edge.dst);
    if (!from || !to) {
      continue;
    }
    const line = svgEl("line", {
      x1: String(from.x),
      y1: String(from.y),
      x2: String(to.x),
      y2: String(to.y),
      stroke: "#555",
      "stroke-width": "1.6",
      "marker-end": "url(#arrow)",
      class: `edge edge-${edge.edgeKind}`,
      "data-edge-id": edge.id,
      "data-kind": edge.edgeKind,
    });
    if (edge.edgeKind === "plausible") {
      line.setAttribute("stroke-dasharray", PLAUSIBLE_DASH);
    }
    svg.appendChild(line);
    if (edge.api) {
      const label = svgEl("text", {
        x: String((from.x + to.x) / 2),
        y: String((from.y + to.y) / 2 - 6),
        "text-anchor": "middle",
        class: "edge-label",
        "font-size": "10",
        fill: "#444",
      });
      label.textContent = edge.api;
      svg.appendChild(label);
    }
  }

  for (const node of view.nodes) {
    const at = positions.get(node.id);
    if (!at) {
      continue;
    }
    const group = svgEl("g", { class: "node", "data-view-id": node.id });
    if (node.kind === "node") {
      const r = nodeRadius(node.node.score, top);
      const circle = svgEl("circle", {
        cx: String(at.x),
        cy: String(at.y),
        r: String(r),
        fill: ROLE_COLORS[node.node.role],
        class: `node-shape role-${node.node.role}`,
        "data-node-id": String(node.node.id),
        "data-role": node.node.role,
      });
      if (typeof node.node.score === "number") {
        circle.setAttribute("data-score", String(node.node.score));
      }
      const hover = svgEl("title");
      const location = `${node.node.file}:${node.node.line}:${node.node.column}`;
      hover.textContent =
        `${node.node.label}\n${location}` + (node.node.dualRole ? "\n(source and sink)" : "");
      circle.appendChild(hover);
      circle.addEventListener("click", () => {
        callbacks.onNavigate?.({
          label: node.node.label,
          file: node.node.file,
          line: node.node.line,
          column: node.node.column,
        });
      });
      group.appendChild(circle);
      const text = svgEl("text", {
        x: String(at.x),
        y: String(at.y + r + 14),
        "text-anchor": "middle",
        "font-size": "11",
        class: "node-label",
      });
      text.textContent = `${node.node.id}: ${node.node.label}`;
      group.appendChild(text);
    } else {
      const rect = svgEl("rect", {
        x: String(at.x - 34),
        y: String(at.y - NODE_RADIUS_BASE),
        width: "68",
        height: String(NODE_RADIUS_BASE * 2),
        rx: "8",
        fill: SUPER_NODE_COLOR,
        class: "node-shape super-node",
        "data-chain-id": node.id,
      });
      const hover = svgEl("title");
      hover.textContent = node.members.map((m) => m.label).join(" -> ");
      rect.appendChild(hover);
      rect.addEventListener("click", () => callbacks.onToggleChain?.(node.id));
      group.appendChild(rect);
      const text = svgEl("text", {
        x: String(at.x),
        y: String(at.y + 4),
        "text-anchor": "middle",
        "font-size": "11",
        fill: "white",
        class: "super-label",
      });
      text.textContent = node.label;
      group.appendChild(text);
    }
    svg.appendChild(group);
  }

  container.appendChild(svg);
  return svg;
}

export function renderErrorBanner(container: HTMLElement, message: string): void {
  container.replaceChildren();
  const banner = document.createElement("div");
  banner.className = "banner banner-error";
  banner.textContent = `cannot render answer: ${message}`;
  container.appendChild(banner);
}
