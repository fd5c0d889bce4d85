// Layout algorithms for the graph view. Both are pure and deterministic:
// same view model, same positions. Switching layout never re-queries.

import type { ViewEdge, ViewNode } from "./collapse.js";

export type LayoutKind = "breadth-first" | "concentric";

export const LAYOUTS: readonly LayoutKind[] = ["breadth-first", "concentric"];

export interface Point {
  x: number;
  y: number;
}

const MARGIN = 60;

/** BFS layering from the in-degree-0 roots (falling back to the first
 * unvisited node), one column per layer. */
function layerAssignment(nodes: ViewNode[], edges: ViewEdge[]): Map<string, number> {
  const order = nodes.map((n) => n.id);
  const successors = new Map<string, string[]>(order.map((id) => [id, []]));
  const inDegree = new Map<string, number>(order.map((id) => [id, 0]));
  for (const e of edges) {
    if (!successors.has(e.src) || !inDegree.has(e.dst)) {
      continue;
    }
    successors.get(e.src)!.push(e.dst);
    inDegree.set(e.dst, inDegree.get(e.dst)! + 1);
  }

  const layer = new Map<string, number>();
  const queue: string[] = [];
  let head = 0;
  const enqueue = (id: string, depth: number) => {
    layer.set(id, depth);
    queue.push(id);
  };
  const drain = () => {
    while (head < queue.length) {
      const current = queue[head++]!;
      for (const next of successors.get(current) ?? []) {
        if (!layer.has(next)) {
          enqueue(next, layer.get(current)! + 1);
        }
      }
    }
  };
  for (const id of order) {
    if (inDegree.get(id) === 0) {
      enqueue(id, 0);
    }
  }
  drain();
  // Cyclic leftovers have no in-degree-0 entry; seed them in document order.
  for (const id of order) {
    if (!layer.has(id)) {
      enqueue(id, 0);
      drain();
    }
  }
  return layer;
}

export function layoutPositions(
  kind: LayoutKind,
  nodes: ViewNode[],
  edges: ViewEdge[],
  width: number,
  height: number,
): Map<string, Point> {
  if (nodes.length === 0) {
    return new Map();
  }
  const layers = layerAssignment(nodes, edges);
  const depthOf = (id: string) => layers.get(id) ?? 0;
  const maxDepth = Math.max(...nodes.map((n) => depthOf(n.id)));

  const byDepth = new Map<number, string[]>();
  for (const node of nodes) {
    const d = depthOf(node.id);
    byDepth.set(d, [...(byDepth.get(d) ?? []), node.id]);
  }

  const positions = new Map<string, Point>();
  if (kind === "breadth-first") {
    for (const [depth, ids] of byDepth) {
      const x =
        maxDepth === 0
          ? width / 2
          : MARGIN + (depth * (width - 2 * MARGIN)) / maxDepth;
      ids.forEach((id, i) => {
        const y =
          ids.length === 1
            ? height / 2
            : MARGIN + (i * (height - 2 * MARGIN)) / (ids.length - 1);
        positions.set(id, { x, y });
      });
    }
    return positions;
  }

  // Concentric: one ring per BFS depth, depth 0 innermost.
  const cx = width / 2;
  const cy = height / 2;
  const maxRadius = Math.min(width, height) / 2 - MARGIN;
  for (const [depth, ids] of byDepth) {
    const radius = maxDepth === 0 ? 0 : (depth / maxDepth) * maxRadius;
    ids.forEach((id, i) => {
      if (radius === 0 && ids.length === 1) {
        positions.set(id, { x: cx, y: cy });
        return;
      }
      const angle = (2 * Math.PI * i) / ids.length - Math.PI / 2;
      const r = radius === 0 ? maxRadius * 0.15 : radius;
      positions.set(id, { x: cx + r * Math.cos(angle), y: cy + r * Math.sin(angle) });
    });
  }
  return positions;
}
