// Chain collapsing: maximal runs of intermediate nodes threaded by single
// edges can fold into one labeled super-node, and expand back to the exact
// original node set. Only the view model changes; the payload is untouched.

import type { EdgeKind, Graph, PayloadNode } from "./types.js";

export interface RealViewNode {
  kind: "node";
  id: string;
  node: PayloadNode;
}

export interface SuperViewNode {
  kind: "super";
  id: string;
  label: string;
  members: PayloadNode[];
}

export type ViewNode = RealViewNode | SuperViewNode;

export interface ViewEdge {
  id: string;
  src: string;
  dst: string;
  edgeKind: EdgeKind;
  api?: string;
}

export interface Chain {
  id: string;
  memberIds: number[];
}

export function viewNodeId(nodeId: number): string {
  return `n${nodeId}`;
}

/** Maximal chains of >= 2 consecutive intermediate nodes, each with exactly
 * one incoming and one outgoing edge inside the payload graph. */
export function findChains(graph: Graph): Chain[] {
  const inEdges = new Map<number, number[]>();
  const outEdges = new Map<number, number[]>();
  const byId = new Map(graph.edges.map((e) => [e.id, e]));
  for (const e of graph.edges) {
    outEdges.set(e.src, [...(outEdges.get(e.src) ?? []), e.id]);
    inEdges.set(e.dst, [...(inEdges.get(e.dst) ?? []), e.id]);
  }

  const eligible = new Set<number>();
  for (const node of graph.nodes) {
    const ins = inEdges.get(node.id) ?? [];
    const outs = outEdges.get(node.id) ?? [];
    if (node.role === "intermediate" && ins.length === 1 && outs.length === 1) {
      const inEdge = byId.get(ins[0]!)!;
      const outEdge = byId.get(outs[0]!)!;
      if (inEdge.src !== node.id && outEdge.dst !== node.id) {
        eligible.add(node.id);
      }
    }
  }

  const successorOf = (nodeId: number): number | null => {
    const outs = outEdges.get(nodeId) ?? [];
    return outs.length === 1 ? byId.get(outs[0]!)!.dst : null;
  };
  const predecessorOf = (nodeId: number): number | null => {
    const ins = inEdges.get(nodeId) ?? [];
    return ins.length === 1 ? byId.get(ins[0]!)!.src : null;
  };

  const chains: Chain[] = [];
  const assigned = new Set<number>();
  for (const node of graph.nodes) {
    if (!eligible.has(node.id) || assigned.has(node.id)) {
      continue;
    }
    const pred = predecessorOf(node.id);
    if (pred !== null && eligible.has(pred)) {
      continue; // not a chain head
    }
    const members = [node.id];
    let cursor = successorOf(node.id);
    while (cursor !== null && eligible.has(cursor) && !members.includes(cursor)) {
      members.push(cursor);
      cursor = successorOf(cursor);
    }
    if (members.length >= 2) {
      members.forEach((m) => assigned.add(m));
      chains.push({ id: `chain-${members[0]}-${members[members.length - 1]}`, memberIds: members });
    }
  }
  return chains;
}

/** Project the payload graph into view nodes/edges, folding the chains whose
 * ids are in `collapsed`. Edges internal to a folded chain disappear; edges
 * touching its ends re-attach to the super-node. */
export function buildViewModel(
  graph: Graph,
  collapsed: ReadonlySet<string>,
): { nodes: ViewNode[]; edges: ViewEdge[]; chains: Chain[] } {
  const chains = findChains(graph);
  const active = chains.filter((c) => collapsed.has(c.id));
  const memberToSuper = new Map<number, string>();
  for (const chain of active) {
    for (const member of chain.memberIds) {
      memberToSuper.set(member, chain.id);
    }
  }

  const byId = new Map(graph.nodes.map((n) => [n.id, n]));
  const nodes: ViewNode[] = [];
  const emittedSupers = new Set<string>();
  for (const node of graph.nodes) {
    const superId = memberToSuper.get(node.id);
    if (superId === undefined) {
      nodes.push({ kind: "node", id: viewNodeId(node.id), node });
    } else if (!emittedSupers.has(superId)) {
      emittedSupers.add(superId);
      const chain = active.find((c) => c.id === superId)!;
      nodes.push({
        kind: "super",
        id: superId,
        label: `${chain.memberIds.length} steps`,
        members: chain.memberIds.map((m) => byId.get(m)!),
      });
    }
  }

  const edges: ViewEdge[] = [];
  for (const e of graph.edges) {
    const srcSuper = memberToSuper.get(e.src);
    const dstSuper = memberToSuper.get(e.dst);
    if (srcSuper !== undefined && srcSuper === dstSuper) {
      continue; // internal to a folded chain
    }
    edges.push({
      id: `e${e.id}`,
      src: srcSuper ?? viewNodeId(e.src),
      dst: dstSuper ?? viewNodeId(e.dst),
      edgeKind: e.kind,
      api: e.api,
    });
  }
  return { nodes, edges, chains };
}
