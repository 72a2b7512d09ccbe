import type { NetworkDocument } from "./types.js";

export interface PendingEdge {
  a: string;
  b: string;
}

function sameEdge(a1: string, b1: string, a2: string, b2: string): boolean {
  return (a1 === a2 && b1 === b2) || (a1 === b2 && b1 === a2);
}

/** Client-side candidate validation; the service re-validates on submit.
 * Returns an error message, or null when the edge is acceptable. */
export function validateCandidate(
  net: NetworkDocument,
  pending: PendingEdge[],
  a: string,
  b: string,
): string | null {
  if (a === b) {
    return "a new street must join two distinct nodes";
  }
  const ids = new Set(net.nodes.map((n) => n.id));
  if (!ids.has(a)) return `unknown node ${a}`;
  if (!ids.has(b)) return `unknown node ${b}`;
  for (const [u, v] of net.edges) {
    if (sameEdge(u, v, a, b)) {
      return `street ${a} – ${b} already exists`;
    }
  }
  for (const edge of pending) {
    if (sameEdge(edge.a, edge.b, a, b)) {
      return `candidate ${a} – ${b} is already pending`;
    }
  }
  return null;
}
