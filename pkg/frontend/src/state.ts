import type { ComparisonDocument, NetworkDocument } from "./types.js";
import { validateCandidate, type PendingEdge } from "./validate.js";

/** Map view transform: screen = world * scale + (tx, ty). */
export interface Transform {
  scale: number;
  tx: number;
  ty: number;
}

export interface ViewState {
  transform: Transform;
  selected: string | null;
  pending: PendingEdge[];
  activeJobId: string | null;
  comparison: ComparisonDocument | null;
  lastError: string | null;
}

export function initialState(): ViewState {
  return {
    transform: { scale: 1, tx: 0, ty: 0 },
    selected: null,
    pending: [],
    activeJobId: null,
    comparison: null,
    lastError: null,
  };
}

export function worldToScreen(t: Transform, x: number, y: number): [number, number] {
  return [x * t.scale + t.tx, y * t.scale + t.ty];
}

export function screenToWorld(t: Transform, px: number, py: number): [number, number] {
  return [(px - t.tx) / t.scale, (py - t.ty) / t.scale];
}

export function panBy(t: Transform, dx: number, dy: number): Transform {
  return { scale: t.scale, tx: t.tx + dx, ty: t.ty + dy };
}

/** Zoom by `factor` keeping the screen point (px, py) fixed. */
export function zoomAt(t: Transform, px: number, py: number, factor: number): Transform {
  const scale = Math.min(1e6, Math.max(1e-6, t.scale * factor));
  const applied = scale / t.scale;
  return {
    scale,
    tx: px - (px - t.tx) * applied,
    ty: py - (py - t.ty) * applied,
  };
}

export interface Bounds {
  minX: number;
  minY: number;
  maxX: number;
  maxY: number;
}

export function nodeBounds(net: NetworkDocument): Bounds | null {
  let minX = Infinity;
  let minY = Infinity;
  let maxX = -Infinity;
  let maxY = -Infinity;
  let any = false;
  for (const n of net.nodes) {
    if (n.x === null || n.y === null) continue;
    any = true;
    if (n.x < minX) minX = n.x;
    if (n.y < minY) minY = n.y;
    if (n.x > maxX) maxX = n.x;
    if (n.y > maxY) maxY = n.y;
  }
  return any ? { minX, minY, maxX, maxY } : null;
}

/** Transform that fits the bounds into width x height with padding. */
export function fitTransform(
  bounds: Bounds,
  width: number,
  height: number,
  padding = 30,
): Transform {
  const spanX = Math.max(bounds.maxX - bounds.minX, 1e-9);
  const spanY = Math.max(bounds.maxY - bounds.minY, 1e-9);
  const scale = Math.min(
    (width - 2 * padding) / spanX,
    (height - 2 * padding) / spanY,
  );
  const cx = (bounds.minX + bounds.maxX) / 2;
  const cy = (bounds.minY + bounds.maxY) / 2;
  return { scale, tx: width / 2 - cx * scale, ty: height / 2 - cy * scale };
}

/** Handle a node click while drawing candidate streets: first click
 * selects, clicking the same node deselects, a second node attempts to
 * add the candidate edge (validated client-side). */
export function clickNode(state: ViewState, net: NetworkDocument, nodeId: string): ViewState {
  if (state.selected === null) {
    return { ...state, selected: nodeId, lastError: null };
  }
  if (state.selected === nodeId) {
    return { ...state, selected: null, lastError: null };
  }
  const error = validateCandidate(net, state.pending, state.selected, nodeId);
  if (error !== null) {
    return { ...state, selected: null, lastError: error };
  }
  return {
    ...state,
    selected: null,
    lastError: null,
    pending: [...state.pending, { a: state.selected, b: nodeId }],
  };
}

export function removePending(state: ViewState, index: number): ViewState {
  const pending = state.pending.filter((_, i) => i !== index);
  return { ...state, pending };
}

export function clearPending(state: ViewState): ViewState {
  return { ...state, pending: [], selected: null, lastError: null };
}
