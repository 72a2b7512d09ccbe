import type { AccessibilityDocument, NetworkDocument } from "./types.js";
import type { ColorScale } from "./color.js";
import { worldToScreen, type Transform, type ViewState } from "./state.js";

export const NODE_RADIUS = 4;
export const PICK_RADIUS = 9;

/** Minimal slice of CanvasRenderingContext2D the renderer needs; tests
 * substitute a recording stub. */
export interface Canvas2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  setLineDash(segments: number[]): void;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
}

export interface DrawStats {
  nodesDrawn: number;
  edgesDrawn: number;
  pendingDrawn: number;
  nodeFill: Map<string, string>;
}

/** Render the network colored by mean outward accessibility. Candidate
 * streets are drawn dashed. Returns what was drawn, for tests and the
 * status line. */
export function drawMap(
  ctx: Canvas2D,
  width: number,
  height: number,
  net: NetworkDocument,
  field: AccessibilityDocument,
  state: ViewState,
  scale: ColorScale,
): DrawStats {
  const stats: DrawStats = {
    nodesDrawn: 0,
    edgesDrawn: 0,
    pendingDrawn: 0,
    nodeFill: new Map(),
  };
  const position = new Map<string, [number, number]>();
  for (const node of net.nodes) {
    if (node.x === null || node.y === null) continue;
    position.set(node.id, worldToScreen(state.transform, node.x, node.y));
  }
  const meanOf = new Map<string, number>();
  for (const rec of field.nodes) meanOf.set(rec.id, rec.mean_oa);

  ctx.clearRect(0, 0, width, height);

  ctx.setLineDash([]);
  ctx.strokeStyle = "#b8b8c0";
  ctx.lineWidth = 1;
  for (const [u, v] of net.edges) {
    const a = position.get(u);
    const b = position.get(v);
    if (!a || !b) continue;
    ctx.beginPath();
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(b[0], b[1]);
    ctx.stroke();
    stats.edgesDrawn++;
  }

  ctx.setLineDash([6, 4]);
  ctx.strokeStyle = "#c0392b";
  ctx.lineWidth = 2;
  for (const { a, b } of state.pending) {
    const pa = position.get(a);
    const pb = position.get(b);
    if (!pa || !pb) continue;
    ctx.beginPath();
    ctx.moveTo(pa[0], pa[1]);
    ctx.lineTo(pb[0], pb[1]);
    ctx.stroke();
    stats.pendingDrawn++;
  }
  ctx.setLineDash([]);

  for (const node of net.nodes) {
    const pos = position.get(node.id);
    if (!pos) continue;
    const mean = meanOf.get(node.id);
    const fill = mean === undefined ? "#ffffff" : scale.color(mean);
    ctx.beginPath();
    ctx.arc(pos[0], pos[1], NODE_RADIUS, 0, Math.PI * 2);
    ctx.fillStyle = fill;
    ctx.fill();
    if (node.id === state.selected) {
      ctx.strokeStyle = "#c0392b";
      ctx.lineWidth = 2;
      ctx.stroke();
    }
    stats.nodesDrawn++;
    stats.nodeFill.set(node.id, fill);
  }
  return stats;
}

/** Nearest node within the pick radius of a screen point. */
export function pickNode(
  net: NetworkDocument,
  transform: Transform,
  px: number,
  py: number,
  radius = PICK_RADIUS,
): string | null {
  let best: string | null = null;
  let bestDist = radius * radius;
  for (const node of net.nodes) {
    if (node.x === null || node.y === null) continue;
    const [sx, sy] = worldToScreen(transform, node.x, node.y);
    const d2 = (sx - px) * (sx - px) + (sy - py) * (sy - py);
    if (d2 <= bestDist) {
      bestDist = d2;
      best = node.id;
    }
  }
  return best;
}
