import type { ComparisonDocument } from "./types.js";
import type { Canvas2D } from "./map.js";
import { shortNumber } from "./color.js";

/** One displayed table row. The numeric fields are the untouched values
 * from the comparison document, so displayed numbers always equal the
 * service response exactly. */
export interface ComparisonRow {
  h: number;
  baseline: number;
  enhanced: number;
  relativeChange: number | null;
}

export function comparisonRows(doc: ComparisonDocument): ComparisonRow[] {
  const rows: ComparisonRow[] = [];
  for (let h = 1; h <= doc.steps; h++) {
    rows.push({
      h,
      baseline: doc.baseline_curve[h - 1],
      enhanced: doc.enhanced_curve[h - 1],
      relativeChange: doc.relative_change[h - 1],
    });
  }
  return rows;
}

interface Series {
  label: string;
  color: string;
  dash: number[];
  values: number[];
}

/** Simple two-line chart: baseline vs enhanced mean accessibility. */
export function drawComparison(
  ctx: Canvas2D & {
    fillText?(text: string, x: number, y: number): void;
    font?: string;
  },
  width: number,
  height: number,
  doc: ComparisonDocument,
): void {
  const pad = { left: 46, right: 12, top: 12, bottom: 26 };
  const plotW = width - pad.left - pad.right;
  const plotH = height - pad.top - pad.bottom;
  const series: Series[] = [
    { label: "baseline", color: "#5b6a79", dash: [], values: doc.baseline_curve },
    { label: "enhanced", color: "#c0392b", dash: [6, 4], values: doc.enhanced_curve },
  ];
  let maxY = 0;
  for (const s of series) for (const v of s.values) if (v > maxY) maxY = v;
  if (maxY <= 0) maxY = 1;

  ctx.clearRect(0, 0, width, height);

  // axes
  ctx.setLineDash([]);
  ctx.strokeStyle = "#888";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(pad.left, pad.top);
  ctx.lineTo(pad.left, pad.top + plotH);
  ctx.lineTo(pad.left + plotW, pad.top + plotH);
  ctx.stroke();

  const xOf = (h: number) =>
    pad.left + ((h - 1) / Math.max(doc.steps - 1, 1)) * plotW;
  const yOf = (v: number) => pad.top + plotH - (v / maxY) * plotH;

  for (const s of series) {
    ctx.setLineDash(s.dash);
    ctx.strokeStyle = s.color;
    ctx.lineWidth = 2;
    ctx.beginPath();
    s.values.forEach((v, i) => {
      const x = xOf(i + 1);
      const y = yOf(v);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  }
  ctx.setLineDash([]);

  if (ctx.fillText) {
    ctx.fillStyle = "#444";
    if (ctx.font !== undefined) ctx.font = "11px sans-serif";
    ctx.fillText("h", pad.left + plotW / 2, height - 8);
    ctx.fillText(shortNumber(maxY), 4, pad.top + 10);
    ctx.fillText("0", 4, pad.top + plotH);
    series.forEach((s, i) => {
      ctx.fillText!(s.label, pad.left + 8 + i * 90, pad.top + 12);
    });
  }
}
