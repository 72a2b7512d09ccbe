/** Sequential gray ramp over [min, max] of the mean accessibility:
 * light gray for the least accessible nodes, near-black for the most. */

const LIGHT = 225;
const DARK = 20;

export interface ColorScale {
  min: number;
  max: number;
  color(value: number): string;
}

export function makeColorScale(values: number[]): ColorScale {
  if (values.length === 0) {
    return { min: 0, max: 1, color: () => grayCss(LIGHT) };
  }
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  const span = max - min;
  return {
    min,
    max,
    color(value: number): string {
      const t = span > 0 ? (value - min) / span : 0.5;
      const clamped = Math.min(1, Math.max(0, t));
      return grayCss(Math.round(LIGHT - clamped * (LIGHT - DARK)));
    },
  };
}

function grayCss(level: number): string {
  return `rgb(${level},${level},${level})`;
}

export interface LegendTick {
  value: number;
  color: string;
  label: string;
}

export function legendTicks(scale: ColorScale, count = 5): LegendTick[] {
  const ticks: LegendTick[] = [];
  for (let i = 0; i < count; i++) {
    const t = count === 1 ? 0 : i / (count - 1);
    const value = scale.min + t * (scale.max - scale.min);
    ticks.push({ value, color: scale.color(value), label: shortNumber(value) });
  }
  return ticks;
}

/** Compact label for axes and the legend. */
export function shortNumber(v: number): string {
  if (!Number.isFinite(v)) return String(v);
  if (v !== 0 && Math.abs(v) < 1e-3) return v.toExponential(2);
  return v.toPrecision(4);
}

/** Full-precision rendering of a served value. Round-trips exactly:
 * Number(exactNumber(v)) === v, so displayed values stay identical to the
 * service response. */
export function exactNumber(v: number | null): string {
  return v === null ? "" : String(v);
}

export function percent(v: number | null): string {
  return v === null ? "n/a" : `${(v * 100).toFixed(1)}%`;
}
