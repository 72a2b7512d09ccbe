import { describe, expect, it } from "vitest";

import { exactNumber, legendTicks, makeColorScale, percent, shortNumber } from "../src/color.js";

function grayLevel(css: string): number {
  const m = css.match(/^rgb\((\d+),(\d+),(\d+)\)$/);
  if (!m) throw new Error(`not a gray: ${css}`);
  expect(m[1]).toBe(m[2]);
  expect(m[2]).toBe(m[3]);
  return Number(m[1]);
}

describe("makeColorScale", () => {
  it("maps the minimum to light gray and the maximum to dark", () => {
    const scale = makeColorScale([0.1, 0.5, 0.9]);
    expect(grayLevel(scale.color(0.1))).toBeGreaterThan(200);
    expect(grayLevel(scale.color(0.9))).toBeLessThan(60);
  });

  it("darkens monotonically with the value", () => {
    const scale = makeColorScale([0, 1]);
    const levels = [0, 0.25, 0.5, 0.75, 1].map((v) => grayLevel(scale.color(v)));
    for (let i = 1; i < levels.length; i++) {
      expect(levels[i]).toBeLessThan(levels[i - 1]);
    }
  });

  it("clamps values outside [min, max]", () => {
    const scale = makeColorScale([0.2, 0.8]);
    expect(scale.color(-5)).toBe(scale.color(0.2));
    expect(scale.color(99)).toBe(scale.color(0.8));
  });

  it("handles a constant field", () => {
    const scale = makeColorScale([0.4, 0.4, 0.4]);
    expect(grayLevel(scale.color(0.4))).toBeGreaterThan(80);
    expect(grayLevel(scale.color(0.4))).toBeLessThan(200);
  });

  it("handles an empty field", () => {
    const scale = makeColorScale([]);
    expect(typeof scale.color(0.3)).toBe("string");
  });
});

describe("legendTicks", () => {
  it("spans min to max with matching colors", () => {
    const scale = makeColorScale([0, 0.5]);
    const ticks = legendTicks(scale, 5);
    expect(ticks).toHaveLength(5);
    expect(ticks[0].value).toBe(0);
    expect(ticks[4].value).toBe(0.5);
    expect(ticks[0].color).toBe(scale.color(0));
    expect(ticks[4].color).toBe(scale.color(0.5));
  });
});

describe("number formatting", () => {
  it("exactNumber round-trips every float exactly", () => {
    for (const v of [0.1 + 0.2, 5 / 12, 1e-17, 123456.789, 0]) {
      expect(Number(exactNumber(v))).toBe(v);
    }
    expect(exactNumber(null)).toBe("");
  });

  it("shortNumber keeps labels compact", () => {
    expect(shortNumber(0.41666666666666663).length).toBeLessThanOrEqual(7);
    expect(shortNumber(0)).toBe("0.000");
  });

  it("percent renders null as n/a", () => {
    expect(percent(null)).toBe("n/a");
    expect(percent(0.211)).toBe("21.1%");
  });
});
