import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseExperimentCsv, type Dataset } from "../src/csv.js";
import {
  COLOR_EXACT,
  COLOR_HIGH_SHOTS,
  COLOR_LOW_SHOTS,
  colorFor,
  renderGridFigure,
  renderSingleFigure,
} from "../src/plot.js";

function fixture(name: string): Dataset {
  const text = readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf8");
  return parseExperimentCsv(text, name);
}

function count(svg: string, needle: string): number {
  return svg.split(needle).length - 1;
}

const LOW = ["collective_l3_s10.csv", "collective_l4_s10.csv", "collective_l5_s10.csv", "collective_l6_s10.csv"];
const HIGH = ["collective_l3_s18.csv", "collective_l4_s18.csv", "collective_l5_s18.csv", "collective_l6_s18.csv"];

describe("renderSingleFigure", () => {
  it("draws ten points, ten error bars, and one exact curve", () => {
    const svg = renderSingleFigure(fixture("single.csv"));
    expect(count(svg, 'class="pt dataset-0"')).toBe(10);
    expect(count(svg, 'class="err dataset-0"')).toBe(10);
    expect(count(svg, 'class="master"')).toBe(1);
    expect(svg).toContain(`stroke="${COLOR_EXACT}"`);
    expect(count(svg, `fill="${COLOR_LOW_SHOTS}"`)).toBe(10);
    expect(svg).not.toContain(COLOR_HIGH_SHOTS);
  });

  it("is a deterministic function of its input", () => {
    const a = renderSingleFigure(fixture("single.csv"));
    const b = renderSingleFigure(fixture("single.csv"));
    expect(a).toBe(b);
  });

  it("emits one svg root with a white background", () => {
    const svg = renderSingleFigure(fixture("collective_l3_s10.csv"));
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    expect(svg).toContain('fill="#ffffff"');
  });
});

describe("renderGridFigure", () => {
  it("lays out four labeled panels from one sweep", () => {
    const svg = renderGridFigure(LOW.map(fixture));
    expect(count(svg, '<g class="panel"')).toBe(4);
    for (const label of ["(a)", "(b)", "(c)", "(d)"]) {
      expect(svg).toContain(`>${label}</text>`);
    }
    expect(count(svg, 'class="pt dataset-0"')).toBe(40);
    expect(count(svg, 'class="err dataset-0"')).toBe(40);
    expect(count(svg, 'class="master"')).toBe(4);
    expect(svg).not.toContain("dataset-1");
  });

  it("overlays a second sweep, colored by shot count", () => {
    const svg = renderGridFigure(LOW.map(fixture), HIGH.map(fixture));
    expect(count(svg, 'class="pt dataset-0"')).toBe(40);
    expect(count(svg, 'class="pt dataset-1"')).toBe(40);
    expect(count(svg, 'class="err dataset-1"')).toBe(40);
    // 40 points + 40 error bars per sweep
    expect(count(svg, `"${COLOR_LOW_SHOTS}"`)).toBe(80);
    expect(count(svg, `"${COLOR_HIGH_SHOTS}"`)).toBe(80);
  });

  it("keeps the low-shot sweep blue regardless of argument order", () => {
    const low = fixture("collective_l3_s10.csv");
    const high = fixture("collective_l3_s18.csv");
    expect(colorFor(low, [low, high])).toBe(COLOR_LOW_SHOTS);
    expect(colorFor(low, [high, low])).toBe(COLOR_LOW_SHOTS);
    expect(colorFor(high, [low, high])).toBe(COLOR_HIGH_SHOTS);
    expect(colorFor(low, [low])).toBe(COLOR_LOW_SHOTS);
  });

  it("rejects a wrong panel count", () => {
    expect(() => renderGridFigure(LOW.slice(0, 3).map(fixture))).toThrow(/exactly 4 datasets, got 3/);
    expect(() => renderGridFigure(LOW.map(fixture), HIGH.slice(0, 2).map(fixture))).toThrow(
      /exactly 4 datasets, got 2/,
    );
  });

  it("rejects inputs on different time grids", () => {
    const panels = LOW.slice(0, 3).map(fixture);
    panels.push(fixture("single.csv"));
    expect(() => renderGridFigure(panels)).toThrow(/must share the time grid/);
  });

  it("is deterministic across calls", () => {
    const a = renderGridFigure(LOW.map(fixture), HIGH.map(fixture));
    const b = renderGridFigure(LOW.map(fixture), HIGH.map(fixture));
    expect(a).toBe(b);
  });
});
