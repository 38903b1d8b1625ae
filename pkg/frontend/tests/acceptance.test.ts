import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterAll, describe, expect, it } from "vitest";

import { run } from "../src/cli.js";

function fixture(name: string): string {
  return fileURLToPath(new URL(`./fixtures/${name}`, import.meta.url));
}

function count(svg: string, needle: string): number {
  return svg.split(needle).length - 1;
}

const dir = mkdtempSync(join(tmpdir(), "qdecay-acceptance-"));
afterAll(() => rmSync(dir, { recursive: true, force: true }));

describe("acceptance", () => {
  it("renders the grid and single figures with 10 points and 10 error bars per dataset per panel", () => {
    const grid = join(dir, "grid.svg");
    const argv = ["render"];
    for (const l of [3, 4, 5, 6]) argv.push("--grid", fixture(`collective_l${l}_s10.csv`));
    for (const l of [3, 4, 5, 6]) argv.push("--shots2", fixture(`collective_l${l}_s18.csv`));
    argv.push("--out", grid);
    expect(run(argv)).toBe(0);
    const gridSvg = readFileSync(grid, "utf8");
    expect(count(gridSvg, '<g class="panel"')).toBe(4);
    // 4 panels x 10 per dataset, two datasets per panel
    expect(count(gridSvg, 'class="pt dataset-0"')).toBe(40);
    expect(count(gridSvg, 'class="err dataset-0"')).toBe(40);
    expect(count(gridSvg, 'class="pt dataset-1"')).toBe(40);
    expect(count(gridSvg, 'class="err dataset-1"')).toBe(40);

    const single = join(dir, "single.svg");
    expect(run(["render", "--single", fixture("single.csv"), "--out", single])).toBe(0);
    const singleSvg = readFileSync(single, "utf8");
    expect(count(singleSvg, '<g class="panel"')).toBe(1);
    expect(count(singleSvg, 'class="pt dataset-0"')).toBe(10);
    expect(count(singleSvg, 'class="err dataset-0"')).toBe(10);

    console.log(
      "[ACCEPTANCE] renderer: PASS (grid 4 panels, 10 points + 10 error bars per dataset per panel; single panel 10 + 10)",
    );
  });
});
