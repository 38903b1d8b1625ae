#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { parseExperimentCsv, type Dataset } from "./csv.js";
import { renderGridFigure, renderSingleFigure } from "./plot.js";

const USAGE = `usage: qdecay-plots render (--single CSV | --grid CSV CSV CSV CSV [--shots2 CSV CSV CSV CSV]) --out FILE

Render experiment sweep CSVs to an SVG figure.

  --single CSV   one file, one panel
  --grid CSV...  four files, one per panel (a)-(d)
  --shots2 CSV.. optional second sweep at a different shot count, overlaid
  --out FILE     where to write the SVG`;

function load(path: string): Dataset {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new Error(`cannot read ${path}: ${(err as NodeJS.ErrnoException).message}`);
  }
  return parseExperimentCsv(text, path);
}

/** Run the renderer CLI. Returns the process exit code. */
export function run(argv: string[]): number {
  let positionals: string[];
  let values: { single?: string; grid?: string[]; shots2?: string[]; out?: string };
  try {
    ({ positionals, values } = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        single: { type: "string" },
        grid: { type: "string", multiple: true },
        shots2: { type: "string", multiple: true },
        out: { type: "string" },
      },
    }));
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }

  if (positionals.length !== 1 || positionals[0] !== "render") {
    console.error(USAGE);
    return 2;
  }
  const grid = values.grid ?? [];
  const shots2 = values.shots2 ?? [];
  if ((values.single !== undefined) === (grid.length > 0)) {
    console.error("error: pass exactly one of --single or --grid");
    console.error(USAGE);
    return 2;
  }
  if (values.out === undefined) {
    console.error("error: --out is required");
    console.error(USAGE);
    return 2;
  }
  if (values.single !== undefined && shots2.length > 0) {
    console.error("error: --shots2 only applies to --grid");
    return 2;
  }
  if (grid.length > 0 && grid.length !== 4) {
    console.error(`error: --grid takes exactly 4 files, got ${grid.length}`);
    return 2;
  }
  if (shots2.length > 0 && shots2.length !== 4) {
    console.error(`error: --shots2 takes exactly 4 files, got ${shots2.length}`);
    return 2;
  }

  let svg: string;
  try {
    if (values.single !== undefined) {
      svg = renderSingleFigure(load(values.single));
    } else {
      const primary = grid.map(load);
      const secondary = shots2.length > 0 ? shots2.map(load) : undefined;
      svg = renderGridFigure(primary, secondary);
    }
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }

  try {
    writeFileSync(values.out, svg, "utf8");
  } catch (err) {
    console.error(`error: cannot write ${values.out}: ${(err as NodeJS.ErrnoException).message}`);
    return 1;
  }
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exitCode = run(process.argv.slice(2));
}
