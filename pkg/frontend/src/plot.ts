import { assertSharedTimeGrid, type Dataset } from "./csv.js";

export const COLOR_LOW_SHOTS = "#1f77b4";
export const COLOR_HIGH_SHOTS = "#2ca02c";
export const COLOR_EXACT = "#000000";

const PANEL_W = 440;
const PANEL_H = 340;
const MARGIN = { left: 58, right: 16, top: 28, bottom: 44 };
const PLOT_W = PANEL_W - MARGIN.left - MARGIN.right;
const PLOT_H = PANEL_H - MARGIN.top - MARGIN.bottom;
const N_TICKS = 5;

/** One panel: the sampled curves to draw together over a common time grid. */
export interface PanelSpec {
  label: string;
  datasets: Dataset[];
}

interface Scale {
  min: number;
  span: number;
  size: number;
  flip: boolean;
}

function fmt(v: number): string {
  // Two decimals is below one pixel at panel size, and keeps output stable.
  return v.toFixed(2);
}

function fmtTick(v: number): string {
  return String(Number(v.toPrecision(3)));
}

function project(scale: Scale, v: number): number {
  const frac = (v - scale.min) / scale.span;
  return scale.flip ? scale.size * (1 - frac) : scale.size * frac;
}

function makeScale(values: number[], size: number, flip: boolean): Scale {
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  const pad = 0.04 * (max - min);
  min -= pad;
  max += pad;
  return { min, span: max - min, size, flip };
}

function ticks(scale: Scale): number[] {
  const out: number[] = [];
  for (let i = 0; i < N_TICKS; i++) {
    out.push(scale.min + (scale.span * i) / (N_TICKS - 1));
  }
  return out;
}

/** Assign plotting colors: fewer shots draws blue, more shots green. */
export function colorFor(dataset: Dataset, panel: Dataset[]): string {
  if (panel.length < 2) return COLOR_LOW_SHOTS;
  const counts = panel.map((d) => d.nShots);
  const low = Math.min(...counts);
  const high = Math.max(...counts);
  if (low === high) {
    return panel.indexOf(dataset) === 0 ? COLOR_LOW_SHOTS : COLOR_HIGH_SHOTS;
  }
  return dataset.nShots === low ? COLOR_LOW_SHOTS : COLOR_HIGH_SHOTS;
}

function axes(x: Scale, y: Scale): string {
  const parts: string[] = [];
  const bottom = fmt(PLOT_H);
  parts.push(
    `<line class="axis" x1="0" y1="${bottom}" x2="${fmt(PLOT_W)}" y2="${bottom}" stroke="#333333" stroke-width="1"/>`,
  );
  parts.push(`<line class="axis" x1="0" y1="0" x2="0" y2="${bottom}" stroke="#333333" stroke-width="1"/>`);
  for (const v of ticks(x)) {
    const px = fmt(project(x, v));
    parts.push(
      `<line class="tick" x1="${px}" y1="${bottom}" x2="${px}" y2="${fmt(PLOT_H + 5)}" stroke="#333333" stroke-width="1"/>`,
    );
    parts.push(
      `<text class="tick-label" x="${px}" y="${fmt(PLOT_H + 18)}" text-anchor="middle" font-size="11">${fmtTick(v)}</text>`,
    );
  }
  for (const v of ticks(y)) {
    const py = fmt(project(y, v));
    parts.push(
      `<line class="tick" x1="-5" y1="${py}" x2="0" y2="${py}" stroke="#333333" stroke-width="1"/>`,
    );
    parts.push(
      `<text class="tick-label" x="-8" y="${fmt(Number(py) + 4)}" text-anchor="end" font-size="11">${fmtTick(v)}</text>`,
    );
  }
  parts.push(
    `<text class="axis-label" x="${fmt(PLOT_W / 2)}" y="${fmt(PLOT_H + 36)}" text-anchor="middle" font-size="12">t</text>`,
  );
  parts.push(
    `<text class="axis-label" x="${fmt(-MARGIN.left + 14)}" y="${fmt(PLOT_H / 2)}" text-anchor="middle" font-size="12" transform="rotate(-90 ${fmt(-MARGIN.left + 14)} ${fmt(PLOT_H / 2)})">Jz</text>`,
  );
  return parts.join("\n");
}

function renderPanelBody(panel: PanelSpec): string {
  if (panel.datasets.length === 0) {
    throw new Error(`panel ${panel.label || "(unlabeled)"}: no datasets`);
  }
  assertSharedTimeGrid(panel.datasets);

  const xs = panel.datasets[0].times;
  const yValues: number[] = [];
  for (const d of panel.datasets) {
    for (const row of d.rows) {
      const sigma = Math.sqrt(row.jzVar);
      yValues.push(row.jzMean - sigma, row.jzMean + sigma, row.jzExact);
    }
  }
  const x = makeScale(xs, PLOT_W, false);
  const y = makeScale(yValues, PLOT_H, true);

  const parts: string[] = [axes(x, y)];

  const exact = panel.datasets[0].rows
    .map((row) => `${fmt(project(x, row.t))},${fmt(project(y, row.jzExact))}`)
    .join(" ");
  parts.push(
    `<polyline class="master" points="${exact}" fill="none" stroke="${COLOR_EXACT}" stroke-width="1.5"/>`,
  );

  panel.datasets.forEach((dataset, i) => {
    const color = colorFor(dataset, panel.datasets);
    for (const row of dataset.rows) {
      const px = fmt(project(x, row.t));
      const sigma = Math.sqrt(row.jzVar);
      const yLo = fmt(project(y, row.jzMean - sigma));
      const yHi = fmt(project(y, row.jzMean + sigma));
      parts.push(
        `<line class="err dataset-${i}" x1="${px}" y1="${yLo}" x2="${px}" y2="${yHi}" stroke="${color}" stroke-width="1"/>`,
      );
    }
    for (const row of dataset.rows) {
      const px = fmt(project(x, row.t));
      const py = fmt(project(y, row.jzMean));
      parts.push(`<circle class="pt dataset-${i}" cx="${px}" cy="${py}" r="3" fill="${color}"/>`);
    }
  });

  if (panel.label !== "") {
    parts.push(
      `<text class="panel-label" x="${fmt(PLOT_W - 6)}" y="14" text-anchor="end" font-size="13" font-weight="bold">${panel.label}</text>`,
    );
  }
  return parts.join("\n");
}

function panelGroup(panel: PanelSpec, tx: number, ty: number): string {
  const body = renderPanelBody(panel);
  return `<g class="panel" transform="translate(${fmt(tx + MARGIN.left)} ${fmt(ty + MARGIN.top)})">\n${body}\n</g>`;
}

function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="sans-serif">\n` +
    `<rect width="${width}" height="${height}" fill="#ffffff"/>\n${body}\n</svg>\n`
  );
}

/** Render one dataset as a single-panel figure. */
export function renderSingleFigure(dataset: Dataset): string {
  const body = panelGroup({ label: "", datasets: [dataset] }, 0, 0);
  return document(PANEL_W, PANEL_H, body);
}

const GRID_LABELS = ["(a)", "(b)", "(c)", "(d)"] as const;

/**
 * Render a 2x2 grid. `primary` must hold four datasets; `secondary`, when
 * given, overlays a second dataset per panel, colored by shot count. All
 * eight inputs must share one time grid.
 */
export function renderGridFigure(primary: Dataset[], secondary?: Dataset[]): string {
  if (primary.length !== 4) {
    throw new Error(`grid needs exactly 4 datasets, got ${primary.length}`);
  }
  if (secondary !== undefined && secondary.length !== 4) {
    throw new Error(`second series needs exactly 4 datasets, got ${secondary.length}`);
  }
  assertSharedTimeGrid([...primary, ...(secondary ?? [])]);

  const groups: string[] = [];
  for (let i = 0; i < 4; i++) {
    const datasets = secondary === undefined ? [primary[i]] : [primary[i], secondary[i]];
    const tx = (i % 2) * PANEL_W;
    const ty = Math.floor(i / 2) * PANEL_H;
    groups.push(panelGroup({ label: GRID_LABELS[i], datasets }, tx, ty));
  }
  return document(2 * PANEL_W, 2 * PANEL_H, groups.join("\n"));
}
