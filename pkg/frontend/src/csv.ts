import Papa from "papaparse";
import { z } from "zod";

export const CSV_COLUMNS = [
  "t",
  "theta21",
  "theta32",
  "theta31",
  "w0",
  "w1",
  "w2",
  "w3",
  "jz_mean",
  "jz_var",
  "jz_exact_me",
  "n_shots",
  "n_ave",
  "seed",
] as const;

/** One data row of an experiment CSV, numbers already parsed. */
export interface ExperimentRow {
  t: number;
  theta21: number;
  theta32: number;
  theta31: number;
  weights: Array<number | null>;
  jzMean: number;
  jzVar: number;
  jzExact: number;
  nShots: number;
  nAve: number;
  seed: number;
}

/** A parsed CSV file: its rows plus the shot count they all share. */
export interface Dataset {
  source: string;
  rows: ExperimentRow[];
  nShots: number;
  times: number[];
}

const finiteNumber = z.string().transform((s, ctx) => {
  const v = Number(s);
  if (s.trim() === "" || !Number.isFinite(v)) {
    ctx.addIssue({ code: z.ZodIssueCode.custom, message: `not a finite number: "${s}"` });
    return z.NEVER;
  }
  return v;
});

const blankOrNumber = z.string().transform((s, ctx) => {
  if (s === "") return null;
  const v = Number(s);
  if (!Number.isFinite(v)) {
    ctx.addIssue({ code: z.ZodIssueCode.custom, message: `not blank or a number: "${s}"` });
    return z.NEVER;
  }
  return v;
});

const integer = finiteNumber.refine((v) => Number.isInteger(v), {
  message: "not an integer",
});

const rawRow = z.object({
  t: finiteNumber,
  theta21: finiteNumber,
  theta32: finiteNumber,
  theta31: finiteNumber,
  w0: finiteNumber,
  w1: finiteNumber,
  w2: blankOrNumber,
  w3: blankOrNumber,
  jz_mean: finiteNumber,
  jz_var: finiteNumber,
  jz_exact_me: finiteNumber,
  n_shots: integer,
  n_ave: integer,
  seed: integer,
});

/**
 * Parse and validate one experiment CSV. Throws with a message naming the
 * file, row, and column on any schema mismatch; an empty file (no data
 * rows) is an error as well.
 */
export function parseExperimentCsv(text: string, source = "csv"): Dataset {
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    const where = first.row === undefined ? "" : ` (row ${first.row + 2})`;
    throw new Error(`${source}: malformed CSV${where}: ${first.message}`);
  }
  const header = (parsed.meta.fields ?? []).join(",");
  const expected = CSV_COLUMNS.join(",");
  if (header !== expected) {
    throw new Error(`${source}: header mismatch: expected "${expected}", got "${header}"`);
  }
  if (parsed.data.length === 0) {
    throw new Error(`${source}: no data rows`);
  }

  const rows = parsed.data.map((raw, i) => {
    const result = rawRow.safeParse(raw);
    if (!result.success) {
      const issue = result.error.issues[0];
      throw new Error(`${source} row ${i + 2}: column ${issue.path.join(".")}: ${issue.message}`);
    }
    const r = result.data;
    return {
      t: r.t,
      theta21: r.theta21,
      theta32: r.theta32,
      theta31: r.theta31,
      weights: [r.w0, r.w1, r.w2, r.w3],
      jzMean: r.jz_mean,
      jzVar: r.jz_var,
      jzExact: r.jz_exact_me,
      nShots: r.n_shots,
      nAve: r.n_ave,
      seed: r.seed,
    } satisfies ExperimentRow;
  });

  const nShots = rows[0].nShots;
  for (const [i, row] of rows.entries()) {
    if (row.nShots !== nShots) {
      throw new Error(
        `${source} row ${i + 2}: n_shots ${row.nShots} differs from ${nShots} in the first row`,
      );
    }
    if (row.jzVar < 0) {
      throw new Error(`${source} row ${i + 2}: negative variance ${row.jzVar}`);
    }
  }

  return { source, rows, nShots, times: rows.map((r) => r.t) };
}

/** Require every dataset to carry the identical time column. */
export function assertSharedTimeGrid(datasets: Dataset[]): void {
  if (datasets.length < 2) return;
  const reference = datasets[0];
  for (const other of datasets.slice(1)) {
    if (other.times.length !== reference.times.length) {
      throw new Error(
        `${other.source}: ${other.times.length} rows, but ${reference.source} has ${reference.times.length}`,
      );
    }
    for (let i = 0; i < reference.times.length; i++) {
      if (other.times[i] !== reference.times[i]) {
        throw new Error(
          `${other.source} row ${i + 2}: t=${other.times[i]} does not match ` +
            `${reference.source} (t=${reference.times[i]}); all inputs must share the time grid`,
        );
      }
    }
  }
}
