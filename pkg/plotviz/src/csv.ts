import { readFileSync } from "node:fs";

/** One cell of the experiment harness's phase/benchmark grid CSV. */
export interface GridRow {
  kind: string;
  decoder: string;
  m_over_N: number;
  s_over_m_norm: number;
  m: number;
  s: number;
  k: number;
  trials: number;
  successes: number;
  prob: number;
  mean_rel_err_l2: number;
  mean_rel_err_lw1: number;
  mean_runtime_s: number;
}

export const REQUIRED_COLUMNS = [
  "kind", "decoder", "m_over_N", "s_over_m_norm", "m", "s", "k", "trials",
  "successes", "prob", "mean_rel_err_l2", "mean_rel_err_lw1", "mean_runtime_s",
] as const;

const STRING_COLUMNS = new Set(["kind", "decoder"]);

export class CsvSchemaError extends Error {}
export class EmptySelectionError extends Error {}

/** Parse one grid CSV; raises CsvSchemaError with a column diagnostic. */
export function parseCsv(text: string, source: string): GridRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    throw new CsvSchemaError(`${source}: empty file, expected a header row`);
  }
  const header = lines[0].split(",");
  const missing = REQUIRED_COLUMNS.filter((c) => !header.includes(c));
  const extra = header.filter((c) => !(REQUIRED_COLUMNS as readonly string[]).includes(c));
  if (missing.length > 0 || extra.length > 0) {
    throw new CsvSchemaError(
      `${source}: header mismatch; missing columns [${missing.join(", ")}], ` +
      `unexpected columns [${extra.join(", ")}]`);
  }
  const rows: GridRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== header.length) {
      throw new CsvSchemaError(
        `${source}:${i + 1}: expected ${header.length} fields, got ${parts.length}`);
    }
    const row: Record<string, string | number> = {};
    header.forEach((col, j) => {
      if (STRING_COLUMNS.has(col)) {
        row[col] = parts[j];
      } else {
        const v = Number(parts[j]);
        if (!Number.isFinite(v)) {
          throw new CsvSchemaError(
            `${source}:${i + 1}: column ${col} is not a finite number: ${parts[j]}`);
        }
        row[col] = v;
      }
    });
    rows.push(row as unknown as GridRow);
  }
  return rows;
}

/** Read and concatenate one or more grid CSV files. */
export function readCsvFiles(paths: string[]): GridRow[] {
  const rows: GridRow[] = [];
  for (const p of paths) {
    rows.push(...parseCsv(readFileSync(p, "utf8"), p));
  }
  return rows;
}
