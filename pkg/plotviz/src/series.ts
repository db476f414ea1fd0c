import { GridRow, EmptySelectionError } from "./csv.js";
import { contourPolylines, Point, ValueGrid } from "./contour.js";

export type PlotKind = "contour" | "prob_line" | "error_line" | "runtime";

export interface Series {
  name: string;              // e.g. "expander/weighted" or ".../level=0.5"
  style: "solid" | "dashed";
  paths: Point[][];          // line kinds carry a single path
}

export interface FixSpec {
  axis: "m_over_N" | "s_over_m_norm" | "s_over_m";
  value: number;
}

export interface SnapReport {
  axis: string;
  requested: number;
  snapped: number;
  distance: number;
}

export interface BuiltPlot {
  kind: PlotKind;
  series: Series[];
  snap: SnapReport | null;
  xLabel: string;
  yLabel: string;
}

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

function groupKeys(rows: GridRow[]): string[] {
  return [...new Set(rows.map((r) => `${r.kind}/${r.decoder}`))].sort();
}

function axisValue(row: GridRow, axis: FixSpec["axis"]): number {
  if (axis === "s_over_m") return row.s / row.m;
  return row[axis];
}

/** Snap a requested fixed-axis value to the nearest grid value. */
export function snapAxis(rows: GridRow[], fix: FixSpec): SnapReport {
  const values = uniqueSorted(rows.map((r) => axisValue(r, fix.axis)));
  if (values.length === 0) {
    throw new EmptySelectionError("no rows to snap the fixed axis against");
  }
  let snapped = values[0];
  for (const v of values) {
    if (Math.abs(v - fix.value) < Math.abs(snapped - fix.value)) snapped = v;
  }
  return {
    axis: fix.axis,
    requested: fix.value,
    snapped,
    distance: Math.abs(snapped - fix.value),
  };
}

function lineSeries(
  rows: GridRow[], fix: FixSpec, yColumn: (r: GridRow) => number,
): { series: Series[]; snap: SnapReport; xLabel: string } {
  const snap = snapAxis(rows, fix);
  const fixed = rows.filter((r) => axisValue(r, fix.axis) === snap.snapped);
  if (fixed.length === 0) throw new EmptySelectionError("fixed-axis selection is empty");
  const xAxis: FixSpec["axis"] = fix.axis === "m_over_N" ? "s_over_m_norm" : "m_over_N";
  const series: Series[] = groupKeys(fixed).map((name) => {
    const pts = fixed
      .filter((r) => `${r.kind}/${r.decoder}` === name)
      .map((r): Point => [axisValue(r, xAxis), yColumn(r)])
      .sort((a, b) => a[0] - b[0]);
    return { name, style: "solid", paths: [pts] };
  });
  return { series, snap, xLabel: xAxis };
}

/** Rebuild the (x, y) -> value grid for one kind/decoder group. */
function valueGrid(rows: GridRow[], value: (r: GridRow) => number): ValueGrid {
  const xs = uniqueSorted(rows.map((r) => r.m_over_N));
  const ys = uniqueSorted(rows.map((r) => r.s_over_m_norm));
  const values: number[][] = ys.map(() => xs.map(() => NaN));
  for (const r of rows) {
    values[ys.indexOf(r.s_over_m_norm)][xs.indexOf(r.m_over_N)] = value(r);
  }
  for (const rowVals of values) {
    for (const v of rowVals) {
      if (!Number.isFinite(v)) {
        throw new EmptySelectionError(
          "grid is incomplete: some (m_over_N, s_over_m_norm) cells are missing");
      }
    }
  }
  return { xs, ys, values };
}

export function buildPlot(
  rows: GridRow[], kind: PlotKind, fix: FixSpec | null,
  levels: number[] = [0.5, 0.95], metric: "lw1" | "l2" = "lw1",
): BuiltPlot {
  if (rows.length === 0) {
    throw new EmptySelectionError("no data rows: nothing to plot");
  }
  if (kind === "contour") {
    const series: Series[] = [];
    for (const name of groupKeys(rows)) {
      const group = rows.filter((r) => `${r.kind}/${r.decoder}` === name);
      const grid = valueGrid(group, (r) => r.prob);
      for (const level of levels) {
        series.push({
          name: `${name} level=${String(level)}`,
          style: level >= 0.95 ? "dashed" : "solid",
          paths: contourPolylines(grid, level),
        });
      }
    }
    return { kind, series, snap: null, xLabel: "m_over_N", yLabel: "s_over_m_norm" };
  }

  if (kind === "prob_line") {
    if (!fix) throw new EmptySelectionError("prob_line needs --fix AXIS=VALUE");
    const { series, snap, xLabel } = lineSeries(rows, fix, (r) => r.prob);
    return { kind, series, snap, xLabel, yLabel: "prob" };
  }

  if (kind === "error_line") {
    if (!fix) throw new EmptySelectionError("error_line needs --fix AXIS=VALUE");
    const col = metric === "lw1"
      ? (r: GridRow) => r.mean_rel_err_lw1
      : (r: GridRow) => r.mean_rel_err_l2;
    const { series, snap, xLabel } = lineSeries(rows, fix, col);
    return { kind, series, snap, xLabel, yLabel: `mean_rel_err_${metric}` };
  }

  if (kind === "runtime") {
    if (fix) {
      const { series, snap, xLabel } = lineSeries(rows, fix, (r) => r.mean_runtime_s);
      return { kind, series, snap, xLabel, yLabel: "mean_runtime_s" };
    }
    // no fixed axis: average runtime over the s/m axis per m_over_N
    const series: Series[] = groupKeys(rows).map((name) => {
      const group = rows.filter((r) => `${r.kind}/${r.decoder}` === name);
      const xs = uniqueSorted(group.map((r) => r.m_over_N));
      const pts = xs.map((x): Point => {
        const cell = group.filter((r) => r.m_over_N === x);
        const mean = cell.reduce((acc, r) => acc + r.mean_runtime_s, 0) / cell.length;
        return [x, mean];
      });
      return { name, style: "solid" as const, paths: [pts] };
    });
    return { kind, series, snap: null, xLabel: "m_over_N", yLabel: "mean_runtime_s" };
  }

  throw new EmptySelectionError(`unknown plot kind ${kind}`);
}
