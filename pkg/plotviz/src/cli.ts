#!/usr/bin/env node
/**
 * plot --csv FILE [--csv FILE2 ...] --kind contour|prob_line|error_line|runtime
 *      [--fix AXIS=VALUE] [--levels 0.5,0.95] [--metric lw1|l2] --out IMG.svg
 *
 * Writes the SVG image plus a `.series.txt` sidecar with the exact plotted
 * data.  AXIS is one of m_over_N, s_over_m_norm, s_over_m.
 */

import { writeFileSync } from "node:fs";
import { CsvSchemaError, EmptySelectionError, readCsvFiles } from "./csv.js";
import { buildPlot, FixSpec, PlotKind } from "./series.js";
import { renderSvg } from "./svg.js";
import { sidecarDump } from "./sidecar.js";

interface Args {
  csv: string[];
  kind: PlotKind;
  fix: FixSpec | null;
  levels: number[];
  metric: "lw1" | "l2";
  out: string;
}

export function parseArgs(argv: string[]): Args {
  const args: Args = {
    csv: [], kind: "contour", fix: null, levels: [0.5, 0.95],
    metric: "lw1", out: "",
  };
  let kindSeen = false;
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const need = (): string => {
      if (i + 1 >= argv.length) throw new Error(`${flag} needs a value`);
      return argv[++i];
    };
    switch (flag) {
      case "--csv": args.csv.push(need()); break;
      case "--kind": {
        const v = need();
        if (!["contour", "prob_line", "error_line", "runtime"].includes(v)) {
          throw new Error(`unknown kind ${v}`);
        }
        args.kind = v as PlotKind;
        kindSeen = true;
        break;
      }
      case "--fix": {
        const v = need();
        const eq = v.indexOf("=");
        if (eq < 0) throw new Error(`--fix expects AXIS=VALUE, got ${v}`);
        const axis = v.slice(0, eq);
        if (!["m_over_N", "s_over_m_norm", "s_over_m"].includes(axis)) {
          throw new Error(`--fix axis must be m_over_N, s_over_m_norm or s_over_m`);
        }
        const value = Number(v.slice(eq + 1));
        if (!Number.isFinite(value)) throw new Error(`--fix value is not a number`);
        args.fix = { axis: axis as FixSpec["axis"], value };
        break;
      }
      case "--levels":
        args.levels = need().split(",").map(Number);
        if (args.levels.some((l) => !Number.isFinite(l))) {
          throw new Error("--levels expects comma-separated numbers");
        }
        break;
      case "--metric": {
        const v = need();
        if (v !== "lw1" && v !== "l2") throw new Error("--metric must be lw1 or l2");
        args.metric = v;
        break;
      }
      case "--out": args.out = need(); break;
      default: throw new Error(`unknown flag ${flag}`);
    }
  }
  if (args.csv.length === 0) throw new Error("at least one --csv is required");
  if (!args.out) throw new Error("--out is required");
  if (!kindSeen) throw new Error("--kind is required");
  return args;
}

export function sidecarPath(out: string): string {
  return out.replace(/\.svg$/i, "") + ".series.txt";
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 64;
  }
  try {
    const rows = readCsvFiles(args.csv);
    const plot = buildPlot(rows, args.kind, args.fix, args.levels, args.metric);
    if (plot.snap) {
      console.error(
        `fixed ${plot.snap.axis} snapped to ${plot.snap.snapped} ` +
        `(requested ${plot.snap.requested}, distance ${plot.snap.distance})`);
    }
    const title = `${args.kind} - ${args.csv.join(", ")}`;
    writeFileSync(args.out, renderSvg(plot, title));
    writeFileSync(sidecarPath(args.out), sidecarDump(plot));
    console.error(`wrote ${args.out} and ${sidecarPath(args.out)}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvSchemaError) {
      console.error(`schema error: ${err.message}`);
      return 65;
    }
    if (err instanceof EmptySelectionError) {
      console.error(`empty selection: ${err.message}`);
      return 65;
    }
    console.error(`error: ${(err as Error).message}`);
    return 66;
  }
}

const isMain = process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() as string);
if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
