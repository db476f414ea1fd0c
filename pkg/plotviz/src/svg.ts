import { BuiltPlot, Series } from "./series.js";
import { Point } from "./contour.js";

const WIDTH = 640;
const HEIGHT = 480;
const MARGIN = { left: 64, right: 160, top: 24, bottom: 48 };

const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
  "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];

interface Scale {
  (v: number): number;
  domain: [number, number];
}

function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  return f;
}

function extent(series: Series[], dim: 0 | 1): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const s of series) {
    for (const path of s.paths) {
      for (const p of path) {
        lo = Math.min(lo, p[dim]);
        hi = Math.max(hi, p[dim]);
      }
    }
  }
  if (!Number.isFinite(lo)) {
    lo = 0;
    hi = 1;
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  return [lo, hi];
}

function ticks([lo, hi]: [number, number], count = 5): number[] {
  const out: number[] = [];
  for (let i = 0; i <= count; i++) out.push(lo + ((hi - lo) * i) / count);
  return out;
}

function fmt(v: number): string {
  const a = Math.abs(v);
  if (a !== 0 && (a < 1e-3 || a >= 1e4)) return v.toExponential(2);
  return String(Math.round(v * 1e6) / 1e6);
}

function pathData(path: Point[], sx: Scale, sy: Scale): string {
  return path
    .map((p, i) => `${i === 0 ? "M" : "L"}${sx(p[0]).toFixed(2)},${sy(p[1]).toFixed(2)}`)
    .join("");
}

/** Render a built plot as a standalone SVG document. */
export function renderSvg(plot: BuiltPlot, title: string): string {
  const sx = linearScale(extent(plot.series, 0), [MARGIN.left, WIDTH - MARGIN.right]);
  const sy = linearScale(extent(plot.series, 1), [HEIGHT - MARGIN.bottom, MARGIN.top]);

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(`<text x="${MARGIN.left}" y="16" font-family="sans-serif" font-size="13">${title}</text>`);

  // axes
  const x0 = MARGIN.left, x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom, y1 = MARGIN.top;
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="black"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="black"/>`);
  for (const t of ticks(sx.domain)) {
    const px = sx(t).toFixed(2);
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`);
    parts.push(`<text x="${px}" y="${y0 + 18}" font-family="sans-serif" font-size="10" text-anchor="middle">${fmt(t)}</text>`);
  }
  for (const t of ticks(sy.domain)) {
    const py = sy(t).toFixed(2);
    parts.push(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
    parts.push(`<text x="${x0 - 8}" y="${py}" font-family="sans-serif" font-size="10" text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`);
  }
  parts.push(`<text x="${(x0 + x1) / 2}" y="${HEIGHT - 8}" font-family="sans-serif" font-size="12" text-anchor="middle">${plot.xLabel}</text>`);
  parts.push(`<text x="16" y="${(y0 + y1) / 2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 16 ${(y0 + y1) / 2})">${plot.yLabel}</text>`);

  // one colour per kind/decoder group; level curves share the group colour
  const groups = [...new Set(plot.series.map((s) => s.name.split(" ")[0]))].sort();
  plot.series.forEach((s) => {
    const colour = PALETTE[groups.indexOf(s.name.split(" ")[0]) % PALETTE.length];
    const dash = s.style === "dashed" ? ` stroke-dasharray="6,4"` : "";
    for (const path of s.paths) {
      if (path.length === 0) continue;
      if (path.length === 1) {
        parts.push(`<circle cx="${sx(path[0][0]).toFixed(2)}" cy="${sy(path[0][1]).toFixed(2)}" r="3" fill="${colour}"/>`);
      } else {
        parts.push(`<path d="${pathData(path, sx, sy)}" fill="none" stroke="${colour}" stroke-width="1.5"${dash}/>`);
      }
    }
  });

  // legend
  plot.series.forEach((s, i) => {
    const colour = PALETTE[groups.indexOf(s.name.split(" ")[0]) % PALETTE.length];
    const ly = MARGIN.top + 14 * i;
    const dash = s.style === "dashed" ? ` stroke-dasharray="6,4"` : "";
    parts.push(`<line x1="${x1 + 8}" y1="${ly}" x2="${x1 + 28}" y2="${ly}" stroke="${colour}" stroke-width="1.5"${dash}/>`);
    parts.push(`<text x="${x1 + 32}" y="${ly + 3}" font-family="sans-serif" font-size="10">${s.name}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
