/** Marching squares with linear interpolation on a rectilinear value grid. */

export type Point = [number, number];

export interface ValueGrid {
  xs: number[];          // ascending axis sample positions
  ys: number[];
  values: number[][];    // values[yi][xi]
}

function interp(a: number, b: number, va: number, vb: number, level: number): number {
  if (va === vb) return (a + b) / 2;
  return a + ((level - va) / (vb - va)) * (b - a);
}

function segmentsForCell(
  g: ValueGrid, xi: number, yi: number, level: number): Array<[Point, Point]> {
  const x0 = g.xs[xi], x1 = g.xs[xi + 1];
  const y0 = g.ys[yi], y1 = g.ys[yi + 1];
  const v00 = g.values[yi][xi], v10 = g.values[yi][xi + 1];
  const v01 = g.values[yi + 1][xi], v11 = g.values[yi + 1][xi + 1];
  let idx = 0;
  if (v00 >= level) idx |= 1;
  if (v10 >= level) idx |= 2;
  if (v11 >= level) idx |= 4;
  if (v01 >= level) idx |= 8;
  if (idx === 0 || idx === 15) return [];

  // crossing points on the four cell edges
  const bottom: Point = [interp(x0, x1, v00, v10, level), y0];
  const top: Point = [interp(x0, x1, v01, v11, level), y1];
  const left: Point = [x0, interp(y0, y1, v00, v01, level)];
  const right: Point = [x1, interp(y0, y1, v10, v11, level)];

  switch (idx) {
    case 1: case 14: return [[left, bottom]];
    case 2: case 13: return [[bottom, right]];
    case 3: case 12: return [[left, right]];
    case 4: case 11: return [[right, top]];
    case 6: case 9: return [[bottom, top]];
    case 7: case 8: return [[left, top]];
    case 5: case 10: {
      // saddle: disambiguate with the cell-center average
      const center = (v00 + v10 + v01 + v11) / 4;
      if ((idx === 5) === (center >= level)) {
        return [[left, top], [bottom, right]];
      }
      return [[left, bottom], [right, top]];
    }
    default: return [];
  }
}

const KEY_DIGITS = 12;

function key(p: Point): string {
  return `${p[0].toFixed(KEY_DIGITS)}|${p[1].toFixed(KEY_DIGITS)}`;
}

/** Chain a segment soup into polylines (deterministic order). */
function chain(segments: Array<[Point, Point]>): Point[][] {
  const unused = segments.map((s, i) => i);
  const byEnd = new Map<string, number[]>();
  segments.forEach(([a, b], i) => {
    for (const p of [a, b]) {
      const k = key(p);
      if (!byEnd.has(k)) byEnd.set(k, []);
      byEnd.get(k)!.push(i);
    }
  });
  const used = new Array(segments.length).fill(false);
  const polylines: Point[][] = [];

  for (const start of unused) {
    if (used[start]) continue;
    used[start] = true;
    const line: Point[] = [segments[start][0], segments[start][1]];
    // extend forward then backward
    for (const dir of [1, -1] as const) {
      for (;;) {
        const tip = dir === 1 ? line[line.length - 1] : line[0];
        const candidates = (byEnd.get(key(tip)) ?? []).filter((i) => !used[i]);
        if (candidates.length === 0) break;
        const i = candidates[0];
        used[i] = true;
        const [a, b] = segments[i];
        const next = key(a) === key(tip) ? b : a;
        if (dir === 1) line.push(next);
        else line.unshift(next);
      }
    }
    polylines.push(line);
  }
  return polylines;
}

/** Level-set polylines of the grid at the given threshold. */
export function contourPolylines(g: ValueGrid, level: number): Point[][] {
  const segments: Array<[Point, Point]> = [];
  for (let yi = 0; yi < g.ys.length - 1; yi++) {
    for (let xi = 0; xi < g.xs.length - 1; xi++) {
      segments.push(...segmentsForCell(g, xi, yi, level));
    }
  }
  return chain(segments);
}
