import { BuiltPlot } from "./series.js";

/**
 * Deterministic text dump of every plotted series, for golden-file testing.
 * Numbers use JavaScript's shortest round-trip formatting, so identical CSV
 * input always produces byte-identical output.
 */
export function sidecarDump(plot: BuiltPlot): string {
  const lines: string[] = [];
  lines.push("# plotviz series dump");
  lines.push(`# kind: ${plot.kind}`);
  lines.push(`# x: ${plot.xLabel}`);
  lines.push(`# y: ${plot.yLabel}`);
  if (plot.snap) {
    lines.push(
      `# fix: ${plot.snap.axis}=${String(plot.snap.snapped)} ` +
      `(requested ${String(plot.snap.requested)}, ` +
      `snap distance ${String(plot.snap.distance)})`);
  }
  const ordered = [...plot.series].sort((a, b) => a.name.localeCompare(b.name, "en"));
  for (const s of ordered) {
    lines.push(`# series: ${s.name} style=${s.style} paths=${s.paths.length}`);
    s.paths.forEach((path, i) => {
      if (i > 0) lines.push("");
      for (const [x, y] of path) {
        lines.push(`${String(x)} ${String(y)}`);
      }
    });
  }
  return lines.join("\n") + "\n";
}
