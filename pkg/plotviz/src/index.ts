export { GridRow, parseCsv, readCsvFiles, CsvSchemaError, EmptySelectionError } from "./csv.js";
export { contourPolylines, Point, ValueGrid } from "./contour.js";
export { buildPlot, snapAxis, BuiltPlot, FixSpec, PlotKind, Series } from "./series.js";
export { renderSvg } from "./svg.js";
export { sidecarDump } from "./sidecar.js";
export { run, parseArgs, sidecarPath } from "./cli.js";
