/**
 * The two figure layouts.
 *
 * fig1: outage sum rate vs transmit power, NOMA vs the single-user baseline,
 *       one pair of curves per input CSV (e.g. Rayleigh and mmWave sweeps).
 * fig2: outage probabilities on a log axis with closed-form overlays and the
 *       perfect-beamforming reference; analytical series are solid lines,
 *       simulated series markers, with error bars once they exceed the line
 *       width on screen.
 */

import * as path from "path";

import { CurveTable, PlotError, SeriesPoint, seriesPoints } from "./csv";
import { linearScale, logScale, Scale } from "./scale";
import * as svg from "./svg";
import { MarkerShape } from "./svg";

export type FigureKind = "fig1" | "fig2";

export interface PlotSpec {
  figure: FigureKind;
  csvPaths: string[];
  outPath: string;
  format: "svg" | "png";
}

const WIDTH = 720;
const HEIGHT = 500;
const MARGIN = { left: 78, right: 24, top: 30, bottom: 58 };
const PLOT = {
  x0: MARGIN.left,
  x1: WIDTH - MARGIN.right,
  y0: HEIGHT - MARGIN.bottom, // pixel of the domain minimum
  y1: MARGIN.top,
};
const AXIS_STYLE = 'stroke="black" stroke-width="1"';
const GRID_STYLE = 'stroke="#dddddd" stroke-width="0.5"';
const FONT = 'font-family="Helvetica,Arial,sans-serif" font-size="12"';
const ERROR_BAR_MIN_PX = 2.0; // draw bars only when taller than the line width

interface SeriesDef {
  name: string;
  label: string;
  color: string;
  shape: MarkerShape | null;
  dash: string | null; // stroke-dasharray or null for solid
  drawLine: boolean;
  errorBars: boolean;
}

const FIG1_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
const FIG1_SHAPES: MarkerShape[] = ["circle", "square", "triangle", "diamond"];

function fig1Series(tables: CurveTable[]): Array<{ def: SeriesDef; pts: SeriesPoint[] }> {
  const out: Array<{ def: SeriesDef; pts: SeriesPoint[] }> = [];
  tables.forEach((table, i) => {
    const stem = path.basename(table.path).replace(/\.csv$/i, "");
    const color = FIG1_COLORS[i % FIG1_COLORS.length];
    out.push({
      def: {
        name: "noma_sum_rate",
        label: `${stem}: NOMA`,
        color,
        shape: FIG1_SHAPES[(2 * i) % FIG1_SHAPES.length],
        dash: null,
        drawLine: true,
        errorBars: false,
      },
      pts: seriesPoints(table, "noma_sum_rate"),
    });
    out.push({
      def: {
        name: "oma_sum_rate",
        label: `${stem}: no NOMA`,
        color,
        shape: FIG1_SHAPES[(2 * i + 1) % FIG1_SHAPES.length],
        dash: "6 3",
        drawLine: true,
        errorBars: false,
      },
      pts: seriesPoints(table, "oma_sum_rate"),
    });
  });
  return out;
}

const FIG2_DEFS: SeriesDef[] = [
  { name: "outage_s1", label: "S1 user, quantized beams (sim)",
    color: "#1f77b4", shape: "circle", dash: null, drawLine: false, errorBars: true },
  { name: "outage_s1_analytical", label: "S1 user, closed form",
    color: "#1f77b4", shape: null, dash: null, drawLine: true, errorBars: false },
  { name: "outage_s2", label: "S2 user, paired (sim)",
    color: "#d62728", shape: "triangle", dash: null, drawLine: false, errorBars: true },
  { name: "outage_s2_analytical", label: "S2 user, closed form",
    color: "#d62728", shape: null, dash: null, drawLine: true, errorBars: false },
  { name: "outage_s1_perfect", label: "S1 user, perfect beams (sim)",
    color: "#2ca02c", shape: "diamond", dash: null, drawLine: false, errorBars: true },
];

function tickLabel(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) {
    const e = Math.round(Math.log10(Math.abs(v)));
    if (Math.abs(v - Math.sign(v) * Math.pow(10, e)) < Math.abs(v) * 1e-9) {
      return `${v < 0 ? "-" : ""}1e${e}`;
    }
    return v.toExponential(1);
  }
  return Number.isInteger(v) ? String(v) : String(Number(v.toPrecision(6)));
}

function axes(xs: Scale, ys: Scale, xLabel: string, yLabel: string, logY: boolean): string {
  const parts: string[] = [];
  for (const t of xs.ticks) {
    const px = xs.toPixel(t);
    parts.push(svg.line(px, PLOT.y0, px, PLOT.y1, GRID_STYLE));
    parts.push(svg.line(px, PLOT.y0, px, PLOT.y0 + 5, AXIS_STYLE));
    parts.push(svg.text(px, PLOT.y0 + 20, tickLabel(t), `${FONT} text-anchor="middle"`));
  }
  for (const t of ys.ticks) {
    const py = ys.toPixel(t);
    parts.push(svg.line(PLOT.x0, py, PLOT.x1, py, GRID_STYLE));
    parts.push(svg.line(PLOT.x0 - 5, py, PLOT.x0, py, AXIS_STYLE));
    parts.push(svg.text(PLOT.x0 - 8, py + 4, tickLabel(t),
      `${FONT} text-anchor="end"`));
  }
  parts.push(svg.line(PLOT.x0, PLOT.y0, PLOT.x1, PLOT.y0, AXIS_STYLE));
  parts.push(svg.line(PLOT.x0, PLOT.y0, PLOT.x0, PLOT.y1, AXIS_STYLE));
  parts.push(svg.text((PLOT.x0 + PLOT.x1) / 2, HEIGHT - 16, xLabel,
    `${FONT} text-anchor="middle"`));
  parts.push(svg.text(18, (PLOT.y0 + PLOT.y1) / 2,
    yLabel + (logY ? " (log scale)" : ""),
    `${FONT} text-anchor="middle" transform="rotate(-90 18 ${(PLOT.y0 + PLOT.y1) / 2})"`));
  return parts.join("\n");
}

function drawSeries(
  def: SeriesDef, pts: SeriesPoint[], xs: Scale, ys: Scale, logY: boolean,
): string {
  const usable = logY ? pts.filter((p) => p.y > 0) : pts;
  const parts: string[] = [];
  const pix = usable.map((p) => [xs.toPixel(p.x), ys.toPixel(p.y)] as [number, number]);
  if (def.drawLine && pix.length > 1) {
    const dash = def.dash ? ` stroke-dasharray="${def.dash}"` : "";
    parts.push(svg.polyline(pix, `stroke="${def.color}" stroke-width="1.8"${dash}`));
  }
  if (def.errorBars) {
    for (const p of usable) {
      if (p.ci <= 0) continue;
      const yLoVal = logY ? Math.max(p.y - p.ci, ys.domain[0]) : p.y - p.ci;
      const pxX = xs.toPixel(p.x);
      const pyHi = ys.toPixel(p.y + p.ci);
      const pyLo = ys.toPixel(yLoVal);
      if (Math.abs(pyLo - pyHi) <= ERROR_BAR_MIN_PX) continue;
      const st = `stroke="${def.color}" stroke-width="1"`;
      parts.push(svg.line(pxX, pyLo, pxX, pyHi, st));
      parts.push(svg.line(pxX - 3, pyHi, pxX + 3, pyHi, st));
      parts.push(svg.line(pxX - 3, pyLo, pxX + 3, pyLo, st));
    }
  }
  if (def.shape) {
    for (const [px, py] of pix) {
      parts.push(svg.marker(def.shape, px, py, 4, def.color));
    }
  }
  return parts.join("\n");
}

function legend(defs: SeriesDef[]): string {
  const lineH = 18;
  const boxW = 250;
  const x = PLOT.x1 - boxW - 8;
  const y = PLOT.y1 + 8;
  const parts: string[] = [
    `<rect x="${svg.fmt(x)}" y="${svg.fmt(y)}" width="${boxW}" ` +
    `height="${defs.length * lineH + 10}" fill="white" stroke="#999999" stroke-width="0.8"/>`,
  ];
  defs.forEach((def, i) => {
    const cy = y + 14 + i * lineH;
    if (def.drawLine) {
      const dash = def.dash ? ` stroke-dasharray="${def.dash}"` : "";
      parts.push(svg.line(x + 8, cy - 4, x + 40, cy - 4,
        `stroke="${def.color}" stroke-width="1.8"${dash}`));
    }
    if (def.shape) {
      parts.push(svg.marker(def.shape, x + 24, cy - 4, 4, def.color));
    }
    parts.push(svg.text(x + 48, cy, def.label, FONT));
  });
  return parts.join("\n");
}

export function renderFigure(spec: PlotSpec, tables: CurveTable[]): string {
  if (spec.figure === "fig1") {
    return renderFig1(tables);
  }
  return renderFig2(tables);
}

function renderFig1(tables: CurveTable[]): string {
  if (tables.length < 1) {
    throw new PlotError("fig1 needs at least one CSV", 3);
  }
  const series = fig1Series(tables);
  const xsAll = series.flatMap((s) => s.pts.map((p) => p.x));
  const ysAll = series.flatMap((s) => s.pts.map((p) => p.y));
  const xs = linearScale(Math.min(...xsAll), Math.max(...xsAll), PLOT.x0, PLOT.x1, 9);
  const ys = linearScale(0, Math.max(...ysAll, 1e-9), PLOT.y0, PLOT.y1, 7);
  const body = [
    axes(xs, ys, "Transmit power (dBm)", "Outage sum rate (BPCU)", false),
    ...series.map((s) => drawSeries(s.def, s.pts, xs, ys, false)),
    legend(series.map((s) => s.def)),
  ].join("\n");
  return svg.document(WIDTH, HEIGHT, body);
}

function renderFig2(tables: CurveTable[]): string {
  if (tables.length !== 1) {
    throw new PlotError("fig2 takes exactly one CSV", 3);
  }
  const table = tables[0];
  const series = FIG2_DEFS.map((def) => ({ def, pts: seriesPoints(table, def.name) }));
  const xsAll = series.flatMap((s) => s.pts.map((p) => p.x));
  const positives = series.flatMap((s) => s.pts.map((p) => p.y).filter((y) => y > 0));
  if (positives.length === 0) {
    throw new PlotError(`${table.path}: no positive outage values to draw`, 4);
  }
  const yMin = Math.min(...positives);
  const yMax = Math.max(...positives);
  const xs = linearScale(Math.min(...xsAll), Math.max(...xsAll), PLOT.x0, PLOT.x1, 9);
  const ys = logScale(Math.max(yMin, 1e-12), Math.max(yMax, 1e-12), PLOT.y0, PLOT.y1);
  const body = [
    axes(xs, ys, "Transmit power (dBm)", "Outage probability", true),
    ...series.map((s) => drawSeries(s.def, s.pts, xs, ys, true)),
    legend(series.map((s) => s.def)),
  ].join("\n");
  return svg.document(WIDTH, HEIGHT, body);
}
