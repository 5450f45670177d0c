#!/usr/bin/env node
/**
 * plot-figs --figure fig1|fig2 --csv <paths...> --out <file> [--format svg|png]
 *
 * Exit codes: 0 ok, 2 I/O error, 3 bad arguments or missing series,
 * 4 malformed CSV, 5 PNG rasterizer unavailable.
 */

import * as fs from "fs";

import { CurveTable, parseCurveCsv, PlotError } from "./csv";
import { FigureKind, PlotSpec, renderFigure } from "./figures";

export function parseArgs(argv: string[]): PlotSpec {
  let figure: FigureKind | null = null;
  const csvPaths: string[] = [];
  let outPath: string | null = null;
  let format: "svg" | "png" = "svg";

  let i = 0;
  while (i < argv.length) {
    const arg = argv[i];
    switch (arg) {
      case "--figure": {
        const v = argv[++i];
        if (v !== "fig1" && v !== "fig2") {
          throw new PlotError(`--figure must be fig1 or fig2, got '${v}'`, 3);
        }
        figure = v;
        break;
      }
      case "--csv": {
        i++;
        while (i < argv.length && !argv[i].startsWith("--")) {
          csvPaths.push(argv[i]);
          i++;
        }
        i--;
        break;
      }
      case "--out":
        outPath = argv[++i];
        break;
      case "--format": {
        const v = argv[++i];
        if (v !== "svg" && v !== "png") {
          throw new PlotError(`--format must be svg or png, got '${v}'`, 3);
        }
        format = v;
        break;
      }
      default:
        throw new PlotError(`unknown argument '${arg}'`, 3);
    }
    i++;
  }
  if (!figure) throw new PlotError("--figure is required", 3);
  if (csvPaths.length === 0) throw new PlotError("--csv is required", 3);
  if (!outPath) throw new PlotError("--out is required", 3);
  return { figure, csvPaths, outPath, format };
}

function loadTables(paths: string[]): CurveTable[] {
  return paths.map((p) => {
    let text: string;
    try {
      text = fs.readFileSync(p, "utf8");
    } catch (err) {
      throw new PlotError(`cannot read ${p}: ${(err as Error).message}`, 2);
    }
    return parseCurveCsv(text, p);
  });
}

function toPng(svgText: string): Buffer {
  let resvg: typeof import("@resvg/resvg-js");
  try {
    resvg = require("@resvg/resvg-js");
  } catch {
    throw new PlotError(
      "png output needs the optional @resvg/resvg-js dependency " +
      "(npm install); svg output has no dependencies", 5);
  }
  return Buffer.from(new resvg.Resvg(svgText).render().asPng());
}

export function run(argv: string[]): number {
  const spec = parseArgs(argv);
  const tables = loadTables(spec.csvPaths);
  const svgText = renderFigure(spec, tables);
  const payload = spec.format === "png" ? toPng(svgText) : Buffer.from(svgText, "utf8");
  try {
    fs.writeFileSync(spec.outPath, payload);
  } catch (err) {
    throw new PlotError(`cannot write ${spec.outPath}: ${(err as Error).message}`, 2);
  }
  console.log(`wrote ${spec.outPath}`);
  return 0;
}

export function main(argv: string[]): number {
  try {
    return run(argv);
  } catch (err) {
    if (err instanceof PlotError) {
      console.error(`plot-figs: ${err.message}`);
      return err.exitCode;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
