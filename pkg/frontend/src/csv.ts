/**
 * Parser for the simulator's long-format sweep CSV:
 *   tx_dbm,rho_linear,series,mean,ci95_half,provenance,n_trials
 * Malformed input reports the offending line number.
 */

export const CSV_HEADER =
  "tx_dbm,rho_linear,series,mean,ci95_half,provenance,n_trials";

export class PlotError extends Error {
  constructor(message: string, public readonly exitCode: number) {
    super(message);
  }
}

export interface CurveRow {
  txDbm: number;
  rho: number;
  series: string;
  mean: number;
  ci95Half: number;
  provenance: string;
  nTrials: number;
}

export interface CurveTable {
  path: string;
  rows: CurveRow[];
}

function num(field: string, value: string, path: string, lineNo: number): number {
  const v = Number(value);
  if (value.trim() === "" || Number.isNaN(v)) {
    throw new PlotError(
      `${path}:${lineNo}: field '${field}' is not a number: '${value}'`, 4);
  }
  return v;
}

export function parseCurveCsv(text: string, path: string): CurveTable {
  const lines = text.split(/\r?\n/);
  while (lines.length > 0 && lines[lines.length - 1] === "") lines.pop();
  if (lines.length === 0) {
    throw new PlotError(`${path}: empty CSV`, 4);
  }
  if (lines[0] !== CSV_HEADER) {
    throw new PlotError(`${path}:1: expected header '${CSV_HEADER}'`, 4);
  }
  if (lines.length === 1) {
    throw new PlotError(`${path}: no data rows`, 4);
  }
  const rows: CurveRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const lineNo = i + 1;
    const parts = lines[i].split(",");
    if (parts.length !== 7) {
      throw new PlotError(
        `${path}:${lineNo}: expected 7 fields, got ${parts.length}`, 4);
    }
    rows.push({
      txDbm: num("tx_dbm", parts[0], path, lineNo),
      rho: num("rho_linear", parts[1], path, lineNo),
      series: parts[2],
      mean: num("mean", parts[3], path, lineNo),
      ci95Half: num("ci95_half", parts[4], path, lineNo),
      provenance: parts[5],
      nTrials: num("n_trials", parts[6], path, lineNo),
    });
  }
  return { path, rows };
}

export interface SeriesPoint {
  x: number;
  y: number;
  ci: number;
}

/** Points of one named series, in sweep order. */
export function seriesPoints(table: CurveTable, name: string): SeriesPoint[] {
  const pts = table.rows
    .filter((r) => r.series === name)
    .map((r) => ({ x: r.txDbm, y: r.mean, ci: r.ci95Half }));
  if (pts.length === 0) {
    throw new PlotError(`${table.path}: series '${name}' not found`, 3);
  }
  return pts.sort((a, b) => a.x - b.x);
}

export function seriesNames(table: CurveTable): string[] {
  return [...new Set(table.rows.map((r) => r.series))];
}
