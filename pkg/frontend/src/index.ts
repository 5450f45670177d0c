export { parseCurveCsv, seriesPoints, seriesNames, PlotError, CSV_HEADER } from "./csv";
export { renderFigure } from "./figures";
export type { PlotSpec, FigureKind } from "./figures";
export { main } from "./cli";
