/** Deterministic SVG string builders (fixed 2-decimal coordinates, no
 * timestamps or ids, so identical input always yields identical bytes). */

export function fmt(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function line(
  x1: number, y1: number, x2: number, y2: number, style: string,
): string {
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ${style}/>`;
}

export function polyline(pts: Array<[number, number]>, style: string): string {
  const d = pts.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return `<polyline points="${d}" fill="none" ${style}/>`;
}

export function text(
  x: number, y: number, content: string, style: string,
): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" ${style}>${escapeXml(content)}</text>`;
}

export type MarkerShape = "circle" | "square" | "triangle" | "diamond" | "cross";

export function marker(
  shape: MarkerShape, x: number, y: number, r: number, color: string,
): string {
  switch (shape) {
    case "circle":
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="none" stroke="${color}" stroke-width="1.5"/>`;
    case "square":
      return `<rect x="${fmt(x - r)}" y="${fmt(y - r)}" width="${fmt(2 * r)}" height="${fmt(2 * r)}" fill="none" stroke="${color}" stroke-width="1.5"/>`;
    case "triangle": {
      const pts = [
        [x, y - r * 1.2],
        [x - r * 1.1, y + r * 0.9],
        [x + r * 1.1, y + r * 0.9],
      ] as Array<[number, number]>;
      return `<polygon points="${pts.map(([a, b]) => `${fmt(a)},${fmt(b)}`).join(" ")}" fill="none" stroke="${color}" stroke-width="1.5"/>`;
    }
    case "diamond": {
      const pts = [
        [x, y - r * 1.3],
        [x + r * 1.3, y],
        [x, y + r * 1.3],
        [x - r * 1.3, y],
      ] as Array<[number, number]>;
      return `<polygon points="${pts.map(([a, b]) => `${fmt(a)},${fmt(b)}`).join(" ")}" fill="none" stroke="${color}" stroke-width="1.5"/>`;
    }
    case "cross":
      return (
        line(x - r, y - r, x + r, y + r, `stroke="${color}" stroke-width="1.5"`) +
        line(x - r, y + r, x + r, y - r, `stroke="${color}" stroke-width="1.5"`)
      );
  }
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n` +
    `<rect width="${width}" height="${height}" fill="white"/>\n` +
    body +
    "\n</svg>\n"
  );
}
