/** Linear and log10 axis scales with tick generation. */

export interface Scale {
  toPixel(v: number): number;
  ticks: number[];
  domain: [number, number];
}

export function linearScale(
  lo: number, hi: number, pxLo: number, pxHi: number, tickCount = 6,
): Scale {
  const ticks = niceTicks(lo, hi, tickCount);
  const dLo = Math.min(lo, ticks[0]);
  const dHi = Math.max(hi, ticks[ticks.length - 1]);
  const span = dHi - dLo || 1;
  return {
    toPixel: (v) => pxLo + ((v - dLo) / span) * (pxHi - pxLo),
    ticks,
    domain: [dLo, dHi],
  };
}

/** Log scale over positive values; ticks at decades. */
export function logScale(
  lo: number, hi: number, pxLo: number, pxHi: number,
): Scale {
  const eLo = Math.floor(Math.log10(lo));
  const eHi = Math.ceil(Math.log10(hi));
  const ticks: number[] = [];
  for (let e = eLo; e <= eHi; e++) ticks.push(Math.pow(10, e));
  const span = eHi - eLo || 1;
  return {
    toPixel: (v) => pxLo + ((Math.log10(v) - eLo) / span) * (pxHi - pxLo),
    ticks,
    domain: [Math.pow(10, eLo), Math.pow(10, eHi)],
  };
}

/** Round ticks using the usual 1/2/5 progression, covering [lo, hi]. */
export function niceTicks(lo: number, hi: number, count: number): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / Math.max(count - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= rawStep) {
      step = mag * m;
      break;
    }
  }
  const first = Math.floor(lo / step) * step;
  const ticks: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    // snap away float drift so labels stay clean
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : Number(v.toPrecision(12)));
  }
  return ticks;
}
