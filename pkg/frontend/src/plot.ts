/**
 * Pure plot-geometry builders. Every plotted value originates in a service
 * response; these functions only scale coordinates and split polylines.
 * Rendering the server-fit polynomial models samples their coefficients
 * over the server-reported span.
 */

import type {
  PolyModelPayload,
  SpectrumPayload,
  TrackPayload,
  ZoneSetPayload,
} from "./types.js";

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

export interface PlotPoint {
  x: number;
  y: number;
  t: number;
  value: number;
}

export interface TrackPlot {
  /** one polyline per voiced run; unvoiced gaps split the track */
  segments: PlotPoint[][];
  /** [start, end] times of each unvoiced gap, for distinct gap rendering */
  gaps: Array<[number, number]>;
  x: Scale;
  y: Scale;
}

export function trackPlot(
  track: TrackPayload,
  width: number,
  height: number,
  fMax?: number,
): TrackPlot {
  const times = track.times_s;
  const voicedValues = track.f0_hz.filter((v) => v > 0);
  const top = fMax ?? (voicedValues.length ? Math.max(...voicedValues) * 1.1 : 1);
  const x = linearScale([times[0] ?? 0, times[times.length - 1] ?? 1], [0, width]);
  const y = linearScale([0, top], [height, 0]);

  const segments: PlotPoint[][] = [];
  const gaps: Array<[number, number]> = [];
  let current: PlotPoint[] = [];
  let gapStart: number | null = null;
  track.f0_hz.forEach((value, i) => {
    const t = times[i];
    if (value > 0) {
      if (gapStart !== null) {
        gaps.push([gapStart, t]);
        gapStart = null;
      }
      current.push({ x: x(t), y: y(value), t, value });
    } else {
      if (gapStart === null) {
        gapStart = t;
      }
      if (current.length) {
        segments.push(current);
        current = [];
      }
    }
  });
  if (current.length) {
    segments.push(current);
  }
  if (gapStart !== null && times.length) {
    gaps.push([gapStart, times[times.length - 1]]);
  }
  return { segments, gaps, x, y };
}

/** Sample a server-fit polynomial over its span for overlay rendering. */
export function polyCurve(
  model: PolyModelPayload,
  x: Scale,
  y: Scale,
  samples = 64,
): PlotPoint[] {
  const [t0, t1] = model.span_s;
  const points: PlotPoint[] = [];
  for (let i = 0; i < samples; i++) {
    const t = t0 + ((t1 - t0) * i) / (samples - 1);
    let value = 0;
    let power = 1;
    for (const c of model.coeffs) {
      value += c * power;
      power *= t - t0;
    }
    points.push({ x: x(t), y: y(value), t, value });
  }
  return points;
}

export interface SpectrumPlot {
  points: PlotPoint[];
  boundaries: Array<{ x: number; freq: number }>;
  x: Scale;
  y: Scale;
}

export function spectrumPlot(
  spec: SpectrumPayload,
  zones: ZoneSetPayload | null,
  width: number,
  height: number,
): SpectrumPlot {
  const x = linearScale([spec.freqs_hz[0], spec.freqs_hz[spec.freqs_hz.length - 1]], [0, width]);
  const top = Math.max(...spec.mags, 1e-12);
  const y = linearScale([0, top], [height, 0]);
  return {
    points: spec.freqs_hz.map((f, i) => ({
      x: x(f),
      y: y(spec.mags[i]),
      t: f,
      value: spec.mags[i],
    })),
    boundaries: (zones?.boundaries_hz ?? []).map((f) => ({ x: x(f), freq: f })),
    x,
    y,
  };
}

export function polylinePoints(points: PlotPoint[]): string {
  return points.map((p) => `${p.x.toFixed(2)},${p.y.toFixed(2)}`).join(" ");
}

/** Map a dB value in [floor, 0] onto a blue-to-yellow heat color. */
export function heatColor(db: number, floorDb: number): string {
  const unit = Math.min(1, Math.max(0, 1 - db / floorDb));
  const r = Math.round(255 * unit);
  const g = Math.round(224 * unit * unit);
  const b = Math.round(64 + 128 * (1 - unit));
  return `rgb(${r},${g},${b})`;
}

export interface HeatCell {
  x: number;
  y: number;
  w: number;
  h: number;
  color: string;
}

export function spectrogramCells(
  timesS: number[],
  freqsHz: number[],
  magsDb: number[][],
  floorDb: number,
  width: number,
  height: number,
  maxCols = 400,
  maxRows = 160,
): HeatCell[] {
  const colStep = Math.max(1, Math.ceil(timesS.length / maxCols));
  const rowStep = Math.max(1, Math.ceil(freqsHz.length / maxRows));
  const cols = Math.ceil(timesS.length / colStep);
  const rows = Math.ceil(freqsHz.length / rowStep);
  const cellW = width / cols;
  const cellH = height / rows;
  const cells: HeatCell[] = [];
  for (let ci = 0; ci < cols; ci++) {
    for (let ri = 0; ri < rows; ri++) {
      // subsample; the service already clamped magnitudes at the floor
      const db = magsDb[ci * colStep][ri * rowStep];
      cells.push({
        x: ci * cellW,
        y: height - (ri + 1) * cellH,
        w: cellW,
        h: cellH,
        color: heatColor(db, floorDb),
      });
    }
  }
  return cells;
}

export interface MatrixCell {
  row: number;
  col: number;
  rowLabel: string;
  colLabel: string;
  r: number;
  p: number;
  color: string;
}

/** Heatmapped correlation table in the response's label order. */
export function matrixModel(
  labels: string[],
  rMatrix: number[][],
  pMatrix: number[][],
): MatrixCell[] {
  const cells: MatrixCell[] = [];
  labels.forEach((rowLabel, i) => {
    labels.forEach((colLabel, j) => {
      const r = rMatrix[i][j];
      const unit = (r + 1) / 2;
      const red = Math.round(40 + 180 * unit);
      const blue = Math.round(220 - 180 * unit);
      cells.push({
        row: i,
        col: j,
        rowLabel,
        colLabel,
        r,
        p: pMatrix[i][j],
        color: `rgb(${red},80,${blue})`,
      });
    });
  });
  return cells;
}

export interface TimingBar {
  label: string;
  medianS: number;
  widthFraction: number;
}

/** Bars sorted ascending by median, widths relative to the slowest. */
export function timingBars(
  timings: Record<string, { median_s: number }>,
): TimingBar[] {
  const entries = Object.entries(timings)
    .map(([label, t]) => ({ label, medianS: t.median_s }))
    .sort((a, b) => a.medianS - b.medianS);
  const slowest = entries.length ? entries[entries.length - 1].medianS : 1;
  return entries.map((e) => ({ ...e, widthFraction: slowest > 0 ? e.medianS / slowest : 0 }));
}
