/**
 * DOM rendering for the five workbench panels. All numbers come from
 * service responses via the pure builders in plot.ts.
 */

import {
  MatrixCell,
  PlotPoint,
  matrixModel,
  polyCurve,
  polylinePoints,
  spectrogramCells,
  spectrumPlot,
  timingBars,
  trackPlot,
} from "./plot.js";
import type { FieldState } from "./schemaForm.js";
import type { AnalyzeResponse, CompareResponse, SpectrumPayload, ZoneSetPayload } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function svgElement(width: number, height: number): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("preserveAspectRatio", "none");
  return svg;
}

function addPolyline(svg: SVGSVGElement, points: PlotPoint[], stroke: string, dash = ""): void {
  const line = document.createElementNS(SVG_NS, "polyline");
  line.setAttribute("points", polylinePoints(points));
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", stroke);
  if (dash) {
    line.setAttribute("stroke-dasharray", dash);
  }
  svg.appendChild(line);
}

export function renderForm(
  container: HTMLElement,
  fields: FieldState[],
  onChange: (name: string, raw: string) => void,
): void {
  container.textContent = "";
  for (const field of fields) {
    const row = document.createElement("label");
    row.className = "field-row";
    const caption = document.createElement("span");
    caption.textContent = field.schema.unit
      ? `${field.schema.name} (${field.schema.unit})`
      : field.schema.name;
    caption.title = field.schema.description ?? "";
    row.appendChild(caption);

    let input: HTMLElement;
    if (field.schema.kind === "enum") {
      const select = document.createElement("select");
      for (const choice of field.schema.choices ?? []) {
        const option = document.createElement("option");
        option.value = choice;
        option.textContent = choice;
        option.selected = choice === field.raw;
        select.appendChild(option);
      }
      select.addEventListener("change", () => onChange(field.schema.name, select.value));
      input = select;
    } else {
      const box = document.createElement("input");
      box.type = "text";
      box.value = field.raw;
      box.placeholder = field.schema.default === null ? "server default" : "";
      box.addEventListener("input", () => onChange(field.schema.name, box.value));
      input = box;
    }
    input.setAttribute("data-field", field.schema.name);
    row.appendChild(input);

    const error = document.createElement("span");
    error.className = "field-error";
    error.textContent = field.error ?? "";
    row.appendChild(error);
    container.appendChild(row);
  }
}

/** F0 track with local models in one color, the global model in another. */
export function renderTrackPanel(container: HTMLElement, body: AnalyzeResponse): void {
  container.textContent = "";
  if (!body.f0) {
    return;
  }
  const width = 640;
  const height = 240;
  const plot = trackPlot(body.f0, width, height);
  const svg = svgElement(width, height);

  for (const [gapStart, gapEnd] of plot.gaps) {
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", plot.x(gapStart).toFixed(2));
    rect.setAttribute("width", (plot.x(gapEnd) - plot.x(gapStart)).toFixed(2));
    rect.setAttribute("y", "0");
    rect.setAttribute("height", String(height));
    rect.setAttribute("class", "gap-shade");
    svg.appendChild(rect);
  }
  for (const segment of plot.segments) {
    addPolyline(svg, segment, "var(--track-color, #1668b0)");
  }
  if (body.poly) {
    for (const model of body.poly.local) {
      addPolyline(svg, polyCurve(model, plot.x, plot.y), "orange");
    }
    addPolyline(svg, polyCurve(body.poly.global, plot.x, plot.y), "red", "6 4");
  }
  container.appendChild(svg);

  const caption = document.createElement("div");
  caption.className = "caption";
  caption.textContent = `${body.f0.source}: ${body.f0.f0_hz.filter((v) => v > 0).length} voiced frames`;
  container.appendChild(caption);
}

/** Envelope spectrum with zone boundary markers. */
export function renderSpectrumPanel(
  container: HTMLElement,
  spec: SpectrumPayload,
  zones: ZoneSetPayload | null,
  title: string,
): void {
  container.textContent = "";
  const width = 640;
  const height = 200;
  const plot = spectrumPlot(spec, zones, width, height);
  const svg = svgElement(width, height);
  for (const boundary of plot.boundaries) {
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", boundary.x.toFixed(2));
    line.setAttribute("x2", boundary.x.toFixed(2));
    line.setAttribute("y1", "0");
    line.setAttribute("y2", String(height));
    line.setAttribute("stroke", "red");
    line.setAttribute("stroke-dasharray", "4 3");
    svg.appendChild(line);
  }
  addPolyline(svg, plot.points, "#1668b0");
  container.appendChild(svg);
  const caption = document.createElement("div");
  caption.className = "caption";
  caption.textContent = title;
  container.appendChild(caption);
}

export function renderSpectrogramPanel(container: HTMLElement, body: AnalyzeResponse): void {
  container.textContent = "";
  if (!body.spectrogram) {
    return;
  }
  const { times_s, freqs_hz, mags_db, floor_db } = body.spectrogram;
  const width = 640;
  const height = 220;
  const svg = svgElement(width, height);
  for (const cell of spectrogramCells(times_s, freqs_hz, mags_db, floor_db, width, height)) {
    const rect = document.createElementNS(SVG_NS, "rect");
    rect.setAttribute("x", cell.x.toFixed(2));
    rect.setAttribute("y", cell.y.toFixed(2));
    rect.setAttribute("width", Math.ceil(cell.w).toString());
    rect.setAttribute("height", Math.ceil(cell.h).toString());
    rect.setAttribute("fill", cell.color);
    svg.appendChild(rect);
  }
  container.appendChild(svg);
}

export function renderComparison(
  container: HTMLElement,
  body: CompareResponse,
  onCellClick: (cell: MatrixCell) => void,
  highlighted: [number, number] | null,
): void {
  container.textContent = "";
  const table = document.createElement("table");
  table.className = "matrix";
  const head = document.createElement("tr");
  head.appendChild(document.createElement("th"));
  for (const label of body.labels) {
    const th = document.createElement("th");
    th.textContent = label;
    head.appendChild(th);
  }
  table.appendChild(head);

  const cells = matrixModel(body.labels, body.r_matrix, body.p_matrix);
  for (let i = 0; i < body.labels.length; i++) {
    const row = document.createElement("tr");
    const th = document.createElement("th");
    th.textContent = body.labels[i];
    row.appendChild(th);
    for (const cell of cells.filter((c) => c.row === i)) {
      const td = document.createElement("td");
      td.textContent = cell.r.toFixed(3);
      td.style.backgroundColor = cell.color;
      td.title = `p = ${cell.p.toExponential(2)}`;
      if (
        highlighted &&
        ((highlighted[0] === cell.row && highlighted[1] === cell.col) ||
          (highlighted[0] === cell.col && highlighted[1] === cell.row))
      ) {
        td.classList.add("highlight");
      }
      td.addEventListener("click", () => onCellClick(cell));
      row.appendChild(td);
    }
    table.appendChild(row);
  }
  container.appendChild(table);

  if (body.timings) {
    const list = document.createElement("div");
    list.className = "timing-bars";
    for (const bar of timingBars(body.timings)) {
      const row = document.createElement("div");
      row.className = "timing-row";
      const label = document.createElement("span");
      label.textContent = `${bar.label}: ${bar.medianS.toFixed(4)} s`;
      const fill = document.createElement("div");
      fill.className = "timing-fill";
      fill.style.width = `${Math.round(bar.widthFraction * 100)}%`;
      row.appendChild(label);
      row.appendChild(fill);
      list.appendChild(row);
    }
    container.appendChild(list);
  }
}

export function renderResolvedParams(container: HTMLElement, body: AnalyzeResponse): void {
  container.textContent = "";
  const dl = document.createElement("dl");
  dl.className = "resolved";
  for (const [key, value] of Object.entries(body.params)) {
    const dt = document.createElement("dt");
    dt.textContent = key;
    const dd = document.createElement("dd");
    dd.textContent = String(value);
    dl.appendChild(dt);
    dl.appendChild(dd);
  }
  container.appendChild(dl);
}

export function renderError(banner: HTMLElement, message: string, field?: string): void {
  banner.textContent = field ? `${message} (field: ${field})` : message;
  banner.classList.toggle("hidden", message === "");
}
