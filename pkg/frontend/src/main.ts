/**
 * Workbench bootstrap: wires the five panels together.
 *
 * Panel map: parameter form (top), amplitude-demodulation view,
 * estimator-comparison view, filters/spectrogram view, output plot frame.
 */

import { ApiClient, ApiError, resolveBaseUrl } from "./api.js";
import {
  applyResolved,
  buildForm,
  collectParams,
  FieldState,
  setFieldValue,
} from "./schemaForm.js";
import { Session } from "./state.js";
import {
  renderComparison,
  renderError,
  renderForm,
  renderResolvedParams,
  renderSpectrogramPanel,
  renderSpectrumPanel,
  renderTrackPanel,
} from "./panels.js";
import type { AnalyzeRequest, SchemaDocument } from "./types.js";

const $ = (id: string): HTMLElement => {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el;
};

async function boot(): Promise<void> {
  const baseUrl = resolveBaseUrl(window.location.search, localStorage.getItem("craft-api"));
  const client = new ApiClient(baseUrl);
  const session = new Session();

  const banner = $("error-banner");
  const staleBadge = $("stale-badge");
  let schema: SchemaDocument;
  try {
    schema = await client.schema();
  } catch (err) {
    renderError(banner, `cannot reach service at "${baseUrl || window.location.origin}": ${err}`);
    return;
  }

  const clipSelect = $("clip-select") as HTMLSelectElement;
  for (const clip of await client.clips()) {
    const option = document.createElement("option");
    option.value = clip.id;
    option.textContent = `${clip.name} (${clip.duration_s.toFixed(1)} s)`;
    clipSelect.appendChild(option);
  }

  const estimatorSelect = $("estimator-select") as HTMLSelectElement;
  for (const label of Object.keys(schema.estimators)) {
    const option = document.createElement("option");
    option.value = label;
    option.textContent = label;
    estimatorSelect.appendChild(option);
  }

  let fields: FieldState[] = buildForm(schema.estimators[estimatorSelect.value].fields);
  let uploadToken: string | null = null;

  const redrawForm = (): void =>
    renderForm($("param-form"), fields, (name, raw) => {
      fields = setFieldValue(fields, name, raw);
      session.markStale();
      staleBadge.classList.remove("hidden");
      redrawForm();
    });
  redrawForm();

  estimatorSelect.addEventListener("change", () => {
    fields = buildForm(schema.estimators[estimatorSelect.value].fields);
    session.markStale();
    staleBadge.classList.remove("hidden");
    redrawForm();
  });

  const uploadInput = $("upload-input") as HTMLInputElement;
  uploadInput.addEventListener("change", async () => {
    const file = uploadInput.files?.[0];
    if (!file) {
      return;
    }
    try {
      const meta = await client.upload(file, file.name);
      uploadToken = meta.token;
      renderError(banner, "");
      $("upload-status").textContent =
        `uploaded: ${file.name} (${meta.duration_s.toFixed(2)} s @ ${meta.sample_rate} Hz)`;
    } catch (err) {
      if (err instanceof ApiError) {
        renderError(banner, err.message, err.field);
      }
    }
  });

  const currentSource = (): string =>
    (($("source-upload") as HTMLInputElement).checked && uploadToken) || clipSelect.value;

  function buildRequest(): AnalyzeRequest | null {
    const { params, errors } = collectParams(fields);
    if (errors.length) {
      renderError(banner, errors[0]);
      return null; // client-side validation blocks the request
    }
    return {
      source: currentSource(),
      estimator: estimatorSelect.value,
      params,
      analyses: ["f0", "envelope", "spectrum", "zones", "poly", "spectrogram"],
    };
  }

  async function runAnalysis(): Promise<void> {
    const request = buildRequest();
    if (!request) {
      return;
    }
    renderError(banner, "");
    try {
      const body = await client.analyze(request);
      session.storeAnalysis(request, body);
      staleBadge.classList.add("hidden");
      fields = applyResolved(fields, body.params);
      redrawForm();
      renderTrackPanel($("output-plot"), body);
      renderResolvedParams($("resolved-params"), body);
      renderSpectrogramPanel($("spectrogram-plot"), body);
      drawSpectrum();
      const zones = body.zones;
      $("demod-summary").textContent = zones
        ? `AM/FM correlation r = ${zones.am_fm_r.toFixed(3)} (p = ${zones.am_fm_p.toExponential(2)})`
        : "";
    } catch (err) {
      if (err instanceof ApiError) {
        renderError(banner, err.message, err.field);
      } else {
        renderError(banner, String(err));
      }
    }
  }

  function drawSpectrum(): void {
    const spec = session.currentSpectrum();
    if (!spec) {
      return;
    }
    renderSpectrumPanel(
      $("demod-plot"),
      spec,
      session.currentZones(),
      session.spectrumKind.toUpperCase(),
    );
  }

  $("run-button").addEventListener("click", () => void runAnalysis());
  // toggling AES/FES reuses the cached response; no network call
  $("spectrum-toggle").addEventListener("click", () => {
    session.toggleSpectrum();
    drawSpectrum();
  });

  $("compare-button").addEventListener("click", async () => {
    const request = buildRequest();
    if (!request) {
      return;
    }
    try {
      const body = await client.compare({
        source: request.source,
        items: [
          { estimator: "soft", label: "soft" },
          { estimator: "amdf", label: "amdf" },
          { estimator: request.estimator, params: request.params, label: "current" },
        ],
        benchmark: ($("bench-toggle") as HTMLInputElement).checked,
        k: 20,
      });
      session.lastCompare = body;
      renderComparison($("compare-view"), body, (cell) => {
        session.highlightPair(cell.row, cell.col);
        renderComparison($("compare-view"), body, () => undefined, session.highlighted);
      }, session.highlighted);
    } catch (err) {
      if (err instanceof ApiError) {
        renderError(banner, err.message, err.field);
      }
    }
  });
}

void boot();
