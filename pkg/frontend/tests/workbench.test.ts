/**
 * End-to-end loop against an intercepted network: the UI performs zero
 * DSP, so every plotted value must equal the corresponding value in the
 * service response body for the same request.
 */

import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, resolveBaseUrl } from "../src/api.js";
import { buildForm, collectParams, setFieldValue } from "../src/schemaForm.js";
import { Session } from "../src/state.js";
import { trackPlot } from "../src/plot.js";
import type { AnalyzeRequest, AnalyzeResponse, ParamFieldSchema } from "../src/types.js";

const FIELDS: ParamFieldSchema[] = [
  { name: "clip_ratio", kind: "float", default: 0.3, minimum: 0, maximum: 0.99 },
  { name: "f_min", kind: "float", default: 60, minimum: 1, maximum: 2000 },
];

/** Deterministic fake service: the track depends on the params it echoes. */
function fakeService() {
  const calls: Array<{ url: string; body: unknown }> = [];
  const fetchImpl = async (url: string, init?: RequestInit): Promise<Response> => {
    const body = init?.body ? JSON.parse(init.body as string) : null;
    calls.push({ url, body });
    if (url.endsWith("/api/analyze")) {
      const req = body as AnalyzeRequest;
      const clip = Number(req.params.clip_ratio ?? 0.3);
      const times = Array.from({ length: 8 }, (_, i) => i * 0.01);
      const f0 = times.map((_, i) => (i === 3 ? 0 : 100 + 100 * clip + i));
      const resp: AnalyzeResponse = {
        source: { id: req.source, kind: "clip", duration_s: 0.08, sample_rate: 16000 },
        estimator: req.estimator,
        params: { ...req.params, clip_ratio: clip, frame_len: 480 },
        rhythm_params: {},
        poly_params: {},
        spectrogram_params: {},
        f0: { source: req.estimator, times_s: times, f0_hz: f0 },
        spectrum: {
          aes: { freqs_hz: [0, 1, 2], mags: [0, 5, 1], resolution_hz: 1 },
          fes: { freqs_hz: [0, 1, 2], mags: [0, 2, 4], resolution_hz: 1 },
        },
        zones: {
          am: { boundaries_hz: [1.5], zones: [], display_max_hz: 2 },
          fm: { boundaries_hz: [], zones: [], display_max_hz: 2 },
          am_fm_r: 0.9,
          am_fm_p: 0.001,
        },
      };
      return new Response(JSON.stringify(resp), { status: 200 });
    }
    if (url.endsWith("/api/compare")) {
      const labels = (body as { items: Array<{ label?: string }> }).items.map(
        (item, i) => item.label ?? `item${i}`,
      );
      const m = labels.length;
      const r = labels.map((_, i) => labels.map((_2, j) => (i === j ? 1.0 : 1.0)));
      const p = labels.map(() => labels.map(() => 0));
      const n = labels.map(() => labels.map(() => 100));
      return new Response(
        JSON.stringify({ labels, r_matrix: r, p_matrix: p, n_effective: n }),
        { status: 200 },
      );
    }
    if (url.endsWith("/api/schema")) {
      return new Response(JSON.stringify({ estimators: {} }), { status: 200 });
    }
    return new Response(JSON.stringify({ error: "unknown route" }), { status: 404 });
  };
  return { calls, fetchImpl };
}

describe("analysis loop with intercepted network", () => {
  it("changing clip_ratio re-runs and the plot equals the response body", async () => {
    const { calls, fetchImpl } = fakeService();
    const client = new ApiClient("http://svc", fetchImpl);
    const session = new Session();

    let form = buildForm(FIELDS);
    const run = async () => {
      const { params, errors } = collectParams(form);
      expect(errors).toEqual([]);
      const request: AnalyzeRequest = {
        source: "sine200",
        estimator: "soft",
        params,
        analyses: ["f0", "spectrum", "zones"],
      };
      const body = await client.analyze(request);
      session.storeAnalysis(request, body);
      return body;
    };

    const first = await run();
    const firstPlot = trackPlot(first.f0!, 640, 240);

    form = setFieldValue(form, "clip_ratio", "0.5");
    session.markStale();
    expect(session.stale).toBe(true);

    const second = await run();
    expect(session.stale).toBe(false);
    const secondPlot = trackPlot(second.f0!, 640, 240);

    // the plot changed with the parameter
    expect(secondPlot.segments[0][0].value).not.toBe(firstPlot.segments[0][0].value);

    // network-intercept check: plotted values equal a direct API call's body
    const direct = await client.analyze(session.lastRequest!);
    const plotted = secondPlot.segments.flat().map((p) => p.value);
    expect(plotted).toEqual(direct.f0!.f0_hz.filter((v) => v > 0));
    const plottedTimes = secondPlot.segments.flat().map((p) => p.t);
    expect(plottedTimes).toEqual(
      direct.f0!.times_s.filter((_, i) => direct.f0!.f0_hz[i] > 0),
    );

    // and the request the UI sent carried the changed parameter
    const sent = calls.filter((c) => c.url.endsWith("/api/analyze"));
    expect((sent[1].body as AnalyzeRequest).params.clip_ratio).toBe(0.5);
  });

  it("toggling AES/FES reuses the cached response without a network call", async () => {
    const { calls, fetchImpl } = fakeService();
    const client = new ApiClient("http://svc", fetchImpl);
    const session = new Session();
    const request: AnalyzeRequest = {
      source: "sine200",
      estimator: "soft",
      params: {},
      analyses: ["spectrum", "zones"],
    };
    session.storeAnalysis(request, await client.analyze(request));
    const before = calls.length;

    expect(session.currentSpectrum()!.mags).toEqual([0, 5, 1]);
    session.toggleSpectrum();
    expect(session.currentSpectrum()!.mags).toEqual([0, 2, 4]);
    expect(session.currentZones()!.boundaries_hz).toEqual([]);
    expect(calls.length).toBe(before); // no new traffic
  });
});

describe("comparison view", () => {
  it("duplicate configs give a symmetric matrix with unit diagonal", async () => {
    const { fetchImpl } = fakeService();
    const client = new ApiClient("http://svc", fetchImpl);
    const body = await client.compare({
      source: "sine200",
      items: [
        { estimator: "soft", label: "soft-a" },
        { estimator: "soft", label: "soft-b" },
      ],
    });
    expect(body.labels).toEqual(["soft-a", "soft-b"]);
    for (let i = 0; i < body.labels.length; i++) {
      expect(body.r_matrix[i][i]).toBe(1.0);
      for (let j = 0; j < body.labels.length; j++) {
        expect(body.r_matrix[i][j]).toBe(body.r_matrix[j][i]);
      }
    }
  });

  it("matrix cell click highlights the pair", () => {
    const session = new Session();
    session.highlightPair(0, 1);
    expect(session.highlighted).toEqual([0, 1]);
  });
});

describe("api client errors", () => {
  it("maps 4xx bodies onto ApiError with the field name", async () => {
    const fetchImpl = async (): Promise<Response> =>
      new Response(JSON.stringify({ error: "clip_ratio must be <= 0.99", field: "params.clip_ratio" }), {
        status: 422,
      });
    const client = new ApiClient("http://svc", fetchImpl);
    await expect(
      client.analyze({ source: "x", estimator: "soft", params: {}, analyses: ["f0"] }),
    ).rejects.toMatchObject({
      status: 422,
      message: "clip_ratio must be <= 0.99",
      field: "params.clip_ratio",
    });
    expect(new ApiError(404, { error: "nope" })).toBeInstanceOf(Error);
  });
});

describe("resolveBaseUrl", () => {
  it("prefers the query parameter, then storage, then same-origin", () => {
    expect(resolveBaseUrl("?api=http://other:8573", null)).toBe("http://other:8573");
    expect(resolveBaseUrl("", "http://saved:1234/")).toBe("http://saved:1234");
    expect(resolveBaseUrl("", null)).toBe("");
  });
});
