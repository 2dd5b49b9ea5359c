/**
 * Thin client for the analysis service. The fetch implementation is
 * injectable so tests can intercept traffic; the UI itself never computes
 * analysis values, it only ships requests and renders response bodies.
 */

import type {
  AnalyzeRequest,
  AnalyzeResponse,
  ApiErrorBody,
  ClipEntry,
  CompareRequest,
  CompareResponse,
  SchemaDocument,
  UploadResponse,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  field?: string;

  constructor(status: number, body: ApiErrorBody) {
    super(body.error);
    this.status = status;
    this.field = body.field;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  baseUrl: string;
  private fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    const text = await resp.text();
    const body = text ? JSON.parse(text) : {};
    if (!resp.ok) {
      throw new ApiError(resp.status, body as ApiErrorBody);
    }
    return body as T;
  }

  clips(): Promise<ClipEntry[]> {
    return this.request("/api/clips");
  }

  schema(): Promise<SchemaDocument> {
    return this.request("/api/schema");
  }

  analyze(req: AnalyzeRequest): Promise<AnalyzeResponse> {
    return this.request("/api/analyze", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  compare(req: CompareRequest): Promise<CompareResponse> {
    return this.request("/api/compare", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  upload(file: Blob, name = "upload.wav"): Promise<UploadResponse> {
    const form = new FormData();
    form.append("file", file, name);
    return this.request("/api/audio", { method: "POST", body: form });
  }
}

/** Service origin: ?api=<origin> beats a saved value beats same-origin. */
export function resolveBaseUrl(search: string, stored: string | null): string {
  const fromQuery = new URLSearchParams(search).get("api");
  return (fromQuery ?? stored ?? "").replace(/\/$/, "");
}
