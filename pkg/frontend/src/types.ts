/**
 * Payload types mirroring the service's JSON bodies.
 */

export interface ParamFieldSchema {
  name: string;
  kind: "float" | "int" | "enum";
  default: number | string | null;
  minimum?: number;
  maximum?: number;
  choices?: string[];
  unit?: string;
  description?: string;
}

export interface EstimatorSchema {
  label: string;
  fields: ParamFieldSchema[];
}

export interface SchemaDocument {
  estimators: Record<string, EstimatorSchema>;
  analyses: string[];
  rhythm: { fields: ParamFieldSchema[] };
  poly: { fields: ParamFieldSchema[] };
  spectrogram: { fields: ParamFieldSchema[] };
}

export interface ClipEntry {
  id: string;
  name: string;
  duration_s: number;
  sample_rate: number;
  description: string;
}

export interface UploadResponse {
  token: string;
  duration_s: number;
  sample_rate: number;
}

export interface TrackPayload {
  source: string;
  times_s: number[];
  f0_hz: number[];
}

export interface EnvelopePayload {
  kind: string;
  rate_hz: number;
  values: number[];
}

export interface SpectrumPayload {
  freqs_hz: number[];
  mags: number[];
  resolution_hz: number;
}

export interface ZonePayload {
  f_low_hz: number;
  f_high_hz: number;
  peak_freq_hz: number;
  peak_mag: number;
}

export interface ZoneSetPayload {
  boundaries_hz: number[];
  zones: ZonePayload[];
  display_max_hz: number;
}

export interface PolyModelPayload {
  order: number;
  coeffs: number[];
  span_s: [number, number];
  rmse_hz: number;
}

export interface AnalyzeResponse {
  source: { id: string; kind: string; duration_s: number; sample_rate: number };
  estimator: string;
  params: Record<string, number | string>;
  rhythm_params: Record<string, number>;
  poly_params: Record<string, number>;
  spectrogram_params: Record<string, number | string>;
  f0?: TrackPayload;
  envelope?: { am: EnvelopePayload; fm: EnvelopePayload };
  spectrum?: { aes: SpectrumPayload; fes: SpectrumPayload };
  zones?: { am: ZoneSetPayload; fm: ZoneSetPayload; am_fm_r: number; am_fm_p: number };
  poly?: { local: PolyModelPayload[]; global: PolyModelPayload; skipped: unknown[] };
  spectrogram?: {
    times_s: number[];
    freqs_hz: number[];
    mags_db: number[][];
    floor_db: number;
  };
}

export interface AnalyzeRequest {
  source: string;
  estimator: string;
  params: Record<string, number | string>;
  analyses: string[];
  rhythm?: Record<string, number>;
  poly?: Record<string, number>;
  spectrogram?: Record<string, number | string>;
}

export interface CompareItem {
  estimator?: string;
  params?: Record<string, number | string>;
  label?: string;
  track?: TrackPayload;
}

export interface CompareRequest {
  items: CompareItem[];
  source?: string;
  n?: number;
  benchmark?: boolean;
  k?: number;
}

export interface CompareResponse {
  labels: string[];
  r_matrix: number[][];
  p_matrix: number[][];
  n_effective: number[][];
  k?: number;
  timings?: Record<string, { median_s: number; timings_s: number[] }>;
}

export interface ApiErrorBody {
  error: string;
  field?: string;
}
