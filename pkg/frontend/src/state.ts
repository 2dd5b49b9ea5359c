/**
 * Client-side session state: the last request/response pair per panel and
 * a staleness flag. Everything lives in memory only; a reload restarts
 * cleanly, matching the stateless service.
 */

import type { AnalyzeRequest, AnalyzeResponse, CompareResponse } from "./types.js";

export type SpectrumKind = "aes" | "fes";

export class Session {
  stale = false;
  lastRequest: AnalyzeRequest | null = null;
  lastResponse: AnalyzeResponse | null = null;
  lastCompare: CompareResponse | null = null;
  spectrumKind: SpectrumKind = "aes";
  highlighted: [number, number] | null = null;

  /** Any parameter change marks the session stale until re-analysis. */
  markStale(): void {
    this.stale = true;
  }

  storeAnalysis(request: AnalyzeRequest, response: AnalyzeResponse): void {
    this.lastRequest = request;
    this.lastResponse = response;
    this.stale = false;
  }

  /**
   * Toggling AES/FES re-renders from the cached response when both spectra
   * were requested; returns null only when a new network call is needed.
   */
  toggleSpectrum(): SpectrumKind {
    this.spectrumKind = this.spectrumKind === "aes" ? "fes" : "aes";
    return this.spectrumKind;
  }

  currentSpectrum() {
    const spec = this.lastResponse?.spectrum;
    if (!spec) {
      return null;
    }
    return this.spectrumKind === "aes" ? spec.aes : spec.fes;
  }

  currentZones() {
    const zones = this.lastResponse?.zones;
    if (!zones) {
      return null;
    }
    return this.spectrumKind === "aes" ? zones.am : zones.fm;
  }

  highlightPair(row: number, col: number): void {
    this.highlighted = [row, col];
  }
}
