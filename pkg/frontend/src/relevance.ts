/**
 * Client-side term relevance, kept bit-compatible with the backend:
 *
 *   r(w, k | lambda) = lambda * ln(p_kw) + (1 - lambda) * ln(p_kw / p_w)
 *
 * Re-ranking happens entirely in the browser from the exported p_kw/p_w
 * pairs, so moving the lambda slider costs no round-trip. Fidelity is
 * bounded by the exported per-topic table (top 30 terms by default).
 */

import type { VisTerm } from "./types.js";

export interface RankedTerm {
  term: string;
  score: number;
  p_kw: number;
  p_w: number;
}

export function relevance(pKw: number, pW: number, lambda: number): number {
  if (lambda < 0 || lambda > 1) {
    throw new RangeError(`lambda must be in [0, 1], got ${lambda}`);
  }
  if (pKw <= 0 || pW <= 0) {
    throw new RangeError("probabilities must be strictly positive");
  }
  return lambda * Math.log(pKw) + (1 - lambda) * Math.log(pKw / pW);
}

/** Sort a topic's term table by relevance, descending; ties lexicographic. */
export function rankTerms(terms: VisTerm[], lambda: number, topN: number): RankedTerm[] {
  const scored = terms.map((t) => ({
    term: t.term,
    score: relevance(t.p_kw, t.p_w, lambda),
    p_kw: t.p_kw,
    p_w: t.p_w,
  }));
  scored.sort((a, b) => {
    if (a.score !== b.score) {
      return b.score - a.score;
    }
    return a.term < b.term ? -1 : a.term > b.term ? 1 : 0;
  });
  return scored.slice(0, topN);
}
