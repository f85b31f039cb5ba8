/**
 * View-model computations for the two panels: bubble layout for the topic
 * map and bar data for the term panel. Pure functions, no DOM.
 */

import { rankTerms } from "./relevance.js";
import type { ExplorerState } from "./state.js";
import type { VisData } from "./types.js";

export const MIN_RADIUS = 4;
export const RADIUS_SCALE = 58;
export const TOP_TERMS_SHOWN = 10;

export interface Bubble {
  id: number;
  x: number;
  y: number;
  radius: number;
}

export interface Bar {
  term: string;
  /** Estimated corpus-wide occurrence count of the term. */
  overall: number;
  /** Estimated within-topic count; null in the overall (no selection) view. */
  inTopic: number | null;
}

/** Area encodes weight: radius grows with the square root of the share. */
export function radiusFor(share: number): number {
  return MIN_RADIUS + RADIUS_SCALE * Math.sqrt(Math.max(share, 0));
}

function termWeight(visdata: VisData, topic: number, term: string): number {
  const entry = visdata.topics[topic]?.terms.find((t) => t.term === term);
  return entry ? entry.p_kw : 0;
}

/**
 * One bubble per topic. Without a hovered term the radius encodes the topic
 * proportion; while hovering, it encodes the hovered term's weight in each
 * topic, with topics that lack the term shrunk to the minimum radius.
 */
export function computeBubbles(visdata: VisData, hoveredTerm: string | null): Bubble[] {
  return visdata.topics.map((topic) => ({
    id: topic.id,
    x: topic.x,
    y: topic.y,
    radius:
      hoveredTerm === null
        ? radiusFor(topic.proportion)
        : radiusFor(termWeight(visdata, topic.id, hoveredTerm)),
  }));
}

/** Scale data coordinates into a pixel viewport, preserving aspect ratio. */
export function fitToViewport(
  bubbles: Bubble[],
  width: number,
  height: number,
  padding = 16,
): Bubble[] {
  const maxRadius = Math.max(...bubbles.map((b) => b.radius), MIN_RADIUS);
  const extent = Math.max(
    ...bubbles.map((b) => Math.max(Math.abs(b.x), Math.abs(b.y))),
    1e-9,
  );
  const scale = (Math.min(width, height) / 2 - padding - maxRadius) / extent;
  return bubbles.map((b) => ({
    ...b,
    x: width / 2 + b.x * scale,
    y: height / 2 - b.y * scale,
  }));
}

/** Distinct terms across all topic tables, most frequent first. */
export function overallTopTerms(visdata: VisData, topN: number): Bar[] {
  const byTerm = new Map<string, number>();
  for (const topic of visdata.topics) {
    for (const t of topic.terms) {
      if (!byTerm.has(t.term)) {
        byTerm.set(t.term, t.p_w);
      }
    }
  }
  const n = visdata.corpus.n_tokens;
  return [...byTerm.entries()]
    .sort((a, b) => (a[1] !== b[1] ? b[1] - a[1] : a[0] < b[0] ? -1 : 1))
    .slice(0, topN)
    .map(([term, pW]) => ({ term, overall: pW * n, inTopic: null }));
}

/**
 * Bars for the right-hand panel. With a topic selected: its top terms at the
 * current lambda, red within-topic counts over blue overall counts.
 */
export function computeBars(state: ExplorerState): Bar[] {
  if (state.selectedTopic === null) {
    return overallTopTerms(state.visdata, TOP_TERMS_SHOWN);
  }
  const topic = state.visdata.topics[state.selectedTopic];
  if (topic === undefined) {
    return [];
  }
  const n = state.visdata.corpus.n_tokens;
  return rankTerms(topic.terms, state.lambda, TOP_TERMS_SHOWN).map((t) => ({
    term: t.term,
    overall: t.p_w * n,
    inTopic: t.p_kw * topic.proportion * n,
  }));
}
