/**
 * Explorer view state and its pure transitions. Every interaction maps an
 * (immutable) state to a new state over the same loaded payload; rendering
 * is a separate concern.
 */

import type { VisData } from "./types.js";

export interface ExplorerState {
  modelId: string;
  visdata: VisData;
  selectedTopic: number | null;
  lambda: number;
  hoveredTerm: string | null;
  labels: Record<number, string>;
}

export interface LabelExport {
  model_id: string;
  labels: Record<number, string>;
}

export function createState(modelId: string, visdata: VisData): ExplorerState {
  return {
    modelId,
    visdata,
    selectedTopic: null,
    lambda: visdata.default_lambda,
    hoveredTerm: null,
    labels: {},
  };
}

export function selectTopic(state: ExplorerState, topic: number | null): ExplorerState {
  if (topic !== null && (topic < 0 || topic >= state.visdata.k)) {
    throw new RangeError(`topic ${topic} out of range for k=${state.visdata.k}`);
  }
  return { ...state, selectedTopic: topic };
}

export function setLambda(state: ExplorerState, lambda: number): ExplorerState {
  if (lambda < 0 || lambda > 1 || Number.isNaN(lambda)) {
    throw new RangeError(`lambda must be in [0, 1], got ${lambda}`);
  }
  return { ...state, lambda };
}

export function hoverTerm(state: ExplorerState, term: string | null): ExplorerState {
  return { ...state, hoveredTerm: term };
}

export function setLabel(state: ExplorerState, topic: number, text: string): ExplorerState {
  if (topic < 0 || topic >= state.visdata.k) {
    throw new RangeError(`topic ${topic} out of range for k=${state.visdata.k}`);
  }
  const labels = { ...state.labels };
  if (text.trim() === "") {
    delete labels[topic];
  } else {
    labels[topic] = text;
  }
  return { ...state, labels };
}

/** Label download payload; null while no label has been entered. */
export function exportLabels(state: ExplorerState): LabelExport | null {
  if (Object.keys(state.labels).length === 0) {
    return null;
  }
  return { model_id: state.modelId, labels: { ...state.labels } };
}

export function importLabels(state: ExplorerState, payload: LabelExport): ExplorerState {
  const labels: Record<number, string> = {};
  for (const [key, value] of Object.entries(payload.labels)) {
    const topic = Number(key);
    if (Number.isInteger(topic) && topic >= 0 && topic < state.visdata.k) {
      labels[topic] = String(value);
    }
  }
  return { ...state, labels };
}
