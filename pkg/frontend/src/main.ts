/** Entry point: fetch a model's visualization payload and wire the views. */

import { render, renderError, type Handlers } from "./render.js";
import {
  createState,
  exportLabels,
  hoverTerm,
  importLabels,
  selectTopic,
  setLabel,
  setLambda,
  type ExplorerState,
} from "./state.js";
import { validateVisData, type ModelInfo } from "./types.js";

async function fetchJson(url: string): Promise<unknown> {
  const response = await fetch(url);
  if (!response.ok) {
    throw new Error(`${url}: HTTP ${response.status}`);
  }
  return response.json();
}

async function resolveSource(): Promise<{ id: string; url: string }> {
  const params = new URLSearchParams(window.location.search);
  const src = params.get("src");
  if (src) {
    return { id: src.split("/").pop() ?? src, url: src };
  }
  const model = params.get("model");
  if (model) {
    return { id: model, url: `/api/visdata/${model}` };
  }
  const models = (await fetchJson("/api/models")) as ModelInfo[];
  if (!Array.isArray(models) || models.length === 0) {
    throw new Error("no exported models available under /api/models");
  }
  const first = models[0]!;
  return { id: first.id, url: `/api/visdata/${first.id}` };
}

function download(filename: string, payload: unknown): void {
  const blob = new Blob([JSON.stringify(payload, null, 2)], {
    type: "application/json",
  });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = filename;
  link.click();
  URL.revokeObjectURL(link.href);
}

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  let state: ExplorerState;
  try {
    const source = await resolveSource();
    const payload = validateVisData(await fetchJson(source.url));
    state = createState(source.id, payload);
  } catch (error) {
    renderError(root, `Could not load visualization data: ${String(error)}`);
    return;
  }

  const update = (next: ExplorerState): void => {
    state = next;
    render(root, state, handlers);
  };

  const handlers: Handlers = {
    onSelectTopic: (topic) => update(selectTopic(state, topic)),
    onHoverTerm: (term) => update(hoverTerm(state, term)),
    onLambda: (value) => update(setLambda(state, value)),
    onLabel: (topic, text) => update(setLabel(state, topic, text)),
    onExport: () => {
      const payload = exportLabels(state);
      if (payload) {
        download(`labels_${state.modelId}.json`, payload);
      }
    },
    onImport: (file) => {
      file.text().then((text) => {
        try {
          update(importLabels(state, JSON.parse(text)));
        } catch {
          renderError(root, "Label file is not valid JSON");
        }
      });
    },
  };

  render(root, state, handlers);
}

start();
