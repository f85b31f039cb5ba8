/** SVG/DOM rendering for the two panels. All state changes go through the
 * callbacks passed in; this module never mutates the state itself. */

import { computeBars, computeBubbles, fitToViewport } from "./geometry.js";
import type { ExplorerState } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const MAP_SIZE = 520;
const BAR_WIDTH = 420;
const BAR_ROW = 26;

export interface Handlers {
  onSelectTopic(topic: number | null): void;
  onHoverTerm(term: string | null): void;
  onLambda(value: number): void;
  onLabel(topic: number, text: string): void;
  onExport(): void;
  onImport(file: File): void;
}

function svgElement(tag: string, attrs: Record<string, string | number>): SVGElement {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export function renderError(root: HTMLElement, message: string): void {
  root.replaceChildren();
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.textContent = message;
  root.appendChild(banner);
}

function renderTopicMap(state: ExplorerState, handlers: Handlers): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "panel map-panel";
  const heading = document.createElement("h2");
  heading.textContent = "Intertopic distance map";
  panel.appendChild(heading);

  const svg = svgElement("svg", {
    width: MAP_SIZE,
    height: MAP_SIZE,
    viewBox: `0 0 ${MAP_SIZE} ${MAP_SIZE}`,
  });
  svg.addEventListener("click", () => handlers.onSelectTopic(null));

  const bubbles = fitToViewport(
    computeBubbles(state.visdata, state.hoveredTerm),
    MAP_SIZE,
    MAP_SIZE,
  );
  for (const bubble of bubbles) {
    const group = svgElement("g", { class: "bubble" });
    const circle = svgElement("circle", {
      cx: bubble.x,
      cy: bubble.y,
      r: bubble.radius,
      class: bubble.id === state.selectedTopic ? "bubble-circle selected" : "bubble-circle",
      "data-topic": bubble.id,
    });
    circle.addEventListener("click", (event) => {
      event.stopPropagation();
      handlers.onSelectTopic(bubble.id === state.selectedTopic ? null : bubble.id);
    });
    const label = svgElement("text", {
      x: bubble.x,
      y: bubble.y + 4,
      "text-anchor": "middle",
      class: "bubble-label",
    });
    label.textContent = String(bubble.id + 1);
    group.appendChild(circle);
    group.appendChild(label);
    svg.appendChild(group);
  }
  panel.appendChild(svg);
  return panel;
}

function renderBars(state: ExplorerState, handlers: Handlers): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "panel bar-panel";
  const heading = document.createElement("h2");
  heading.textContent =
    state.selectedTopic === null
      ? "Top terms overall"
      : `Top terms for topic ${state.selectedTopic + 1}`;
  panel.appendChild(heading);

  const slider = document.createElement("div");
  slider.className = "lambda-row";
  const sliderLabel = document.createElement("label");
  sliderLabel.textContent = `relevance weight = ${state.lambda.toFixed(2)}`;
  sliderLabel.htmlFor = "lambda-slider";
  const input = document.createElement("input");
  input.type = "range";
  input.id = "lambda-slider";
  input.min = "0";
  input.max = "1";
  input.step = "0.01";
  input.value = String(state.lambda);
  input.addEventListener("input", () => handlers.onLambda(Number(input.value)));
  slider.appendChild(sliderLabel);
  slider.appendChild(input);
  panel.appendChild(slider);

  const bars = computeBars(state);
  const maxOverall = Math.max(...bars.map((b) => b.overall), 1e-9);
  const svg = svgElement("svg", {
    width: BAR_WIDTH,
    height: bars.length * BAR_ROW + 8,
    viewBox: `0 0 ${BAR_WIDTH} ${bars.length * BAR_ROW + 8}`,
  });
  const plotLeft = 110;
  const plotWidth = BAR_WIDTH - plotLeft - 12;
  bars.forEach((bar, i) => {
    const y = 6 + i * BAR_ROW;
    const row = svgElement("g", { class: "bar-row" });
    row.addEventListener("mouseenter", () => handlers.onHoverTerm(bar.term));
    row.addEventListener("mouseleave", () => handlers.onHoverTerm(null));
    const text = svgElement("text", {
      x: plotLeft - 8,
      y: y + 14,
      "text-anchor": "end",
      class: "bar-term",
    });
    text.textContent = bar.term;
    row.appendChild(text);
    row.appendChild(
      svgElement("rect", {
        x: plotLeft,
        y,
        width: (plotWidth * bar.overall) / maxOverall,
        height: BAR_ROW - 8,
        class: "bar-overall",
      }),
    );
    if (bar.inTopic !== null) {
      row.appendChild(
        svgElement("rect", {
          x: plotLeft,
          y,
          width: (plotWidth * bar.inTopic) / maxOverall,
          height: BAR_ROW - 8,
          class: "bar-topic",
        }),
      );
    }
    svg.appendChild(row);
  });
  panel.appendChild(svg);
  return panel;
}

function renderLabels(state: ExplorerState, handlers: Handlers): HTMLElement {
  const panel = document.createElement("section");
  panel.className = "panel label-panel";
  const heading = document.createElement("h2");
  heading.textContent = "Topic labels";
  panel.appendChild(heading);

  const list = document.createElement("div");
  for (const topic of state.visdata.topics) {
    const row = document.createElement("div");
    row.className = "label-row";
    const name = document.createElement("span");
    name.textContent = `Topic ${topic.id + 1}`;
    const input = document.createElement("input");
    input.type = "text";
    input.placeholder = "interpretation…";
    input.value = state.labels[topic.id] ?? "";
    input.addEventListener("change", () => handlers.onLabel(topic.id, input.value));
    row.appendChild(name);
    row.appendChild(input);
    list.appendChild(row);
  }
  panel.appendChild(list);

  const actions = document.createElement("div");
  actions.className = "label-actions";
  const exportButton = document.createElement("button");
  exportButton.textContent = "Export labels";
  exportButton.disabled = Object.keys(state.labels).length === 0;
  exportButton.addEventListener("click", () => handlers.onExport());
  const importInput = document.createElement("input");
  importInput.type = "file";
  importInput.accept = "application/json";
  importInput.addEventListener("change", () => {
    const file = importInput.files?.[0];
    if (file) {
      handlers.onImport(file);
    }
  });
  actions.appendChild(exportButton);
  actions.appendChild(importInput);
  panel.appendChild(actions);
  return panel;
}

export function render(root: HTMLElement, state: ExplorerState, handlers: Handlers): void {
  root.replaceChildren();
  const header = document.createElement("header");
  const title = document.createElement("h1");
  title.textContent = `Topic explorer — ${state.modelId}`;
  header.appendChild(title);
  root.appendChild(header);

  const panels = document.createElement("main");
  panels.className = "panels";
  panels.appendChild(renderTopicMap(state, handlers));
  panels.appendChild(renderBars(state, handlers));
  root.appendChild(panels);
  root.appendChild(renderLabels(state, handlers));
}
