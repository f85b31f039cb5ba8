import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import {
  createState,
  exportLabels,
  hoverTerm,
  importLabels,
  selectTopic,
  setLabel,
  setLambda,
} from "../src/state.js";
import { validateVisData } from "../src/types.js";

const visdata = validateVisData(
  JSON.parse(
    readFileSync(new URL("../fixtures/visdata_golden.json", import.meta.url), "utf-8"),
  ),
);

describe("explorer state", () => {
  it("initializes the lambda slider at the payload default (0.6)", () => {
    const state = createState("demo", visdata);
    expect(state.lambda).toBe(0.6);
    expect(state.selectedTopic).toBeNull();
  });

  it("selects and deselects topics, rejecting invalid ids", () => {
    let state = createState("demo", visdata);
    state = selectTopic(state, 2);
    expect(state.selectedTopic).toBe(2);
    state = selectTopic(state, null);
    expect(state.selectedTopic).toBeNull();
    expect(() => selectTopic(state, visdata.k)).toThrow(RangeError);
    expect(() => selectTopic(state, -1)).toThrow(RangeError);
  });

  it("validates lambda and keeps transitions pure", () => {
    const state = createState("demo", visdata);
    const moved = setLambda(state, 0.25);
    expect(moved.lambda).toBe(0.25);
    expect(state.lambda).toBe(0.6);
    expect(() => setLambda(state, 1.2)).toThrow(RangeError);
  });

  it("tracks hovered terms", () => {
    let state = createState("demo", visdata);
    state = hoverTerm(state, "budget");
    expect(state.hoveredTerm).toBe("budget");
    state = hoverTerm(state, null);
    expect(state.hoveredTerm).toBeNull();
  });

  it("disables export until a label exists", () => {
    let state = createState("demo", visdata);
    expect(exportLabels(state)).toBeNull();
    state = setLabel(state, 0, "public finances");
    state = setLabel(state, 2, "education");
    const payload = exportLabels(state);
    expect(payload).toEqual({
      model_id: "demo",
      labels: { 0: "public finances", 2: "education" },
    });
  });

  it("round-trips labels through export and import", () => {
    let state = createState("demo", visdata);
    state = setLabel(state, 1, "healthcare");
    const payload = exportLabels(state)!;
    const restored = importLabels(createState("demo", visdata), payload);
    expect(restored.labels).toEqual({ 1: "healthcare" });
  });

  it("clearing a label text removes the entry", () => {
    let state = createState("demo", visdata);
    state = setLabel(state, 0, "x");
    state = setLabel(state, 0, "   ");
    expect(exportLabels(state)).toBeNull();
  });

  it("import ignores out-of-range topic ids", () => {
    const state = createState("demo", visdata);
    const restored = importLabels(state, {
      model_id: "demo",
      labels: { 0: "fine", 99: "dropped" } as Record<number, string>,
    });
    expect(restored.labels).toEqual({ 0: "fine" });
  });
});
