/** Visualization payload served by `GET /api/visdata/<model-id>`. */

export interface VisTerm {
  term: string;
  p_kw: number;
  p_w: number;
}

export interface VisTopic {
  id: number;
  x: number;
  y: number;
  proportion: number;
  terms: VisTerm[];
}

export interface VisData {
  k: number;
  default_lambda: number;
  topics: VisTopic[];
  corpus: { n_tokens: number };
}

export interface ModelInfo {
  id: string;
  k: number;
  n_tokens: number;
}

/** Throws when the payload does not match the VisData schema. */
export function validateVisData(payload: unknown): VisData {
  const obj = payload as VisData;
  if (
    typeof obj !== "object" ||
    obj === null ||
    typeof obj.k !== "number" ||
    typeof obj.default_lambda !== "number" ||
    !Array.isArray(obj.topics) ||
    typeof obj.corpus?.n_tokens !== "number"
  ) {
    throw new Error("payload is not VisData");
  }
  if (obj.topics.length !== obj.k) {
    throw new Error(`payload lists ${obj.topics.length} topics but k=${obj.k}`);
  }
  for (const topic of obj.topics) {
    if (
      typeof topic.id !== "number" ||
      typeof topic.x !== "number" ||
      typeof topic.y !== "number" ||
      typeof topic.proportion !== "number" ||
      !Array.isArray(topic.terms)
    ) {
      throw new Error(`malformed topic entry ${JSON.stringify(topic).slice(0, 80)}`);
    }
    for (const term of topic.terms) {
      if (
        typeof term.term !== "string" ||
        typeof term.p_kw !== "number" ||
        typeof term.p_w !== "number"
      ) {
        throw new Error(`malformed term entry in topic ${topic.id}`);
      }
    }
  }
  return obj;
}
