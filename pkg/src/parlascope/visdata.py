"""Relevance ranking, topic distances, 2-D projection, and the exported
visualization payload.

The relevance of term w in topic k under weight lambda is

    r(w, k | lambda) = lambda * log(p_kw) + (1 - lambda) * log(p_kw / p_w)

with natural logs (rankings are invariant to the log base). ``p_kw`` is the
term's probability in the topic and ``p_w`` its marginal probability in the
corpus; ``p_kw / p_w`` is the term's lift. Topic distances are
Jensen-Shannon divergences (base-2 logs, so values live in [0, 1]) and the
topic map comes from classical multidimensional scaling of that matrix.

All functions are pure computations over an immutable model.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .errors import ConfigError
from .lda import TopicModel
from .preprocess import Vocabulary

DEFAULT_LAMBDA = 0.6
DEFAULT_TOP_N = 30


def relevance(p_kw: float, p_w: float, lam: float) -> float:
    """Blend of in-topic log-probability and log-lift; natural log."""
    if not (0.0 <= lam <= 1.0):
        raise ConfigError(f"lambda must be in [0, 1], got {lam}")
    if p_kw <= 0.0 or p_w <= 0.0:
        raise ConfigError("probabilities must be strictly positive")
    return lam * math.log(p_kw) + (1.0 - lam) * math.log(p_kw / p_w)


@dataclass(frozen=True)
class TermStats:
    """Per-topic term probabilities plus corpus marginals, aligned by index."""

    terms: tuple[str, ...]
    p_kw: np.ndarray  # shape (K, V)
    p_w: np.ndarray  # shape (V,)

    @property
    def k(self) -> int:
        return self.p_kw.shape[0]


def build_term_stats(model: TopicModel, vocabulary: Vocabulary) -> TermStats:
    if len(vocabulary) != model.n_terms:
        raise ConfigError(
            f"vocabulary size {len(vocabulary)} does not match model terms {model.n_terms}"
        )
    if model.vocab_hash and vocabulary.content_hash() != model.vocab_hash:
        raise ConfigError("vocabulary does not match the one the model was trained on")
    total = vocabulary.total_tokens
    p_w = np.asarray(vocabulary.frequencies, dtype=np.float64) / total
    return TermStats(terms=vocabulary.terms, p_kw=model.phi, p_w=p_w)


def rank_terms(
    stats: TermStats, topic: int, lam: float, top_n: int
) -> list[tuple[str, float]]:
    """Terms of one topic sorted by relevance, descending; ties lexicographic."""
    if not (0 <= topic < stats.k):
        raise ConfigError(f"topic index {topic} out of range [0, {stats.k})")
    if top_n < 1:
        raise ConfigError("top_n must be >= 1")
    scored = [
        (term, relevance(float(stats.p_kw[topic, i]), float(stats.p_w[i]), lam))
        for i, term in enumerate(stats.terms)
    ]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:top_n]


def rank_exported_terms(
    terms: Sequence[dict], lam: float, top_n: int
) -> list[tuple[str, float]]:
    """Re-rank a topic's exported term table for a new lambda.

    ``terms`` are payload entries with ``term``, ``p_kw`` and ``p_w`` keys;
    this applies the same formula and tie-break as :func:`rank_terms`.
    """
    scored = [(t["term"], relevance(t["p_kw"], t["p_w"], lam)) for t in terms]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return scored[:top_n]


# ---------------------------------------------------------------------------
# Topic distances and projection
# ---------------------------------------------------------------------------

def jensen_shannon(p: np.ndarray, q: np.ndarray) -> float:
    """Jensen-Shannon divergence with base-2 logs; symmetric, in [0, 1]."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ConfigError("distributions must have equal length")
    m = 0.5 * (p + q)

    def kl(a: np.ndarray) -> float:
        mask = a > 0
        return float(np.sum(a[mask] * np.log2(a[mask] / m[mask])))

    value = 0.5 * kl(p) + 0.5 * kl(q)
    return min(max(value, 0.0), 1.0)


def topic_distances(model_or_phi) -> np.ndarray:
    """K x K Jensen-Shannon divergence matrix between topic-word rows."""
    phi = getattr(model_or_phi, "phi", model_or_phi)
    phi = np.asarray(phi, dtype=np.float64)
    k = phi.shape[0]
    dist = np.zeros((k, k), dtype=np.float64)
    for i in range(k):
        for j in range(i + 1, k):
            d = jensen_shannon(phi[i], phi[j])
            dist[i, j] = d
            dist[j, i] = d
    return dist


def project_2d(distances: np.ndarray) -> np.ndarray:
    """Classical MDS: double-centering plus the top-2 eigenvectors.

    Negative eigenvalues (non-Euclidean inputs) are clamped to zero. Output
    is centered at the origin, with each axis sign-flipped so its largest
    magnitude coordinate is non-negative.
    """
    d = np.asarray(distances, dtype=np.float64)
    k = d.shape[0]
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ConfigError("distance matrix must be square")
    if k < 2:
        raise ConfigError("need at least 2 topics to project")
    if not np.allclose(d, d.T, atol=1e-12) or np.abs(np.diag(d)).max() > 1e-12:
        raise ConfigError("distance matrix must be symmetric with zero diagonal")

    j = np.eye(k) - np.full((k, k), 1.0 / k)
    b = -0.5 * j @ (d * d) @ j
    b = 0.5 * (b + b.T)
    eigvals, eigvecs = np.linalg.eigh(b)
    top = np.argsort(eigvals)[::-1][:2]
    vals = np.clip(eigvals[top], 0.0, None)
    coords = eigvecs[:, top] * np.sqrt(vals)[None, :]
    coords = coords - coords.mean(axis=0)
    for axis in range(coords.shape[1]):
        col = coords[:, axis]
        if len(col) and col[np.argmax(np.abs(col))] < 0:
            coords[:, axis] = -col
    return coords


# ---------------------------------------------------------------------------
# VisData payload
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VisTerm:
    term: str
    p_kw: float
    p_w: float


@dataclass(frozen=True)
class VisTopic:
    id: int
    x: float
    y: float
    proportion: float
    terms: tuple[VisTerm, ...]


@dataclass(frozen=True)
class VisData:
    k: int
    default_lambda: float
    topics: tuple[VisTopic, ...]
    n_tokens: int

    def to_payload(self) -> dict:
        return {
            "k": self.k,
            "default_lambda": self.default_lambda,
            "topics": [
                {
                    "id": t.id,
                    "x": t.x,
                    "y": t.y,
                    "proportion": t.proportion,
                    "terms": [
                        {"term": w.term, "p_kw": w.p_kw, "p_w": w.p_w} for w in t.terms
                    ],
                }
                for t in self.topics
            ],
            "corpus": {"n_tokens": self.n_tokens},
        }

    @classmethod
    def from_payload(cls, obj: dict) -> "VisData":
        topics = tuple(
            VisTopic(
                id=int(t["id"]),
                x=float(t["x"]),
                y=float(t["y"]),
                proportion=float(t["proportion"]),
                terms=tuple(
                    VisTerm(term=w["term"], p_kw=float(w["p_kw"]), p_w=float(w["p_w"]))
                    for w in t["terms"]
                ),
            )
            for t in obj["topics"]
        )
        return cls(
            k=int(obj["k"]),
            default_lambda=float(obj["default_lambda"]),
            topics=topics,
            n_tokens=int(obj["corpus"]["n_tokens"]),
        )


def export_vis(
    model: TopicModel,
    vocabulary: Vocabulary,
    top_n: int = DEFAULT_TOP_N,
    default_lambda: float = DEFAULT_LAMBDA,
) -> VisData:
    """Assemble the two-panel visualization payload for a trained model.

    Topic proportions weight each document's topic share by its length.
    Each topic table stores the ``top_n`` most relevant terms at the default
    lambda, with enough per-term data (p_kw, p_w) for a client to re-rank at
    any other lambda.
    """
    stats = build_term_stats(model, vocabulary)
    k = model.k
    lengths = np.asarray(model.doc_lengths, dtype=np.float64)
    total = float(lengths.sum())
    if total <= 0:
        raise ConfigError("model was trained on an empty corpus")
    proportions = (model.theta.T @ lengths) / total

    if k == 1:
        coords = np.zeros((1, 2))
    else:
        coords = project_2d(topic_distances(model.phi))

    n_terms = min(top_n, model.n_terms)
    term_index = {term: i for i, term in enumerate(stats.terms)}
    topics = []
    for topic in range(k):
        ranked = rank_terms(stats, topic, default_lambda, n_terms)
        table = tuple(
            VisTerm(
                term=term,
                p_kw=float(stats.p_kw[topic, term_index[term]]),
                p_w=float(stats.p_w[term_index[term]]),
            )
            for term, _score in ranked
        )
        topics.append(
            VisTopic(
                id=topic,
                x=float(coords[topic, 0]),
                y=float(coords[topic, 1]),
                proportion=float(proportions[topic]),
                terms=table,
            )
        )
    return VisData(
        k=k,
        default_lambda=default_lambda,
        topics=tuple(topics),
        n_tokens=int(lengths.sum()),
    )


def save_visdata(vis: VisData, path: Union[str, Path]):
    payload = json.dumps(vis.to_payload(), sort_keys=True, indent=2)
    Path(path).write_text(payload + "\n", encoding="utf-8")


def load_visdata(path: Union[str, Path]) -> VisData:
    return VisData.from_payload(json.loads(Path(path).read_text(encoding="utf-8")))
