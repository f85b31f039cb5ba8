"""Topic models trained with collapsed Gibbs sampling.

Inference integrates out the topic-word and doc-topic distributions and
resamples per-token topic assignments from count tables. The per-token full
conditional is proportional to

    (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta)

with the current token removed from all counts. Sampling inverts the
cumulative sum with strict inequality (smallest k with cum[k] > u * total).

Randomness comes from one PCG64 stream per document, seeded from the global
seed and a SHA-256 digest of the document id, and documents are swept in
lexicographic id order regardless of input order. Two consequences, both
covered by tests: runs are bit-identical across platforms for a given seed,
and permuting the input documents changes row indexing only, not any
document's sampled assignments.

Training is single-threaded and deterministic.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import ConfigError
from .preprocess import DocTermMatrix

_MASK64 = (1 << 64) - 1

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LdaConfig:
    """Sampler hyperparameters.

    ``alpha`` defaults to 50/k and ``beta`` to 0.01 when unset, classic
    collapsed-Gibbs settings. ``burn_in`` only affects estimation when
    ``average_estimates`` is on; the default estimator uses the final
    post-burn-in state so that runs stay reproducible.

    ``check_invariants`` is ``"ends"`` (after initialization and after the
    final sweep) or ``"every_sweep"``.
    """

    k: int
    alpha: Optional[float] = None
    beta: float = 0.01
    iterations: int = 1000
    burn_in: int = 200
    seed: int = 0
    average_estimates: bool = False
    check_invariants: str = "ends"

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.alpha is not None and self.alpha <= 0:
            raise ConfigError("alpha must be positive")
        if self.beta <= 0:
            raise ConfigError("beta must be positive")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if not (0 <= self.burn_in < self.iterations):
            raise ConfigError("burn_in must satisfy 0 <= burn_in < iterations")
        if self.check_invariants not in ("ends", "every_sweep"):
            raise ConfigError("check_invariants must be 'ends' or 'every_sweep'")

    @property
    def effective_alpha(self) -> float:
        return self.alpha if self.alpha is not None else 50.0 / self.k

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "alpha": self.alpha,
            "beta": self.beta,
            "iterations": self.iterations,
            "burn_in": self.burn_in,
            "seed": self.seed,
            "average_estimates": self.average_estimates,
            "check_invariants": self.check_invariants,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "LdaConfig":
        return cls(**obj)


@dataclass
class TopicModel:
    """Sampler state plus derived distributions.

    Count tables are plain nested lists of ints (topic x term ``n_kw``,
    doc x topic ``n_dk``, topic totals ``n_k``); ``phi`` and ``theta`` are
    the smoothed estimates phi_kw = (n_kw+b)/(n_k+V*b) and
    theta_dk = (n_dk+a)/(n_d+K*a), row-stochastic by construction.
    """

    config: LdaConfig
    doc_ids: tuple[str, ...]
    doc_lengths: tuple[int, ...]
    n_terms: int
    vocab_hash: str
    n_kw: list[list[int]]
    n_dk: list[list[int]]
    n_k: list[int]
    assignments: list[list[int]]
    phi: np.ndarray
    theta: np.ndarray
    invariant_checks: int = 0

    @property
    def k(self) -> int:
        return self.config.k

    def doc_index(self) -> dict[str, int]:
        return {doc_id: i for i, doc_id in enumerate(self.doc_ids)}

    def check_count_invariants(self, term_frequencies: Optional[list[int]] = None):
        """Assert the count-conservation identities; raises on violation."""
        _check_counts(
            self.n_kw, self.n_dk, self.n_k, list(self.doc_lengths), term_frequencies
        )


def _check_counts(n_kw, n_dk, n_k, doc_lengths, term_frequencies):
    kw = np.asarray(n_kw, dtype=np.int64)
    dk = np.asarray(n_dk, dtype=np.int64)
    k_tot = np.asarray(n_k, dtype=np.int64)
    if (kw < 0).any() or (dk < 0).any() or (k_tot < 0).any():
        raise AssertionError("negative count in sampler tables")
    if not np.array_equal(kw.sum(axis=1), k_tot):
        raise AssertionError("sum_w n_kw != n_k")
    if not np.array_equal(dk.sum(axis=1), np.asarray(doc_lengths, dtype=np.int64)):
        raise AssertionError("sum_k n_dk != document length")
    if term_frequencies is not None and not np.array_equal(
        kw.sum(axis=0), np.asarray(term_frequencies, dtype=np.int64)
    ):
        raise AssertionError("sum_k n_kw != corpus term frequency")


def _doc_rng(seed: int, doc_id: str) -> np.random.Generator:
    digest = hashlib.sha256(doc_id.encode("utf-8")).digest()
    words = [int.from_bytes(digest[i : i + 4], "big") for i in range(0, 16, 4)]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & _MASK64, *words])))


def _expand_rows(matrix: DocTermMatrix) -> list[list[int]]:
    """Flatten sparse rows into per-document word-id lists (term index order)."""
    docs: list[list[int]] = []
    for row in matrix.rows:
        words: list[int] = []
        for term_index, count in row:
            words.extend([term_index] * count)
        docs.append(words)
    return docs


def _estimate_phi(n_kw, n_k, beta: float, n_terms: int) -> np.ndarray:
    kw = np.asarray(n_kw, dtype=np.float64)
    denom = np.asarray(n_k, dtype=np.float64) + n_terms * beta
    return (kw + beta) / denom[:, None]


def _estimate_theta(n_dk, doc_lengths, alpha: float, k: int) -> np.ndarray:
    dk = np.asarray(n_dk, dtype=np.float64)
    denom = np.asarray(doc_lengths, dtype=np.float64) + k * alpha
    return (dk + alpha) / denom[:, None]


def train_lda(matrix: DocTermMatrix, config: LdaConfig) -> TopicModel:
    """Fit a topic model on a doc-term matrix; deterministic given the seed."""
    if matrix.n_docs == 0 or matrix.total_tokens == 0:
        raise ConfigError("cannot train on an empty matrix")
    if config.k > matrix.n_terms:
        raise ConfigError(
            f"more topics than terms (k={config.k}, vocabulary size {matrix.n_terms})"
        )

    K = config.k
    V = matrix.n_terms
    alpha = config.effective_alpha
    beta = config.beta
    v_beta = V * beta
    doc_lengths = matrix.doc_lengths
    term_frequencies = matrix.term_frequencies()

    words_by_doc = _expand_rows(matrix)
    order = sorted(range(matrix.n_docs), key=lambda i: matrix.doc_ids[i])
    rngs = [_doc_rng(config.seed, doc_id) for doc_id in matrix.doc_ids]

    n_kw = [[0] * V for _ in range(K)]
    n_dk = [[0] * K for _ in range(matrix.n_docs)]
    n_k = [0] * K
    z: list[list[int]] = [[] for _ in range(matrix.n_docs)]

    k_max = K - 1
    for d in order:
        words = words_by_doc[d]
        if not words:
            continue
        uniforms = rngs[d].random(len(words)).tolist()
        z_doc = [min(int(u * K), k_max) for u in uniforms]
        z[d] = z_doc
        n_dk_d = n_dk[d]
        for w, k in zip(words, z_doc):
            n_kw[k][w] += 1
            n_dk_d[k] += 1
            n_k[k] += 1

    checks = 0
    _check_counts(n_kw, n_dk, n_k, doc_lengths, term_frequencies)
    checks += 1

    phi_acc: Optional[np.ndarray] = None
    theta_acc: Optional[np.ndarray] = None
    n_averaged = 0

    cum = [0.0] * K
    topics = range(K)
    every_sweep = config.check_invariants == "every_sweep"

    for sweep in range(1, config.iterations + 1):
        for d in order:
            words = words_by_doc[d]
            if not words:
                continue
            z_doc = z[d]
            n_dk_d = n_dk[d]
            uniforms = rngs[d].random(len(words)).tolist()
            for t, w in enumerate(words):
                k_old = z_doc[t]
                n_kw[k_old][w] -= 1
                n_dk_d[k_old] -= 1
                n_k[k_old] -= 1

                total = 0.0
                for k in topics:
                    total += (n_dk_d[k] + alpha) * (n_kw[k][w] + beta) / (n_k[k] + v_beta)
                    cum[k] = total
                target = uniforms[t] * total
                k_new = 0
                while k_new < k_max and cum[k_new] <= target:
                    k_new += 1

                z_doc[t] = k_new
                n_kw[k_new][w] += 1
                n_dk_d[k_new] += 1
                n_k[k_new] += 1

        if every_sweep:
            _check_counts(n_kw, n_dk, n_k, doc_lengths, term_frequencies)
            checks += 1
        if config.average_estimates and sweep > config.burn_in:
            phi_s = _estimate_phi(n_kw, n_k, beta, V)
            theta_s = _estimate_theta(n_dk, doc_lengths, alpha, K)
            if phi_acc is None:
                phi_acc, theta_acc = phi_s, theta_s
            else:
                phi_acc += phi_s
                theta_acc += theta_s
            n_averaged += 1

    if not every_sweep:
        _check_counts(n_kw, n_dk, n_k, doc_lengths, term_frequencies)
        checks += 1

    if config.average_estimates:
        phi = phi_acc / n_averaged
        theta = theta_acc / n_averaged
    else:
        phi = _estimate_phi(n_kw, n_k, beta, V)
        theta = _estimate_theta(n_dk, doc_lengths, alpha, K)

    return TopicModel(
        config=config,
        doc_ids=matrix.doc_ids,
        doc_lengths=tuple(doc_lengths),
        n_terms=V,
        vocab_hash=matrix.vocab_hash,
        n_kw=n_kw,
        n_dk=n_dk,
        n_k=n_k,
        assignments=z,
        phi=phi,
        theta=theta,
        invariant_checks=checks,
    )


# ---------------------------------------------------------------------------
# Likelihood
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogLikelihood:
    per_token: float
    n_tokens: int
    n_oov: int


def log_likelihood(model: TopicModel, matrix: DocTermMatrix) -> LogLikelihood:
    """Mean per-token log p(w|d) = log sum_k theta_dk * phi_kw.

    Documents are matched to the model by id. Term indices outside the
    model's vocabulary are excluded and counted as out-of-vocabulary.
    """
    doc_index = model.doc_index()
    total = 0.0
    n_tokens = 0
    n_oov = 0
    for doc_id, row in zip(matrix.doc_ids, matrix.rows):
        d = doc_index.get(doc_id)
        if d is None:
            raise ConfigError(f"document {doc_id!r} not present in the model")
        theta_d = model.theta[d]
        for term_index, count in row:
            if term_index >= model.n_terms:
                n_oov += count
                continue
            p = float(theta_d @ model.phi[:, term_index])
            total += count * math.log(p)
            n_tokens += count
    if n_tokens == 0:
        raise ConfigError("no in-vocabulary tokens to score")
    return LogLikelihood(per_token=total / n_tokens, n_tokens=n_tokens, n_oov=n_oov)


# ---------------------------------------------------------------------------
# Topic-count sweep
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    k: int
    loglik_per_token: float
    mean_topic_distance: float
    seconds: float


def sweep_topic_counts(
    matrix: DocTermMatrix,
    k_min: int = 5,
    k_max: int = 12,
    template: Optional[LdaConfig] = None,
) -> tuple[list[TopicModel], list[SweepRow]]:
    """Train one model per topic count in [k_min, k_max] with diagnostics.

    The diagnostics row per K carries the training-set per-token
    log-likelihood, the mean pairwise topic distance, and wall time.
    """
    from .visdata import topic_distances

    if k_min > k_max:
        raise ConfigError(f"k_min {k_min} > k_max {k_max}")
    if template is None:
        template = LdaConfig(k=k_min)
    models: list[TopicModel] = []
    rows: list[SweepRow] = []
    for k in range(k_min, k_max + 1):
        config = replace(template, k=k)
        start = time.perf_counter()
        model = train_lda(matrix, config)
        seconds = time.perf_counter() - start
        ll = log_likelihood(model, matrix)
        if k >= 2:
            dist = topic_distances(model.phi)
            mean_distance = float(
                dist[np.triu_indices(k, 1)].mean()
            )
        else:
            mean_distance = 0.0
        models.append(model)
        rows.append(
            SweepRow(
                k=k,
                loglik_per_token=ll.per_token,
                mean_topic_distance=mean_distance,
                seconds=seconds,
            )
        )
    return models, rows


def sweep_to_csv(rows: list[SweepRow]) -> str:
    lines = ["K,loglik_per_token,mean_topic_distance,seconds"]
    for row in rows:
        lines.append(
            f"{row.k},{row.loglik_per_token!r},{row.mean_topic_distance!r},{row.seconds:.3f}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Model persistence
# ---------------------------------------------------------------------------

def model_to_dict(model: TopicModel, provenance: Optional[dict] = None) -> dict:
    obj = {
        "format_version": MODEL_FORMAT_VERSION,
        "config": model.config.to_dict(),
        "doc_ids": list(model.doc_ids),
        "doc_lengths": list(model.doc_lengths),
        "n_terms": model.n_terms,
        "vocab_hash": model.vocab_hash,
        "n_kw": model.n_kw,
        "n_dk": model.n_dk,
        "n_k": model.n_k,
        "assignments": model.assignments,
    }
    if model.config.average_estimates:
        obj["phi"] = model.phi.tolist()
        obj["theta"] = model.theta.tolist()
    if provenance:
        obj["provenance"] = provenance
    return obj


def save_model(
    model: TopicModel, path: Union[str, Path], provenance: Optional[dict] = None
):
    payload = json.dumps(
        model_to_dict(model, provenance), sort_keys=True, separators=(",", ":")
    )
    Path(path).write_text(payload, encoding="utf-8")


def load_model(path: Union[str, Path]) -> TopicModel:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if obj.get("format_version") != MODEL_FORMAT_VERSION:
        raise ConfigError(f"unsupported model format in {path}")
    config = LdaConfig.from_dict(obj["config"])
    doc_lengths = tuple(obj["doc_lengths"])
    if config.average_estimates:
        phi = np.asarray(obj["phi"], dtype=np.float64)
        theta = np.asarray(obj["theta"], dtype=np.float64)
    else:
        phi = _estimate_phi(obj["n_kw"], obj["n_k"], config.beta, obj["n_terms"])
        theta = _estimate_theta(
            obj["n_dk"], doc_lengths, config.effective_alpha, config.k
        )
    return TopicModel(
        config=config,
        doc_ids=tuple(obj["doc_ids"]),
        doc_lengths=doc_lengths,
        n_terms=obj["n_terms"],
        vocab_hash=obj.get("vocab_hash", ""),
        n_kw=obj["n_kw"],
        n_dk=obj["n_dk"],
        n_k=obj["n_k"],
        assignments=obj["assignments"],
        phi=phi,
        theta=theta,
    )
