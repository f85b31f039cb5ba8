"""Classifier contract, baseline model, external scorer bridge, and metrics.

Every prediction task works against the same contract: ``predict(text)``
returns ``(label, score)`` where the score is the probability of label 1
and the label is 1 exactly when the score exceeds 0.5 (ties go to 0).

The built-in baseline is a multinomial naive-Bayes model over preprocessed
unigram counts with add-one smoothing: deterministic, order-invariant, and
cheap enough for desk-scale evaluation. Heavyweight scorers (fine-tuned
transformer services and the like) plug in through a line protocol instead:
one JSON object per line, ``{"id": ..., "text": ...}`` in and
``{"id": ..., "score": ...}`` out, over standard streams or HTTP POST.
"""

from __future__ import annotations

import json
import math
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Protocol, Sequence, Union

import httpx
import numpy as np

from .datasets import LabeledDataset
from .errors import ConfigError, ParlascopeError, ProtocolError
from .preprocess import CleanConfig, normalize_tokens


class TextClassifier(Protocol):
    def predict(self, text: str) -> tuple[int, float]: ...


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Metrics:
    """Confusion counts and derived scores, with label 1 as positive class.

    Ratios with a zero denominator are ``None`` (reported absent), never
    silently coerced to 0.
    """

    tp: int
    fp: int
    fn: int
    tn: int
    accuracy: float
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def to_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "tn": self.tn,
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def f1_score(precision: float, recall: float) -> Optional[float]:
    """Harmonic mean of precision and recall; None when both are zero."""
    if precision + recall == 0:
        return None
    return 2.0 * precision * recall / (precision + recall)


def compute_metrics(tp: int, fp: int, fn: int, tn: int) -> Metrics:
    for name, value in (("tp", tp), ("fp", fp), ("fn", fn), ("tn", tn)):
        if value < 0:
            raise ConfigError(f"{name} must be non-negative, got {value}")
    n = tp + fp + fn + tn
    if n == 0:
        raise ConfigError("confusion counts are all zero")
    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    recall = tp / (tp + fn) if (tp + fn) > 0 else None
    f1 = None
    if precision is not None and recall is not None:
        f1 = f1_score(precision, recall)
    return Metrics(
        tp=tp,
        fp=fp,
        fn=fn,
        tn=tn,
        accuracy=(tp + tn) / n,
        precision=precision,
        recall=recall,
        f1=f1,
    )


def evaluate(classifier: TextClassifier, test: LabeledDataset) -> Metrics:
    """Confusion-matrix evaluation of a classifier on a labeled test set."""
    if len(test) == 0:
        raise ConfigError("test set is empty")
    tp = fp = fn = tn = 0
    for inst in test.instances:
        label, _score = classifier.predict(inst.text)
        if inst.label == 1:
            if label == 1:
                tp += 1
            else:
                fn += 1
        else:
            if label == 1:
                fp += 1
            else:
                tn += 1
    return compute_metrics(tp, fp, fn, tn)


# ---------------------------------------------------------------------------
# Baseline classifier
# ---------------------------------------------------------------------------

@dataclass
class NaiveBayesClassifier:
    """Multinomial naive Bayes with add-one smoothing over unigram counts.

    Tokens come from :func:`normalize_tokens` under ``config``; tokens
    outside the training vocabulary are ignored at prediction time. The
    score is the normalized posterior of label 1.
    """

    config: CleanConfig
    terms: tuple[str, ...]
    log_prior: tuple[float, float]
    log_cond: np.ndarray  # shape (2, V)
    _index: dict[str, int]

    def predict(self, text: str) -> tuple[int, float]:
        lp0, lp1 = self.log_prior
        for tok in normalize_tokens(text, self.config):
            idx = self._index.get(tok)
            if idx is not None:
                lp0 += self.log_cond[0, idx]
                lp1 += self.log_cond[1, idx]
        score = float(math.exp(lp1 - np.logaddexp(lp0, lp1)))
        return (1 if score > 0.5 else 0, score)

    def save(self, path: Union[str, Path]):
        obj = {
            "format_version": 1,
            "clean_config": self.config.to_dict(),
            "terms": list(self.terms),
            "log_prior": list(self.log_prior),
            "log_cond": self.log_cond.tolist(),
        }
        Path(path).write_text(
            json.dumps(obj, sort_keys=True, separators=(",", ":")), encoding="utf-8"
        )

    @classmethod
    def load(cls, path: Union[str, Path]) -> "NaiveBayesClassifier":
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        terms = tuple(obj["terms"])
        return cls(
            config=CleanConfig.from_dict(obj["clean_config"]),
            terms=terms,
            log_prior=tuple(obj["log_prior"]),
            log_cond=np.asarray(obj["log_cond"], dtype=np.float64),
            _index={t: i for i, t in enumerate(terms)},
        )


def train_baseline(
    train: LabeledDataset, config: Optional[CleanConfig] = None
) -> NaiveBayesClassifier:
    """Fit the naive-Bayes baseline; requires both labels in the input."""
    if config is None:
        config = CleanConfig()
    counts = train.class_counts
    if counts[0] == 0 or counts[1] == 0:
        raise ConfigError("training data must contain both labels")

    term_counts: dict[str, list[int]] = {}
    class_tokens = [0, 0]
    for inst in train.instances:
        for tok in normalize_tokens(inst.text, config):
            if tok not in term_counts:
                term_counts[tok] = [0, 0]
            term_counts[tok][inst.label] += 1
            class_tokens[inst.label] += 1

    terms = tuple(sorted(term_counts))
    v = len(terms)
    log_cond = np.empty((2, v), dtype=np.float64)
    for i, term in enumerate(terms):
        for label in (0, 1):
            log_cond[label, i] = math.log(
                (term_counts[term][label] + 1) / (class_tokens[label] + v)
            )
    n = len(train)
    log_prior = (math.log(counts[0] / n), math.log(counts[1] / n))
    return NaiveBayesClassifier(
        config=config,
        terms=terms,
        log_prior=log_prior,
        log_cond=log_cond,
        _index={t: i for i, t in enumerate(terms)},
    )


def predict_batch(
    classifier: TextClassifier, texts: Sequence[str]
) -> list[tuple[int, float]]:
    """Order-preserving batch prediction; equivalent to a loop of predicts."""
    return [classifier.predict(text) for text in texts]


# ---------------------------------------------------------------------------
# External scorer bridge
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScorerEndpoint:
    """Where to reach an external scorer: an HTTP URL or a command line."""

    url: Optional[str] = None
    command: Optional[tuple[str, ...]] = None
    timeout: float = 30.0
    retries: int = 0

    def __post_init__(self):
        if (self.url is None) == (self.command is None):
            raise ConfigError("exactly one of url or command must be set")
        if self.timeout <= 0:
            raise ConfigError("timeout must be positive")
        if self.retries < 0:
            raise ConfigError("retries must be >= 0")


def _call_command(endpoint: ScorerEndpoint, payload: str) -> str:
    result = subprocess.run(
        list(endpoint.command),
        input=payload.encode("utf-8"),
        capture_output=True,
        timeout=endpoint.timeout,
    )
    if result.returncode != 0:
        raise ParlascopeError(
            f"scorer command failed with exit {result.returncode}: "
            f"{result.stderr.decode('utf-8', 'replace')[:500]}"
        )
    return result.stdout.decode("utf-8")


def _call_http(
    endpoint: ScorerEndpoint, payload: str, client: Optional[httpx.Client]
) -> str:
    def post(c: httpx.Client) -> str:
        response = c.post(
            endpoint.url,
            content=payload.encode("utf-8"),
            headers={"content-type": "application/x-ndjson"},
        )
        response.raise_for_status()
        return response.text

    if client is not None:
        return post(client)
    with httpx.Client(timeout=endpoint.timeout) as c:
        return post(c)


def external_score(
    endpoint: ScorerEndpoint,
    texts: Sequence[str],
    *,
    client: Optional[httpx.Client] = None,
) -> list[float]:
    """Score texts through the external line protocol.

    One request object per line; responses are matched back by id, so the
    scorer may answer out of order. Timeouts retry the whole batch up to
    ``endpoint.retries`` times.
    """
    if not texts:
        return []
    ids = [f"t{i}" for i in range(len(texts))]
    payload = (
        "\n".join(
            json.dumps({"id": i, "text": t}, ensure_ascii=False)
            for i, t in zip(ids, texts)
        )
        + "\n"
    )

    last_timeout: Optional[Exception] = None
    raw: Optional[str] = None
    for _attempt in range(endpoint.retries + 1):
        try:
            if endpoint.command is not None:
                raw = _call_command(endpoint, payload)
            else:
                raw = _call_http(endpoint, payload, client)
            break
        except (subprocess.TimeoutExpired, httpx.TimeoutException) as exc:
            last_timeout = exc
    if raw is None:
        raise ParlascopeError(
            f"scorer timed out after {endpoint.retries + 1} attempt(s): {last_timeout}"
        )

    id_set = set(ids)
    by_id: dict[str, float] = {}
    for line in raw.splitlines():
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            raise ProtocolError(f"malformed response line: {line!r}") from None
        if not isinstance(obj, dict) or "id" not in obj or "score" not in obj:
            raise ProtocolError(f"response line missing id/score: {line!r}")
        try:
            score = float(obj["score"])
        except (TypeError, ValueError):
            raise ProtocolError(f"non-numeric score: {line!r}") from None
        if not (0.0 <= score <= 1.0):
            raise ProtocolError(f"score out of [0, 1]: {line!r}")
        rid = obj["id"]
        if rid not in id_set:
            raise ProtocolError(f"response for unknown id {rid!r}")
        if rid in by_id:
            raise ProtocolError(f"duplicate response for id {rid!r}")
        by_id[rid] = score

    missing = [i for i in ids if i not in by_id]
    if missing:
        raise ProtocolError(f"no response for id(s): {', '.join(missing[:5])}")
    return [by_id[i] for i in ids]
