"""Polarity summaries, score histograms, and manual-validation exports.

Scores live in [0, 1] with 0 the negative pole. A speech counts as negative
when its score is strictly below the negative threshold (default 0.2) and
positive strictly above the positive threshold (default 0.8); scores landing
exactly on a threshold are neutral. Percentages are kept at full precision
and rounded to 2 decimals only at render time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .errors import ConfigError
from .records import SpeakerRole, SpeakerType, SpeechRecord

NEG_THRESHOLD = 0.2
POS_THRESHOLD = 0.8
DEFAULT_BINS = 20
DEFAULT_SAMPLE_SIZE = 10000
DEFAULT_MIN_CHARS = 30


@dataclass(frozen=True)
class ScoredSpeech:
    speech_id: str
    score: float
    scorer_id: str = ""

    def __post_init__(self):
        if not (0.0 <= self.score <= 1.0):
            raise ValueError(f"score {self.score} out of [0, 1]")


@dataclass(frozen=True)
class PolaritySummary:
    n: int
    pct_negative: float
    pct_neutral: float
    pct_positive: float
    neg_threshold: float = NEG_THRESHOLD
    pos_threshold: float = POS_THRESHOLD

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pct_negative": self.pct_negative,
            "pct_neutral": self.pct_neutral,
            "pct_positive": self.pct_positive,
            "neg_threshold": self.neg_threshold,
            "pos_threshold": self.pos_threshold,
        }


@dataclass(frozen=True)
class SampleResult:
    records: tuple[SpeechRecord, ...]
    requested: int
    shortfall: bool


@dataclass(frozen=True)
class TopKResult:
    speeches: tuple[ScoredSpeech, ...]
    truncated: bool  # fewer than k items were available


def sample_speeches(
    records: Sequence[SpeechRecord],
    year: int,
    min_chars: int = DEFAULT_MIN_CHARS,
    n: int = DEFAULT_SAMPLE_SIZE,
    seed: int = 0,
) -> SampleResult:
    """Uniform sample of regular-MP speeches from one year.

    Eligible records have speaker type MP, role Regular, a date in ``year``
    and strictly more than ``min_chars`` characters of text. When fewer than
    ``n`` are eligible all of them are returned with the shortfall flagged.
    """
    eligible = sorted(
        (
            r
            for r in records
            if r.speaker_type == SpeakerType.MP
            and r.speaker_role == SpeakerRole.REGULAR
            and r.date.year == year
            and len(r.text) > min_chars
        ),
        key=lambda r: r.id,
    )
    if len(eligible) <= n:
        return SampleResult(records=tuple(eligible), requested=n, shortfall=len(eligible) < n)
    rng = np.random.default_rng(np.random.PCG64(seed))
    order = np.argsort(rng.random(len(eligible)), kind="stable")
    return SampleResult(
        records=tuple(eligible[i] for i in order[:n]), requested=n, shortfall=False
    )


def polarity_summary(
    scores: Sequence[float],
    neg_thr: float = NEG_THRESHOLD,
    pos_thr: float = POS_THRESHOLD,
) -> PolaritySummary:
    """Percentage of negative / neutral / positive scores (strict thresholds)."""
    if not (0.0 < neg_thr < pos_thr < 1.0):
        raise ConfigError("thresholds must satisfy 0 < neg < pos < 1")
    if len(scores) == 0:
        raise ConfigError("no scores to summarize")
    negative = neutral = positive = 0
    for s in scores:
        if not (0.0 <= s <= 1.0):
            raise ConfigError(f"score {s} out of [0, 1]")
        if s < neg_thr:
            negative += 1
        elif s > pos_thr:
            positive += 1
        else:
            neutral += 1
    n = len(scores)
    return PolaritySummary(
        n=n,
        pct_negative=100.0 * negative / n,
        pct_neutral=100.0 * neutral / n,
        pct_positive=100.0 * positive / n,
        neg_threshold=neg_thr,
        pos_threshold=pos_thr,
    )


def histogram(scores: Sequence[float], bins: int = DEFAULT_BINS) -> list[int]:
    """Equal-width bin counts on [0, 1]; right-open except the last bin."""
    if bins < 2:
        raise ConfigError("bins must be >= 2")
    counts = [0] * bins
    for s in scores:
        if not (0.0 <= s <= 1.0):
            raise ConfigError(f"score {s} out of [0, 1]")
        counts[min(int(s * bins), bins - 1)] += 1
    return counts


def top_k_extreme(
    scored: Sequence[ScoredSpeech], k: int = 20, direction: str = "negative"
) -> TopKResult:
    """The k most extreme speeches by score, ties broken by speech id."""
    if k < 1:
        raise ConfigError("k must be >= 1")
    if direction == "negative":
        key = lambda s: (s.score, s.speech_id)
    elif direction == "positive":
        key = lambda s: (-s.score, s.speech_id)
    else:
        raise ConfigError(f"direction must be negative or positive, got {direction!r}")
    ranked = sorted(scored, key=key)
    return TopKResult(speeches=tuple(ranked[:k]), truncated=len(scored) < k)


def save_scores(scored: Sequence[ScoredSpeech], path: Union[str, Path]) -> int:
    with open(path, "w", encoding="utf-8") as fh:
        for s in scored:
            fh.write(json.dumps({"id": s.speech_id, "score": s.score, "scorer": s.scorer_id}))
            fh.write("\n")
    return len(scored)


def load_scores(path: Union[str, Path]) -> list[ScoredSpeech]:
    out: list[ScoredSpeech] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                out.append(ScoredSpeech(obj["id"], float(obj["score"]), obj.get("scorer", "")))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ConfigError(f"corrupt score line {lineno} of {path}: {exc}") from None
    return out


# ---------------------------------------------------------------------------
# Report bundle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationItem:
    """One extreme speech exported with full text for human annotation."""

    speech_id: str
    score: float
    text: str


@dataclass
class ParliamentReport:
    summary: PolaritySummary
    histogram: list[int]
    validation_negative: Optional[list[ValidationItem]] = None
    validation_positive: Optional[list[ValidationItem]] = None


def _histogram_svg(counts: Sequence[int], title: str) -> str:
    width, height = 480, 260
    margin_left, margin_bottom, margin_top = 40, 30, 26
    plot_w = width - margin_left - 10
    plot_h = height - margin_top - margin_bottom
    peak = max(max(counts), 1)
    bar_w = plot_w / len(counts)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<text x="{margin_left}" y="16" font-family="sans-serif" font-size="13">{title}</text>',
    ]
    for i, count in enumerate(counts):
        bar_h = plot_h * count / peak
        x = margin_left + i * bar_w
        y = margin_top + plot_h - bar_h
        parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{bar_w * 0.9:.2f}" '
            f'height="{bar_h:.2f}" fill="#4878a8"/>'
        )
    axis_y = margin_top + plot_h
    parts.append(
        f'<line x1="{margin_left}" y1="{axis_y}" x2="{margin_left + plot_w}" '
        f'y2="{axis_y}" stroke="#333" stroke-width="1"/>'
    )
    for frac, label in ((0.0, "0"), (0.5, "0.5"), (1.0, "1")):
        x = margin_left + frac * plot_w
        parts.append(
            f'<text x="{x:.2f}" y="{axis_y + 16}" font-family="sans-serif" '
            f'font-size="11" text-anchor="middle">{label}</text>'
        )
    parts.append(
        f'<text x="{margin_left - 6}" y="{margin_top + 4}" font-family="sans-serif" '
        f'font-size="11" text-anchor="end">{peak}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


@dataclass
class ReportBundle:
    out_dir: Path
    summary_csv: Path
    report_json: Path
    histogram_svgs: dict[str, Path]
    validation_files: dict[str, Path]
    negative_max: list[str]
    positive_max: list[str]


def render_report(
    reports: Mapping[str, ParliamentReport], out_dir: Union[str, Path]
) -> ReportBundle:
    """Write the report bundle: CSV summary, SVG histograms, JSON, validation lists.

    Parliaments whose negative (resp. positive) percentage is maximal across
    the table are flagged, mirroring how such cells are usually bolded.
    """
    if not reports:
        raise ConfigError("need at least one parliament to report on")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    parliaments = sorted(reports)
    max_neg = max(reports[p].summary.pct_negative for p in parliaments)
    max_pos = max(reports[p].summary.pct_positive for p in parliaments)
    negative_max = [p for p in parliaments if reports[p].summary.pct_negative == max_neg]
    positive_max = [p for p in parliaments if reports[p].summary.pct_positive == max_pos]

    summary_csv = out_dir / "summary.csv"
    lines = ["parliament,pct_negative,pct_positive,pct_neutral"]
    for p in parliaments:
        s = reports[p].summary
        lines.append(f"{p},{s.pct_negative:.2f},{s.pct_positive:.2f},{s.pct_neutral:.2f}")
    summary_csv.write_text("\n".join(lines) + "\n", encoding="utf-8")

    histogram_svgs: dict[str, Path] = {}
    for p in parliaments:
        path = out_dir / f"histogram_{p}.svg"
        path.write_text(_histogram_svg(reports[p].histogram, f"Score distribution {p}"),
                        encoding="utf-8")
        histogram_svgs[p] = path

    validation_files: dict[str, Path] = {}
    for p in parliaments:
        for direction, items in (
            ("negative", reports[p].validation_negative),
            ("positive", reports[p].validation_positive),
        ):
            if items is None:
                continue
            path = out_dir / f"validation_{p}_{direction}.jsonl"
            with open(path, "w", encoding="utf-8") as fh:
                for item in items:
                    fh.write(
                        json.dumps(
                            {"id": item.speech_id, "score": item.score, "text": item.text},
                            ensure_ascii=False,
                        )
                    )
                    fh.write("\n")
            validation_files[f"{p}_{direction}"] = path

    report_json = out_dir / "report.json"
    payload = {
        "parliaments": {
            p: {
                "summary": reports[p].summary.to_dict(),
                "histogram": list(reports[p].histogram),
                "negative_max": p in negative_max,
                "positive_max": p in positive_max,
            }
            for p in parliaments
        },
        "negative_max": negative_max,
        "positive_max": positive_max,
    }
    report_json.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                           encoding="utf-8")

    return ReportBundle(
        out_dir=out_dir,
        summary_csv=summary_csv,
        report_json=report_json,
        histogram_svgs=histogram_svgs,
        validation_files=validation_files,
        negative_max=negative_max,
        positive_max=positive_max,
    )
