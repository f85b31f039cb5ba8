"""Balanced binary classification datasets and train/test splitting.

Metadata tasks (age, gender, political wing) are built from speech records
of regular full members; sentiment and emotion corpora are merged from
external labeled sources through per-source adapter readers. Every build is
a pure function of (records, seed), so identical runs produce identical
datasets.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .errors import ConfigError, InsufficientClassError, ParlascopeError, StratificationError
from .records import MP_REGULAR, Gender, SpeechRecord

TASKS = ("age", "gender", "wing_center", "wing_extreme", "sentiment", "emotion")

WING_POSITIONS = ("extreme_left", "center_left", "center_right", "extreme_right", "other")

AGE_CUTOFF = 45

# Paper-equivalent defaults: 5000 per class for age, 2500 for the rest.
DEFAULT_N_PER_CLASS = {
    "age": 5000,
    "gender": 2500,
    "wing_center": 2500,
    "wing_extreme": 2500,
}


@dataclass(frozen=True)
class LabeledInstance:
    text: str
    label: int
    source_id: str


@dataclass(frozen=True)
class LabeledDataset:
    task: str
    instances: tuple[LabeledInstance, ...]

    def __post_init__(self):
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}")
        seen: set[str] = set()
        for inst in self.instances:
            if inst.label not in (0, 1):
                raise ValueError(f"label must be 0 or 1, got {inst.label}")
            if inst.source_id in seen:
                raise ValueError(f"duplicate source_id {inst.source_id!r}")
            seen.add(inst.source_id)

    def __len__(self) -> int:
        return len(self.instances)

    @property
    def class_counts(self) -> dict[int, int]:
        counts = {0: 0, 1: 0}
        for inst in self.instances:
            counts[inst.label] += 1
        return counts

    def save(self, path: Union[str, Path]) -> int:
        with open(path, "w", encoding="utf-8") as fh:
            for inst in self.instances:
                fh.write(
                    json.dumps(
                        {"text": inst.text, "label": inst.label, "source": inst.source_id},
                        ensure_ascii=False,
                    )
                )
                fh.write("\n")
        return len(self.instances)

    @classmethod
    def load(cls, path: Union[str, Path], task: str) -> "LabeledDataset":
        instances = []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    instances.append(
                        LabeledInstance(obj["text"], int(obj["label"]), obj["source"])
                    )
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    raise ParlascopeError(
                        f"corrupt dataset line {lineno} of {path}: {exc}"
                    ) from None
        return cls(task=task, instances=tuple(instances))


@dataclass(frozen=True)
class PartyWingMap:
    """Mapping parliament -> party name -> political position.

    Parties absent from the map count as ``other`` and are excluded from
    wing tasks. The shipped map is an editorial artifact and is meant to be
    edited per deployment.
    """

    positions: dict[str, dict[str, str]]

    def __post_init__(self):
        for parliament, parties in self.positions.items():
            for party, position in parties.items():
                if position not in WING_POSITIONS:
                    raise ConfigError(
                        f"invalid wing position {position!r} for {parliament}/{party}"
                    )

    def position(self, parliament: str, party: str) -> str:
        return self.positions.get(parliament, {}).get(party, "other")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "PartyWingMap":
        return cls(positions=json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.train_fraction < 1.0):
            raise ConfigError("train_fraction must be in (0, 1)")


# ---------------------------------------------------------------------------
# Metadata task construction
# ---------------------------------------------------------------------------

def age_label(record: SpeechRecord, cutoff: int = AGE_CUTOFF) -> Optional[int]:
    """0 for speakers at most ``cutoff`` years old at speech date, 1 above."""
    if record.birth_year is None:
        return None
    return 0 if record.date.year - record.birth_year <= cutoff else 1


def gender_label(record: SpeechRecord) -> Optional[int]:
    if record.gender == Gender.F:
        return 0
    if record.gender == Gender.M:
        return 1
    return None


def wing_label(
    record: SpeechRecord, wing_map: PartyWingMap, mode: str
) -> Optional[int]:
    position = wing_map.position(record.parliament, record.party)
    if mode == "wing_center":
        return {"center_left": 0, "center_right": 1}.get(position)
    if mode == "wing_extreme":
        return {"extreme_left": 0, "extreme_right": 1}.get(position)
    raise ConfigError(f"unknown wing mode {mode!r}")


def _sample_without_replacement(
    items: list, n: int, rng: np.random.Generator
) -> list:
    order = np.argsort(rng.random(len(items)), kind="stable")
    return [items[i] for i in order[:n]]


def build_metadata_task(
    records: Sequence[SpeechRecord],
    task: str,
    *,
    seed: int,
    n_per_class: Optional[int] = None,
    wing_map: Optional[PartyWingMap] = None,
    age_cutoff: int = AGE_CUTOFF,
) -> LabeledDataset:
    """Sample a balanced labeled dataset for a metadata prediction task.

    Only MP/Regular speeches are eligible; records with missing metadata for
    the task never receive a label. Sampling is uniform without replacement
    per class, deterministic for a given seed.
    """
    if task not in ("age", "gender", "wing_center", "wing_extreme"):
        raise ConfigError(f"not a metadata task: {task!r}")
    if n_per_class is None:
        n_per_class = DEFAULT_N_PER_CLASS[task]
    if n_per_class <= 0:
        raise ConfigError("n_per_class must be positive")

    if task == "age":
        labeler: Callable[[SpeechRecord], Optional[int]] = lambda r: age_label(r, age_cutoff)
    elif task == "gender":
        labeler = gender_label
    else:
        if wing_map is None:
            raise ConfigError(f"task {task!r} requires a party wing map")
        labeler = lambda r: wing_label(r, wing_map, task)

    by_label: dict[int, list[SpeechRecord]] = {0: [], 1: []}
    for record in sorted(records, key=lambda r: r.id):
        if not MP_REGULAR.matches(record):
            continue
        label = labeler(record)
        if label is not None:
            by_label[label].append(record)

    rng = np.random.default_rng(np.random.PCG64(seed))
    instances: list[LabeledInstance] = []
    for label in (0, 1):
        candidates = by_label[label]
        if len(candidates) < n_per_class:
            raise InsufficientClassError(task, label, n_per_class, len(candidates))
        for record in _sample_without_replacement(candidates, n_per_class, rng):
            instances.append(LabeledInstance(record.text, label, record.id))
    return LabeledDataset(task=task, instances=tuple(instances))


# ---------------------------------------------------------------------------
# Merging external labeled corpora
# ---------------------------------------------------------------------------

@dataclass
class LabeledSource:
    """One external corpus: rows of (text, raw label) plus a label mapping.

    ``label_map`` sends raw labels to 0, 1 or ``"discard"``; raw labels
    missing from the map are discarded as well.
    """

    name: str
    rows: Iterable[tuple[str, str]]
    label_map: dict[str, Union[int, str]]


@dataclass
class SourceCount:
    name: str
    negative: int = 0
    positive: int = 0
    discarded: int = 0


@dataclass
class MergeReport:
    per_source: list[SourceCount] = field(default_factory=list)
    negative: int = 0
    positive: int = 0
    declared_negative: Optional[int] = None
    declared_positive: Optional[int] = None

    @property
    def total(self) -> int:
        return self.negative + self.positive

    @property
    def negative_discrepancy(self) -> Optional[int]:
        if self.declared_negative is None:
            return None
        return self.negative - self.declared_negative

    @property
    def positive_discrepancy(self) -> Optional[int]:
        if self.declared_positive is None:
            return None
        return self.positive - self.declared_positive

    def to_dict(self) -> dict:
        return {
            "per_source": [
                {
                    "name": s.name,
                    "negative": s.negative,
                    "positive": s.positive,
                    "discarded": s.discarded,
                }
                for s in self.per_source
            ],
            "negative": self.negative,
            "positive": self.positive,
            "total": self.total,
            "declared_negative": self.declared_negative,
            "declared_positive": self.declared_positive,
            "negative_discrepancy": self.negative_discrepancy,
            "positive_discrepancy": self.positive_discrepancy,
        }


def merge_labeled_corpora(
    sources: Sequence[LabeledSource],
    task: str,
    declared_totals: Optional[tuple[int, int]] = None,
) -> tuple[LabeledDataset, MergeReport]:
    """Concatenate external corpora into one binary dataset with provenance.

    Instances keep source order then row order; ``source_id`` is
    ``<source name>:<row index>``. When ``declared_totals`` (negative,
    positive) is given, the report compares computed against declared counts
    and surfaces any discrepancy rather than guessing which is right.
    """
    report = MergeReport()
    if declared_totals is not None:
        report.declared_negative, report.declared_positive = declared_totals
    instances: list[LabeledInstance] = []
    for source in sources:
        count = SourceCount(name=source.name)
        try:
            for row_index, (text, raw_label) in enumerate(source.rows):
                mapped = source.label_map.get(str(raw_label), "discard")
                if mapped not in (0, 1):
                    count.discarded += 1
                    continue
                if mapped == 0:
                    count.negative += 1
                else:
                    count.positive += 1
                instances.append(
                    LabeledInstance(text, mapped, f"{source.name}:{row_index}")
                )
        except ParlascopeError:
            raise
        except Exception as exc:
            raise ParlascopeError(f"unreadable source {source.name!r}: {exc}") from exc
        report.per_source.append(count)
        report.negative += count.negative
        report.positive += count.positive
    if not instances:
        raise ConfigError("merge produced an empty dataset")
    return LabeledDataset(task=task, instances=tuple(instances)), report


def read_csv_source(
    path: Union[str, Path], text_field: str, label_field: str
) -> Iterator[tuple[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            yield row[text_field], row[label_field]


def read_jsonl_source(
    path: Union[str, Path], text_field: str, label_field: str
) -> Iterator[tuple[str, str]]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                obj = json.loads(line)
                yield obj[text_field], str(obj[label_field])


def sources_from_manifest(
    manifest_path: Union[str, Path],
) -> tuple[list[LabeledSource], str, Optional[tuple[int, int]]]:
    """Instantiate adapter readers from a JSON source manifest.

    The manifest names the task, optional declared totals, and one entry per
    source with its path, format (csv or jsonl), field names, and label map.
    Relative paths resolve against the manifest location.
    """
    manifest_path = Path(manifest_path)
    obj = json.loads(manifest_path.read_text(encoding="utf-8"))
    task = obj.get("task")
    if task not in ("sentiment", "emotion"):
        raise ConfigError(f"manifest task must be sentiment or emotion, got {task!r}")
    declared = None
    if "declared_totals" in obj:
        declared = (
            int(obj["declared_totals"]["negative"]),
            int(obj["declared_totals"]["positive"]),
        )
    sources = []
    for entry in obj["sources"]:
        path = Path(entry["path"])
        if not path.is_absolute():
            path = manifest_path.parent / path
        if not path.exists():
            raise ConfigError(f"source file not found: {path}")
        label_map = {
            str(k): (v if v in (0, 1) else "discard")
            for k, v in entry["label_map"].items()
        }
        fmt = entry.get("format", "csv")
        if fmt == "csv":
            rows = read_csv_source(path, entry["text_field"], entry["label_field"])
        elif fmt == "jsonl":
            rows = read_jsonl_source(path, entry["text_field"], entry["label_field"])
        else:
            raise ConfigError(f"unknown source format {fmt!r}")
        sources.append(LabeledSource(entry["name"], rows, label_map))
    return sources, task, declared


# ---------------------------------------------------------------------------
# Train/test split
# ---------------------------------------------------------------------------

def split_dataset(
    dataset: LabeledDataset, spec: SplitSpec
) -> tuple[LabeledDataset, LabeledDataset]:
    """Stratified shuffled split into disjoint, exhaustive train/test halves.

    Per class the train share is round(train_fraction * n_c) (half-up),
    clamped so both halves keep at least one instance. Classes with fewer
    than 2 instances cannot be stratified.
    """
    if len(dataset) == 0:
        raise ConfigError("cannot split an empty dataset")
    by_label: dict[int, list[LabeledInstance]] = {0: [], 1: []}
    for inst in dataset.instances:
        by_label[inst.label].append(inst)

    rng = np.random.default_rng(np.random.PCG64(spec.seed))
    train: list[LabeledInstance] = []
    test: list[LabeledInstance] = []
    for label in (0, 1):
        group = by_label[label]
        n_c = len(group)
        if n_c < 2:
            raise StratificationError(
                f"class {label} has {n_c} instance(s); need >= 2 to stratify"
            )
        n_train = int(spec.train_fraction * n_c + 0.5)
        n_train = min(max(n_train, 1), n_c - 1)
        shuffled = _sample_without_replacement(group, n_c, rng)
        train.extend(shuffled[:n_train])
        test.extend(shuffled[n_train:])
    return (
        LabeledDataset(task=dataset.task, instances=tuple(train)),
        LabeledDataset(task=dataset.task, instances=tuple(test)),
    )
