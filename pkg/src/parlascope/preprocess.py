"""Text cleaning and bag-of-words construction.

The cleaning pipeline has three steps: (1) punctuation removal, lowercasing
and stopword removal, (2) domain stopword removal, (3) POS filtering on
annotated tokens (keep nouns, adjectives and verbs by default). When a
record carries no annotations the pipeline degrades to steps 1-2 and the
caller is told so.

Everything here is a pure function over immutable inputs; vocabulary
construction is a deterministic reduction.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .errors import ConfigError, UnannotatedError
from .records import AnnotatedToken, SpeechRecord

DEFAULT_KEEP_UPOS = frozenset({"NOUN", "ADJ", "VERB"})


@lru_cache(maxsize=4096)
def _is_punct_or_symbol(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S")


@dataclass(frozen=True)
class CleanConfig:
    """Configuration for the cleaning pipeline.

    ``keep_upos`` defaults to nouns, adjectives and verbs; proper nouns are
    excluded by default and can be re-added to reproduce name leakage in
    topic terms. ``min_token_len`` removes single-letter residue.
    """

    language: str = "en"
    stopwords: frozenset[str] = frozenset()
    domain_stopwords: frozenset[str] = frozenset()
    keep_upos: frozenset[str] = DEFAULT_KEEP_UPOS
    min_token_len: int = 2
    lowercase: bool = True

    def __post_init__(self):
        if not self.keep_upos:
            raise ConfigError("keep_upos must be non-empty")
        if self.min_token_len < 1:
            raise ConfigError("min_token_len must be >= 1")
        for name in ("stopwords", "domain_stopwords", "keep_upos"):
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "stopwords": sorted(self.stopwords),
            "domain_stopwords": sorted(self.domain_stopwords),
            "keep_upos": sorted(self.keep_upos),
            "min_token_len": self.min_token_len,
            "lowercase": self.lowercase,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "CleanConfig":
        return cls(
            language=obj.get("language", "en"),
            stopwords=frozenset(obj.get("stopwords", ())),
            domain_stopwords=frozenset(obj.get("domain_stopwords", ())),
            keep_upos=frozenset(obj.get("keep_upos", DEFAULT_KEEP_UPOS)),
            min_token_len=obj.get("min_token_len", 2),
            lowercase=obj.get("lowercase", True),
        )


def load_stopword_file(path: Union[str, Path]) -> frozenset[str]:
    """Read a stopword list: UTF-8, one term per line, ``#`` comments."""
    terms: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            term = line.split("#", 1)[0].strip()
            if term:
                terms.add(term)
    return frozenset(terms)


def config_for_language(
    language: str,
    config_dir: Union[str, Path],
    **overrides,
) -> CleanConfig:
    """Build a CleanConfig from per-language list files under ``config_dir``.

    Expects ``<config_dir>/stopwords/<language>.txt`` and, optionally,
    ``<config_dir>/domain_stopwords/<language>.txt``.
    """
    config_dir = Path(config_dir)
    stop_path = config_dir / "stopwords" / f"{language}.txt"
    if not stop_path.exists():
        raise ConfigError(f"no stopword list for language {language!r} at {stop_path}")
    domain_path = config_dir / "domain_stopwords" / f"{language}.txt"
    domain = load_stopword_file(domain_path) if domain_path.exists() else frozenset()
    return CleanConfig(
        language=language,
        stopwords=load_stopword_file(stop_path),
        domain_stopwords=domain,
        **overrides,
    )


def normalize_tokens(text: str, config: CleanConfig) -> list[str]:
    """Clean raw text into tokens.

    Punctuation and symbol characters (Unicode general categories P* and S*)
    are replaced by spaces, the text is lowercased when configured, and
    stopwords, domain stopwords and short tokens are dropped.
    """
    if config.lowercase:
        text = text.lower()
    cleaned = "".join(" " if _is_punct_or_symbol(ch) else ch for ch in text)
    return [
        tok
        for tok in cleaned.split()
        if len(tok) >= config.min_token_len
        and tok not in config.stopwords
        and tok not in config.domain_stopwords
    ]


def pos_filter(
    tokens: Optional[Sequence[AnnotatedToken]], config: CleanConfig
) -> list[str]:
    """Keep lemmas of tokens whose UPOS is in ``config.keep_upos``.

    Raises :class:`UnannotatedError` when tokens are absent so the caller
    can fall back to :func:`normalize_tokens` alone.
    """
    if tokens is None:
        raise UnannotatedError("record has no token annotations")
    return [t.lemma for t in tokens if t.upos in config.keep_upos]


def clean_record(record: SpeechRecord, config: CleanConfig) -> tuple[list[str], bool]:
    """Run the full pipeline on one record.

    Returns ``(tokens, pos_filtered)`` where the flag records whether the
    POS step ran. Annotated records are POS-filtered first and the surviving
    lemmas then pass through the same normalization; unannotated records get
    normalization only.
    """
    try:
        lemmas = pos_filter(record.tokens, config)
    except UnannotatedError:
        return normalize_tokens(record.text, config), False
    return normalize_tokens(" ".join(lemmas), config), True


# ---------------------------------------------------------------------------
# Vocabulary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Vocabulary:
    """Dense term index with corpus frequencies.

    Terms are ordered by descending corpus frequency, ties broken
    lexicographically, so index assignment is deterministic.
    ``total_tokens`` is the summed frequency of the retained terms.
    """

    terms: tuple[str, ...]
    frequencies: tuple[int, ...]
    index: dict[str, int] = field(compare=False, repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.index:
            object.__setattr__(
                self, "index", {t: i for i, t in enumerate(self.terms)}
            )

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def total_tokens(self) -> int:
        return sum(self.frequencies)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        for term, freq in zip(self.terms, self.frequencies):
            h.update(f"{term}\t{freq}\n".encode("utf-8"))
        return h.hexdigest()

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "term", "frequency"])
        for i, (term, freq) in enumerate(zip(self.terms, self.frequencies)):
            writer.writerow([i, term, freq])
        return buf.getvalue()

    def save(self, path: Union[str, Path]):
        Path(path).write_text(self.to_csv(), encoding="utf-8")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Vocabulary":
        terms: list[str] = []
        freqs: list[int] = []
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ["index", "term", "frequency"]:
                raise ConfigError(f"not a vocabulary file: {path}")
            for row in reader:
                terms.append(row[1])
                freqs.append(int(row[2]))
        return cls(terms=tuple(terms), frequencies=tuple(freqs))


def build_vocabulary(
    token_lists: Iterable[Sequence[str]], min_count: int = 1
) -> Vocabulary:
    """Index terms with corpus frequency >= ``min_count``."""
    if min_count < 1:
        raise ConfigError("min_count must be >= 1")
    counts: dict[str, int] = {}
    for tokens in token_lists:
        for tok in tokens:
            counts[tok] = counts.get(tok, 0) + 1
    kept = sorted(
        ((term, freq) for term, freq in counts.items() if freq >= min_count),
        key=lambda item: (-item[1], item[0]),
    )
    return Vocabulary(
        terms=tuple(t for t, _ in kept), frequencies=tuple(f for _, f in kept)
    )


# ---------------------------------------------------------------------------
# Document-term matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DocTermMatrix:
    """Sparse bag-of-words rows aligned to document ids.

    Each row is a list of ``(term_index, count)`` pairs sorted by term
    index. Rows that lost every token to the vocabulary filter are retained
    (and listed by :attr:`empty_docs`) so document order stays stable.
    """

    doc_ids: tuple[str, ...]
    rows: tuple[tuple[tuple[int, int], ...], ...]
    n_terms: int
    vocab_hash: str = ""

    def __post_init__(self):
        if len(self.doc_ids) != len(self.rows):
            raise ValueError("doc_ids and rows must have equal length")
        if len(set(self.doc_ids)) != len(self.doc_ids):
            raise ValueError("doc_ids must be unique")
        for row in self.rows:
            for term_index, count in row:
                if count <= 0:
                    raise ValueError("counts must be positive")
                if not (0 <= term_index < self.n_terms):
                    raise ValueError(f"term index {term_index} out of range")

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def doc_lengths(self) -> list[int]:
        return [sum(c for _, c in row) for row in self.rows]

    @property
    def total_tokens(self) -> int:
        return sum(self.doc_lengths)

    @property
    def empty_docs(self) -> list[str]:
        return [doc_id for doc_id, row in zip(self.doc_ids, self.rows) if not row]

    def term_frequencies(self) -> list[int]:
        freqs = [0] * self.n_terms
        for row in self.rows:
            for term_index, count in row:
                freqs[term_index] += count
        return freqs

    def save(self, path: Union[str, Path]):
        """Write as line-delimited JSON: a header line, then one doc per line."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"n_terms": self.n_terms, "vocab_hash": self.vocab_hash}))
            fh.write("\n")
            for doc_id, row in zip(self.doc_ids, self.rows):
                fh.write(json.dumps({"doc_id": doc_id, "counts": [list(p) for p in row]}))
                fh.write("\n")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "DocTermMatrix":
        with open(path, "r", encoding="utf-8") as fh:
            header = json.loads(fh.readline())
            doc_ids: list[str] = []
            rows: list[tuple[tuple[int, int], ...]] = []
            for line in fh:
                if not line.strip():
                    continue
                obj = json.loads(line)
                doc_ids.append(obj["doc_id"])
                rows.append(tuple((int(i), int(c)) for i, c in obj["counts"]))
        return cls(
            doc_ids=tuple(doc_ids),
            rows=tuple(rows),
            n_terms=int(header["n_terms"]),
            vocab_hash=header.get("vocab_hash", ""),
        )


def vectorize(
    token_lists: Sequence[Sequence[str]],
    vocabulary: Vocabulary,
    doc_ids: Optional[Sequence[str]] = None,
) -> DocTermMatrix:
    """Count vocabulary terms per document; out-of-vocabulary tokens drop."""
    if doc_ids is None:
        doc_ids = [f"doc{i:06d}" for i in range(len(token_lists))]
    if len(doc_ids) != len(token_lists):
        raise ValueError("doc_ids and token_lists must have equal length")
    index = vocabulary.index
    rows: list[tuple[tuple[int, int], ...]] = []
    for tokens in token_lists:
        counts: dict[int, int] = {}
        for tok in tokens:
            ti = index.get(tok)
            if ti is not None:
                counts[ti] = counts.get(ti, 0) + 1
        rows.append(tuple(sorted(counts.items())))
    return DocTermMatrix(
        doc_ids=tuple(doc_ids),
        rows=tuple(rows),
        n_terms=len(vocabulary),
        vocab_hash=vocabulary.content_hash(),
    )
