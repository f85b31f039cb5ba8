"""Parse ParlaMint-flavored TEI session transcripts into speech records.

The expected document layout (see tests/data for a complete fixture):

    <TEI xml:id="ParlaMint-XX_<session>" xmlns="http://www.tei-c.org/ns/1.0">
      <teiHeader>
        ... <setting><date when="2020-05-01"/></setting> ...
        <particDesc><listPerson>
          <person xml:id="SpeakerId">
            <persName><forename/>…<surname/></persName>
            <sex value="F"/> <birth when="1976[-MM-DD]"/>
            <affiliation role="member" ref="#party.X"/>
            <affiliation role="MP" ref="#parliament"/>
          </person>
        </listPerson><listOrg>…</listOrg></particDesc>
      </teiHeader>
      <text><body>… <u who="#SpeakerId" ana="#regular"><seg>…</seg></u> …</body></text>
    </TEI>

Missing speaker attributes become ``unknown`` / absent, never fabricated.
Per-file parsing is safe to run in parallel; nothing here mutates shared
state.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, Iterator, Optional, Union
from xml.etree import ElementTree as ET

from .errors import StoreError, TeiParseError, TeiSchemaError
from .records import (
    AnnotatedToken,
    Gender,
    SpeakerFilter,
    SpeakerRole,
    SpeakerType,
    SpeechRecord,
)

TEI_NS = "http://www.tei-c.org/ns/1.0"
XML_NS = "http://www.w3.org/XML/1998/namespace"
PARLAMINT_ID_PREFIX = "ParlaMint-"

# Elements inside <u> whose text is not speech (transcriber notes, gaps,
# applause and similar) and must not leak into the record text.
NON_SPEECH_TAGS = frozenset({"note", "gap", "vocal", "kinesic", "incident", "pb"})


def _tei(tag: str) -> str:
    return f"{{{TEI_NS}}}{tag}"


def _xml_id(el: ET.Element) -> str:
    return el.get(f"{{{XML_NS}}}id", "")


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


@dataclass(frozen=True)
class SessionMeta:
    parliament: str
    session_id: str
    date: dt.date
    language: str = ""
    title: str = ""


@dataclass
class _Person:
    name: str = ""
    gender: Gender = Gender.UNKNOWN
    birth_year: Optional[int] = None
    party: str = ""
    is_mp: bool = False


def _byte_offset(data: bytes, line: int, column: int) -> int:
    """Approximate byte offset of a 1-based (line, column) position."""
    offset = 0
    for i, chunk in enumerate(data.split(b"\n"), start=1):
        if i == line:
            return offset + column
        offset += len(chunk) + 1
    return offset


def _speech_text(u: ET.Element) -> str:
    """Concatenate speech text below an utterance, skipping non-speech elements."""
    parts: list[str] = []

    def walk(el: ET.Element):
        if el.text:
            parts.append(el.text)
        for child in el:
            if _local(child.tag) not in NON_SPEECH_TAGS:
                walk(child)
            if child.tail:
                parts.append(child.tail)

    walk(u)
    return " ".join(" ".join(parts).split())


def _parse_persons(header: ET.Element, orgs: dict[str, str]) -> dict[str, _Person]:
    persons: dict[str, _Person] = {}
    for person in header.iter(_tei("person")):
        pid = _xml_id(person)
        if not pid:
            continue
        p = _Person()
        pers_name = person.find(_tei("persName"))
        if pers_name is not None:
            fore = (pers_name.findtext(_tei("forename")) or "").strip()
            sur = (pers_name.findtext(_tei("surname")) or "").strip()
            p.name = " ".join(x for x in (fore, sur) if x)
        sex = person.find(_tei("sex"))
        if sex is not None:
            value = (sex.get("value") or "").strip().upper()
            if value in ("F", "M"):
                p.gender = Gender(value)
        birth = person.find(_tei("birth"))
        if birth is not None:
            when = (birth.get("when") or "").strip()
            if len(when) >= 4 and when[:4].isdigit():
                p.birth_year = int(when[:4])
        for aff in person.iter(_tei("affiliation")):
            role = (aff.get("role") or "").strip()
            if role.upper() == "MP":
                p.is_mp = True
            elif role in ("member", "memberOf") and not p.party:
                ref = (aff.get("ref") or "").lstrip("#")
                if ref:
                    p.party = orgs.get(ref, ref)
        persons[pid] = p
    return persons


def _parse_orgs(header: ET.Element) -> dict[str, str]:
    orgs: dict[str, str] = {}
    for org in header.iter(_tei("org")):
        oid = _xml_id(org)
        if not oid:
            continue
        name = org.findtext(_tei("orgName"))
        orgs[oid] = name.strip() if name else oid
    return orgs


def _utterance_role(u: ET.Element) -> SpeakerRole:
    ana = (u.get("ana") or "").lower()
    if "#regular" in ana.split():
        return SpeakerRole.REGULAR
    if "#chair" in ana.split():
        return SpeakerRole.CHAIR
    return SpeakerRole.UNKNOWN


def parse_session(
    source: Union[bytes, BinaryIO],
) -> tuple[SessionMeta, list[SpeechRecord]]:
    """Parse one TEI session document into speech records in document order.

    Raises :class:`TeiParseError` for malformed XML (message carries the
    byte offset) and :class:`TeiSchemaError` when the session date or the
    parliament code cannot be found.
    """
    data = source if isinstance(source, bytes) else source.read()
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise TeiParseError(
            f"malformed XML at line {line}, column {column} "
            f"(byte offset {_byte_offset(data, line, column)}): {exc.msg}"
        ) from None

    root_id = _xml_id(root)
    if not root_id.startswith(PARLAMINT_ID_PREFIX) or "_" not in root_id:
        raise TeiSchemaError(
            "parliament",
            f"root xml:id must look like {PARLAMINT_ID_PREFIX}XX_<session>, got {root_id!r}",
        )
    code_and_session = root_id[len(PARLAMINT_ID_PREFIX):]
    parliament, _, session_id = code_and_session.partition("_")
    if len(parliament) != 2 or not parliament.isalpha():
        raise TeiSchemaError("parliament", f"not a 2-letter code: {parliament!r}")
    if not session_id:
        raise TeiSchemaError("session_id", f"root xml:id {root_id!r} has no session part")
    parliament = parliament.upper()

    date_el = root.find(f".//{_tei('setting')}/{_tei('date')}")
    when = (date_el.get("when") or "").strip() if date_el is not None else ""
    if not when:
        raise TeiSchemaError("date", "no <setting><date when=...> found")
    try:
        session_date = dt.date.fromisoformat(when)
    except ValueError:
        raise TeiSchemaError("date", f"not an ISO date: {when!r}") from None

    lang_el = root.find(f".//{_tei('langUsage')}/{_tei('language')}")
    language = lang_el.get("ident", "") if lang_el is not None else ""
    title = (root.findtext(f".//{_tei('titleStmt')}/{_tei('title')}") or "").strip()
    meta = SessionMeta(parliament, session_id, session_date, language, title)

    header = root.find(_tei("teiHeader"))
    persons: dict[str, _Person] = {}
    if header is not None:
        persons = _parse_persons(header, _parse_orgs(header))

    records: list[SpeechRecord] = []
    body = root.find(f".//{_tei('body')}")
    if body is not None:
        for seq, u in enumerate(body.iter(_tei("u")), start=1):
            who = (u.get("who") or "").lstrip("#")
            person = persons.get(who)
            if person is None:
                speaker_type = SpeakerType.UNKNOWN
            else:
                speaker_type = SpeakerType.MP if person.is_mp else SpeakerType.GUEST
            birth_year = person.birth_year if person else None
            if birth_year is not None and not (1900 <= birth_year <= session_date.year):
                birth_year = None
            records.append(
                SpeechRecord(
                    id=f"{parliament}_{session_id}_{seq:04d}",
                    parliament=parliament,
                    session_id=session_id,
                    date=session_date,
                    text=_speech_text(u),
                    speaker_name=(person.name if person else who),
                    speaker_type=speaker_type,
                    speaker_role=_utterance_role(u),
                    gender=person.gender if person else Gender.UNKNOWN,
                    birth_year=birth_year,
                    party=person.party if person else "",
                )
            )
    return meta, records


def parse_session_file(path: Union[str, Path]) -> tuple[SessionMeta, list[SpeechRecord]]:
    with open(path, "rb") as fh:
        return parse_session(fh)


# ---------------------------------------------------------------------------
# CoNLL-U-style annotation ingestion
# ---------------------------------------------------------------------------

@dataclass
class AttachReport:
    matched: int = 0
    unmatched_records: int = 0
    unknown_ids: list[str] = field(default_factory=list)


def read_annotations(stream: Iterable[str]) -> dict[str, list[AnnotatedToken]]:
    """Read CoNLL-U-style annotations keyed by utterance id.

    Blocks start with ``# newdoc id = <utterance id>``; token lines are
    tab-separated with FORM, LEMMA and UPOS in columns 2-4. Multiword
    ranges (``1-2``) and empty nodes (``1.1``) are skipped.
    """
    docs: dict[str, list[AnnotatedToken]] = {}
    current: Optional[str] = None
    for raw in stream:
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment.startswith("newdoc id"):
                _, _, value = comment.partition("=")
                current = value.strip()
                docs.setdefault(current, [])
            continue
        if current is None:
            continue
        cols = line.split("\t")
        if len(cols) < 4:
            continue
        tok_id, form, lemma, upos = cols[0], cols[1], cols[2], cols[3]
        if "-" in tok_id or "." in tok_id:
            continue
        if upos not in ("_", "") and upos.strip():
            try:
                docs[current].append(AnnotatedToken(form, lemma, upos))
            except ValueError:
                continue
    return docs


def attach_annotations(
    records: list[SpeechRecord], stream: Iterable[str]
) -> tuple[list[SpeechRecord], AttachReport]:
    """Populate ``tokens`` on records matched by the annotation stream.

    Unmatched records pass through untouched and are counted; annotation ids
    with no corresponding record land on the warning list instead of failing.
    """
    docs = read_annotations(stream)
    report = AttachReport()
    known = {r.id for r in records}
    report.unknown_ids = sorted(set(docs) - known)
    out: list[SpeechRecord] = []
    for record in records:
        tokens = docs.get(record.id)
        if tokens is None:
            report.unmatched_records += 1
            out.append(record)
        else:
            report.matched += 1
            out.append(record.with_tokens(tokens))
    return out, report


# ---------------------------------------------------------------------------
# Speech store: line-delimited JSON, one record per line
# ---------------------------------------------------------------------------

def record_to_dict(record: SpeechRecord) -> dict:
    return {
        "id": record.id,
        "parliament": record.parliament,
        "session_id": record.session_id,
        "date": record.date.isoformat(),
        "text": record.text,
        "speaker_name": record.speaker_name,
        "speaker_type": record.speaker_type.value,
        "speaker_role": record.speaker_role.value,
        "gender": record.gender.value,
        "birth_year": record.birth_year,
        "party": record.party,
        "word_count": record.word_count,
        "tokens": (
            None
            if record.tokens is None
            else [[t.surface, t.lemma, t.upos] for t in record.tokens]
        ),
    }


def record_from_dict(obj: dict) -> SpeechRecord:
    tokens = obj.get("tokens")
    return SpeechRecord(
        id=obj["id"],
        parliament=obj["parliament"],
        session_id=obj["session_id"],
        date=dt.date.fromisoformat(obj["date"]),
        text=obj["text"],
        speaker_name=obj.get("speaker_name", ""),
        speaker_type=SpeakerType(obj.get("speaker_type", "unknown")),
        speaker_role=SpeakerRole(obj.get("speaker_role", "unknown")),
        gender=Gender(obj.get("gender", "unknown")),
        birth_year=obj.get("birth_year"),
        party=obj.get("party", ""),
        word_count=obj.get("word_count"),
        tokens=None if tokens is None else tuple(AnnotatedToken(*t) for t in tokens),
    )


def persist_speeches(records: Iterable[SpeechRecord], path: Union[str, Path]) -> int:
    """Write records as UTF-8 line-delimited JSON; returns the record count."""
    n = 0
    seen: set[str] = set()
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            if record.id in seen:
                raise StoreError(f"duplicate record id {record.id!r}")
            seen.add(record.id)
            fh.write(json.dumps(record_to_dict(record), ensure_ascii=False))
            fh.write("\n")
            n += 1
    return n


def iter_speeches(path: Union[str, Path]) -> Iterator[SpeechRecord]:
    """Stream records from a speech store without loading the whole file."""
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                yield record_from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
                raise StoreError(f"corrupt record at line {lineno} of {path}: {exc}") from None


def load_speeches(path: Union[str, Path]) -> list[SpeechRecord]:
    return list(iter_speeches(path))


def filter_records(
    records: Iterable[SpeechRecord], speaker_filter: SpeakerFilter
) -> list[SpeechRecord]:
    return [r for r in records if speaker_filter.matches(r)]


# ---------------------------------------------------------------------------
# Corpus statistics
# ---------------------------------------------------------------------------

@dataclass
class CorpusStats:
    """Session and word counts per (parliament, year), with marginal totals."""

    sessions: dict[tuple[str, int], int]
    words: dict[tuple[str, int], int]

    @property
    def cells(self) -> list[tuple[str, int]]:
        return sorted(self.words)

    def parliament_totals(self) -> dict[str, tuple[int, int]]:
        out: dict[str, tuple[int, int]] = {}
        for (parl, _year), words in self.words.items():
            s, w = out.get(parl, (0, 0))
            out[parl] = (s + self.sessions[(parl, _year)], w + words)
        return out

    def year_totals(self) -> dict[int, tuple[int, int]]:
        out: dict[int, tuple[int, int]] = {}
        for (parl, year), words in self.words.items():
            s, w = out.get(year, (0, 0))
            out[year] = (s + self.sessions[(parl, year)], w + words)
        return out

    def grand_total(self) -> tuple[int, int]:
        return (sum(self.sessions.values()), sum(self.words.values()))


def corpus_stats(records: Iterable[SpeechRecord]) -> CorpusStats:
    """Group word and session counts by (parliament, year of date)."""
    session_ids: dict[tuple[str, int], set[str]] = {}
    words: dict[tuple[str, int], int] = {}
    for record in records:
        key = (record.parliament, record.date.year)
        session_ids.setdefault(key, set()).add(record.session_id)
        words[key] = words.get(key, 0) + record.word_count
    sessions = {key: len(ids) for key, ids in session_ids.items()}
    return CorpusStats(sessions=sessions, words=words)


def stats_to_csv(stats: CorpusStats) -> str:
    """Render stats as CSV with header ``parliament,year,sessions,words``.

    Marginal totals use the sentinel value ``TOTAL`` in place of the summed
    dimension.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["parliament", "year", "sessions", "words"])
    for parl, year in stats.cells:
        writer.writerow([parl, year, stats.sessions[(parl, year)], stats.words[(parl, year)]])
    for parl, (s, w) in sorted(stats.parliament_totals().items()):
        writer.writerow([parl, "TOTAL", s, w])
    for year, (s, w) in sorted(stats.year_totals().items()):
        writer.writerow(["TOTAL", year, s, w])
    s, w = stats.grand_total()
    writer.writerow(["TOTAL", "TOTAL", s, w])
    return buf.getvalue()
