"""Shared fixtures: a small TEI session, annotations, and record builders."""

from __future__ import annotations

import datetime as dt
import textwrap

import pytest

from parlascope.records import Gender, SpeakerRole, SpeakerType, SpeechRecord

SESSION_TEI = textwrap.dedent("""\
    <?xml version="1.0" encoding="UTF-8"?>
    <TEI xmlns="http://www.tei-c.org/ns/1.0" xml:id="ParlaMint-XX_2020-07-01-s1" xml:lang="en">
      <teiHeader>
        <fileDesc>
          <titleStmt>
            <title>Assembly of Xanadu, Session 1</title>
            <meeting n="1">Session 1</meeting>
          </titleStmt>
        </fileDesc>
        <profileDesc>
          <settingDesc>
            <setting>
              <date when="2020-07-01"/>
            </setting>
          </settingDesc>
          <langUsage><language ident="en">English</language></langUsage>
          <particDesc>
            <listPerson>
              <person xml:id="VegaMaria">
                <persName><forename>Maria</forename><surname>Vega</surname></persName>
                <sex value="F"/>
                <birth when="1976-03-14"/>
                <affiliation role="member" ref="#party.PP"/>
                <affiliation role="MP" ref="#assembly"/>
              </person>
              <person xml:id="NovakPeter">
                <persName><forename>Peter</forename><surname>Novak</surname></persName>
                <sex value="M"/>
                <birth when="1970"/>
                <affiliation role="member" ref="#party.UD"/>
                <affiliation role="MP" ref="#assembly"/>
              </person>
              <person xml:id="KrogIda">
                <persName><forename>Ida</forename><surname>Krog</surname></persName>
                <sex value="F"/>
                <affiliation role="MP" ref="#assembly"/>
              </person>
              <person xml:id="BergOlaf">
                <persName><forename>Olaf</forename><surname>Berg</surname></persName>
                <sex value="M"/>
              </person>
            </listPerson>
            <listOrg>
              <org xml:id="party.PP"><orgName>Progress Party</orgName></org>
              <org xml:id="party.UD"><orgName>Union of Democrats</orgName></org>
              <org xml:id="assembly"><orgName>Assembly of Xanadu</orgName></org>
            </listOrg>
          </particDesc>
        </profileDesc>
      </teiHeader>
      <text>
        <body>
          <div type="debateSection">
            <u who="#KrogIda" xml:id="u1" ana="#chair"><seg>The session is open.</seg></u>
            <u who="#VegaMaria" xml:id="u2" ana="#regular">
              <seg>The budget for schools must grow, not shrink.</seg>
              <note>applause</note>
              <seg>Families deserve better support.</seg>
            </u>
            <u who="#NovakPeter" xml:id="u3" ana="#regular"><seg>Taxes fund the deficit, and the deficit grows.</seg></u>
            <u who="#BergOlaf" xml:id="u4"><seg>Thank you for inviting me today.</seg></u>
          </div>
        </body>
      </text>
    </TEI>
    """)

SESSION_CONLLU = textwrap.dedent("""\
    # newdoc id = XX_2020-07-01-s1_0002
    # sent_id = 1
    # text = The budget for schools must grow, not shrink.
    1	The	the	DET	_	_	0	_	_	_
    2	budget	budget	NOUN	_	_	0	_	_	_
    3	for	for	ADP	_	_	0	_	_	_
    4	schools	school	NOUN	_	_	0	_	_	_
    5	must	must	AUX	_	_	0	_	_	_
    6	grow	grow	VERB	_	_	0	_	_	_
    7	,	,	PUNCT	_	_	0	_	_	_
    8	not	not	PART	_	_	0	_	_	_
    9	shrink	shrink	VERB	_	_	0	_	_	_
    10	.	.	PUNCT	_	_	0	_	_	_
    # sent_id = 2
    # text = Families deserve better support.
    1	Families	family	NOUN	_	_	0	_	_	_
    2	deserve	deserve	VERB	_	_	0	_	_	_
    3	better	better	ADJ	_	_	0	_	_	_
    4	support	support	NOUN	_	_	0	_	_	_
    5	.	.	PUNCT	_	_	0	_	_	_

    # newdoc id = XX_2020-07-01-s1_0003
    # sent_id = 1
    # text = Taxes fund the deficit, and the deficit grows.
    1	Taxes	tax	NOUN	_	_	0	_	_	_
    2	fund	fund	VERB	_	_	0	_	_	_
    3	the	the	DET	_	_	0	_	_	_
    4	deficit	deficit	NOUN	_	_	0	_	_	_
    5	,	,	PUNCT	_	_	0	_	_	_
    6	and	and	CCONJ	_	_	0	_	_	_
    7	the	the	DET	_	_	0	_	_	_
    8	deficit	deficit	NOUN	_	_	0	_	_	_
    9	grows	grow	VERB	_	_	0	_	_	_
    10	.	.	PUNCT	_	_	0	_	_	_
    """)


@pytest.fixture
def session_tei() -> bytes:
    return SESSION_TEI.encode("utf-8")


@pytest.fixture
def session_conllu() -> str:
    return SESSION_CONLLU


def make_record(
    record_id: str = "XX_s1_0001",
    parliament: str = "XX",
    session_id: str = "s1",
    date: dt.date = dt.date(2020, 7, 1),
    text: str = "one two three",
    speaker_type: SpeakerType = SpeakerType.MP,
    speaker_role: SpeakerRole = SpeakerRole.REGULAR,
    gender: Gender = Gender.UNKNOWN,
    birth_year=None,
    party: str = "",
) -> SpeechRecord:
    return SpeechRecord(
        id=record_id,
        parliament=parliament,
        session_id=session_id,
        date=date,
        text=text,
        speaker_type=speaker_type,
        speaker_role=speaker_role,
        gender=gender,
        birth_year=birth_year,
        party=party,
    )
