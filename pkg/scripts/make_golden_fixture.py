#!/usr/bin/env python3
"""Generate (or verify) the golden explorer fixtures.

Produces a small deterministic visualization payload plus the reference
term rankings computed by the core at several lambda values. The explorer's
test suite re-ranks the payload client-side and must reproduce these
rankings exactly; the Python test suite verifies the committed files have
not drifted from what the core produces.

Usage:
    python3 scripts/make_golden_fixture.py          # (re)write fixtures
    python3 scripts/make_golden_fixture.py --check  # verify, exit 1 on drift
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from parlascope.lda import LdaConfig, train_lda
from parlascope.preprocess import build_vocabulary, vectorize
from parlascope.visdata import build_term_stats, export_vis, rank_terms

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURE_DIR = REPO_ROOT / "frontend" / "fixtures"
VISDATA_PATH = FIXTURE_DIR / "visdata_golden.json"
RANKINGS_PATH = FIXTURE_DIR / "rankings_golden.json"

LAMBDAS = (0.0, 0.3, 0.6, 1.0)
TOP_N = 10
SEED = 2718

THEMES = [
    ["budget", "tax", "deficit", "spending", "revenue", "austerity"],
    ["hospital", "patient", "vaccine", "nurse", "epidemic", "clinic"],
    ["school", "teacher", "pupil", "curriculum", "tuition", "literacy"],
    ["farm", "harvest", "subsidy", "livestock", "grain", "fishery"],
]
# Shared procedural words give frequency and lift rankings different shapes.
SHARED = ["debate", "amendment"]


def build_corpus(rng: np.random.Generator) -> list[list[str]]:
    docs = []
    for d in range(80):
        theme = THEMES[d % len(THEMES)]
        length = 18 + int(rng.random() * 10)
        doc = []
        for _ in range(length):
            roll = rng.random()
            if roll < 0.72:
                doc.append(theme[int(rng.random() * len(theme))])
            elif roll < 0.88:
                doc.append(SHARED[int(rng.random() * len(SHARED))])
            else:
                other = THEMES[int(rng.random() * len(THEMES))]
                doc.append(other[int(rng.random() * len(other))])
        docs.append(doc)
    return docs


def generate() -> tuple[dict, dict]:
    rng = np.random.default_rng(np.random.PCG64(SEED))
    docs = build_corpus(rng)
    vocabulary = build_vocabulary(docs, min_count=1)
    matrix = vectorize(docs, vocabulary, doc_ids=[f"g{d:03d}" for d in range(len(docs))])
    config = LdaConfig(k=4, alpha=0.5, beta=0.01, iterations=80, burn_in=20, seed=SEED)
    model = train_lda(matrix, config)
    vis = export_vis(model, vocabulary, top_n=len(vocabulary))
    stats = build_term_stats(model, vocabulary)
    rankings = {
        f"{lam:.1f}": {
            str(topic): [term for term, _score in rank_terms(stats, topic, lam, TOP_N)]
            for topic in range(config.k)
        }
        for lam in LAMBDAS
    }
    return vis.to_payload(), {"top_n": TOP_N, "lambdas": rankings}


def render(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--check", action="store_true", help="verify committed fixtures")
    args = parser.parse_args(argv)

    visdata_payload, rankings_payload = generate()
    expected = {
        VISDATA_PATH: render(visdata_payload),
        RANKINGS_PATH: render(rankings_payload),
    }
    if args.check:
        for path, content in expected.items():
            if not path.exists():
                print(f"missing fixture: {path}", file=sys.stderr)
                return 1
            if path.read_text(encoding="utf-8") != content:
                print(f"fixture drifted from core output: {path}", file=sys.stderr)
                return 1
        print("golden fixtures match core output")
        return 0

    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    for path, content in expected.items():
        path.write_text(content, encoding="utf-8")
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
