"""Command-line entry point wiring the pipeline together.

Every subcommand reads declared inputs, writes declared outputs and prints a
one-line JSON summary. Exit codes: 0 success, 1 runtime failure, 2 usage
error, 3 configuration/validation error.

Flags override values from an optional JSON config file (``--config``), and
the effective configuration is dumped next to each primary output as
``<output>.run.json`` so any artifact can be traced back to the exact
settings and seed that produced it. Files with an externally fixed schema
(speech stores, matrices, VisData, CSV tables) stay pristine; the model file
embeds its provenance directly.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import shlex
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import classify, datasets, ingest, lda, preprocess, reports, visdata
from .errors import ConfigError, ParlascopeError
from .records import SpeakerFilter, SpeakerRole, SpeakerType

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3


def _config_hash(obj: dict) -> str:
    return hashlib.sha256(
        json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")
    ).hexdigest()


def _emit(summary: dict):
    print(json.dumps(summary, sort_keys=True))


def _write_run_sidecar(output: Path, command: str, effective: dict):
    sidecar = output.with_name(output.name + ".run.json")
    payload = {
        "command": command,
        "config": effective,
        "config_hash": _config_hash(effective),
    }
    sidecar.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                       encoding="utf-8")


class Settings:
    """Flag values with JSON-config fallback (flag > config file > default)."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file_values: dict = {}
        if getattr(args, "config", None):
            path = Path(args.config)
            if not path.exists():
                raise ConfigError(f"config file not found: {path}")
            try:
                self.file_values = json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON in config file {path}: {exc}") from None

    def get(self, key: str, default=None):
        flag = getattr(self.args, key.replace("-", "_"), None)
        if flag is not None:
            return flag
        if key in self.file_values:
            return self.file_values[key]
        return default

    def require(self, key: str):
        value = self.get(key)
        if value is None:
            raise ConfigError(f"missing required setting: {key}")
        return value


def _require_path(settings: Settings, key: str) -> Path:
    path = Path(settings.require(key))
    if not path.exists():
        raise ConfigError(f"{key} path does not exist: {path}")
    return path


def _clean_config(settings: Settings) -> preprocess.CleanConfig:
    stopwords = frozenset()
    domain = frozenset()
    stopword_path = settings.get("stopwords")
    if stopword_path:
        stopwords = preprocess.load_stopword_file(stopword_path)
    domain_path = settings.get("domain_stopwords")
    if domain_path:
        domain = preprocess.load_stopword_file(domain_path)
    keep_upos = preprocess.DEFAULT_KEEP_UPOS
    if settings.get("keep_propn", False):
        keep_upos = keep_upos | {"PROPN"}
    return preprocess.CleanConfig(
        language=settings.get("language", "en"),
        stopwords=stopwords,
        domain_stopwords=domain,
        keep_upos=keep_upos,
        min_token_len=int(settings.get("min_token_len", 2)),
        lowercase=not settings.get("no_lowercase", False),
    )


def _speaker_filter(settings: Settings) -> Optional[SpeakerFilter]:
    if settings.get("all_speakers", False):
        return None
    date_range = None
    date_from = settings.get("date_from")
    date_to = settings.get("date_to")
    if date_from or date_to:
        import datetime as dt

        lo = dt.date.fromisoformat(date_from) if date_from else dt.date.min
        hi = dt.date.fromisoformat(date_to) if date_to else dt.date.max
        date_range = (lo, hi)
    return SpeakerFilter(
        required_type=SpeakerType.MP,
        required_role=SpeakerRole.REGULAR,
        date_range=date_range,
        min_chars=settings.get("min_chars"),
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_ingest(args) -> int:
    settings = Settings(args)
    corpus_dir = _require_path(settings, "corpus_dir")
    out = Path(settings.require("out"))
    xml_files = sorted(corpus_dir.glob("*.xml"))
    if not xml_files:
        raise ConfigError(f"no .xml session files under {corpus_dir}")

    records = []
    sessions = 0
    for path in xml_files:
        _meta, session_records = ingest.parse_session_file(path)
        records.extend(session_records)
        sessions += 1

    matched = 0
    unknown_ids: list[str] = []
    annotations_dir = settings.get("annotations_dir")
    if annotations_dir:
        ann_files = sorted(Path(annotations_dir).glob("*.conllu"))
        handles = [open(p, "r", encoding="utf-8") for p in ann_files]
        try:
            records, report = ingest.attach_annotations(
                records, itertools.chain.from_iterable(handles)
            )
        finally:
            for fh in handles:
                fh.close()
        matched = report.matched
        unknown_ids = report.unknown_ids

    n = ingest.persist_speeches(records, out)
    effective = {
        "corpus_dir": str(corpus_dir),
        "annotations_dir": annotations_dir and str(annotations_dir),
        "out": str(out),
    }
    _write_run_sidecar(out, "ingest", effective)
    _emit(
        {
            "command": "ingest",
            "sessions": sessions,
            "records": n,
            "annotated": matched,
            "unknown_annotation_ids": len(unknown_ids),
            "out": str(out),
            "config_hash": _config_hash(effective),
        }
    )
    return EXIT_OK


def cmd_stats(args) -> int:
    settings = Settings(args)
    speeches = _require_path(settings, "speeches")
    out = Path(settings.require("out"))
    stats = ingest.corpus_stats(ingest.iter_speeches(speeches))
    out.write_text(ingest.stats_to_csv(stats), encoding="utf-8")
    sessions, words = stats.grand_total()
    _emit(
        {
            "command": "stats",
            "cells": len(stats.cells),
            "sessions": sessions,
            "words": words,
            "out": str(out),
        }
    )
    return EXIT_OK


def cmd_preprocess(args) -> int:
    settings = Settings(args)
    speeches = _require_path(settings, "speeches")
    out_vocab = Path(settings.require("out_vocab"))
    out_matrix = Path(settings.require("out_matrix"))
    config = _clean_config(settings)
    speaker_filter = _speaker_filter(settings)
    min_count = int(settings.get("min_count", 1))

    records = ingest.load_speeches(speeches)
    if speaker_filter is not None:
        records = ingest.filter_records(records, speaker_filter)
    if not records:
        raise ConfigError("no records left after filtering")

    token_lists = []
    doc_ids = []
    pos_filtered = 0
    for record in records:
        tokens, used_pos = preprocess.clean_record(record, config)
        token_lists.append(tokens)
        doc_ids.append(record.id)
        pos_filtered += int(used_pos)

    vocabulary = preprocess.build_vocabulary(token_lists, min_count=min_count)
    matrix = preprocess.vectorize(token_lists, vocabulary, doc_ids=doc_ids)
    vocabulary.save(out_vocab)
    matrix.save(out_matrix)

    effective = {
        "speeches": str(speeches),
        "clean_config": config.to_dict(),
        "min_count": min_count,
        "filtered_to_mp_regular": speaker_filter is not None,
        "out_vocab": str(out_vocab),
        "out_matrix": str(out_matrix),
    }
    _write_run_sidecar(out_matrix, "preprocess", effective)
    _emit(
        {
            "command": "preprocess",
            "documents": matrix.n_docs,
            "vocabulary": len(vocabulary),
            "tokens": matrix.total_tokens,
            "empty_documents": len(matrix.empty_docs),
            "pos_filtered_docs": pos_filtered,
            "unannotated_docs": matrix.n_docs - pos_filtered,
            "out_vocab": str(out_vocab),
            "out_matrix": str(out_matrix),
            "config_hash": _config_hash(effective),
        }
    )
    return EXIT_OK


def _lda_config(settings: Settings, k: int) -> lda.LdaConfig:
    alpha = settings.get("alpha")
    return lda.LdaConfig(
        k=k,
        alpha=float(alpha) if alpha is not None else None,
        beta=float(settings.get("beta", 0.01)),
        iterations=int(settings.get("iterations", 1000)),
        burn_in=int(settings.get("burn_in", 200)),
        seed=int(settings.get("seed", 0)),
        average_estimates=bool(settings.get("average", False)),
        check_invariants=settings.get("check_invariants", "ends"),
    )


def cmd_lda(args) -> int:
    settings = Settings(args)
    matrix_path = _require_path(settings, "matrix")
    out = Path(settings.require("out"))
    config = _lda_config(settings, k=int(settings.require("k")))
    matrix = preprocess.DocTermMatrix.load(matrix_path)
    model = lda.train_lda(matrix, config)
    # The embedded hash covers the computation-relevant settings only, so the
    # same training run lands byte-identically regardless of output location;
    # the sidecar records the full effective configuration with paths.
    model_hash = _config_hash({"lda_config": config.to_dict()})
    effective = {"matrix": str(matrix_path), "lda_config": config.to_dict(), "out": str(out)}
    lda.save_model(
        model,
        out,
        provenance={"seed": config.seed, "config_hash": model_hash},
    )
    _write_run_sidecar(out, "lda", effective)
    _emit(
        {
            "command": "lda",
            "k": config.k,
            "documents": matrix.n_docs,
            "tokens": matrix.total_tokens,
            "seed": config.seed,
            "out": str(out),
            "config_hash": model_hash,
        }
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    settings = Settings(args)
    matrix_path = _require_path(settings, "matrix")
    out_dir = Path(settings.require("out_dir"))
    out_dir.mkdir(parents=True, exist_ok=True)
    k_min = int(settings.get("k_min", 5))
    k_max = int(settings.get("k_max", 12))
    template = _lda_config(settings, k=max(k_min, 1))
    matrix = preprocess.DocTermMatrix.load(matrix_path)
    models, rows = lda.sweep_topic_counts(matrix, k_min, k_max, template)
    effective = {
        "matrix": str(matrix_path),
        "k_min": k_min,
        "k_max": k_max,
        "lda_config": template.to_dict(),
        "out_dir": str(out_dir),
    }
    outputs = []
    for model in models:
        path = out_dir / f"model_k{model.k}.json"
        lda.save_model(
            model,
            path,
            provenance={
                "seed": model.config.seed,
                "config_hash": _config_hash({"lda_config": model.config.to_dict()}),
            },
        )
        outputs.append(str(path))
    diag_path = out_dir / "diagnostics.csv"
    diag_path.write_text(lda.sweep_to_csv(rows), encoding="utf-8")
    _write_run_sidecar(diag_path, "sweep", effective)
    _emit(
        {
            "command": "sweep",
            "k_min": k_min,
            "k_max": k_max,
            "models": outputs,
            "diagnostics": str(diag_path),
            "config_hash": _config_hash(effective),
        }
    )
    return EXIT_OK


def cmd_vis(args) -> int:
    settings = Settings(args)
    model_path = _require_path(settings, "model")
    vocab_path = _require_path(settings, "vocabulary")
    out = settings.get("out")
    model = lda.load_model(model_path)
    vocabulary = preprocess.Vocabulary.load(vocab_path)
    vis = visdata.export_vis(
        model,
        vocabulary,
        top_n=int(settings.get("top_n", visdata.DEFAULT_TOP_N)),
        default_lambda=float(settings.get("default_lambda", visdata.DEFAULT_LAMBDA)),
    )
    if out is None:
        out = model_path.with_name(model_path.stem + ".visdata.json")
    out = Path(out)
    visdata.save_visdata(vis, out)
    effective = {
        "model": str(model_path),
        "vocabulary": str(vocab_path),
        "top_n": int(settings.get("top_n", visdata.DEFAULT_TOP_N)),
        "default_lambda": float(settings.get("default_lambda", visdata.DEFAULT_LAMBDA)),
        "out": str(out),
    }
    _write_run_sidecar(out, "vis", effective)
    _emit(
        {
            "command": "vis",
            "k": vis.k,
            "terms_per_topic": len(vis.topics[0].terms) if vis.topics else 0,
            "out": str(out),
            "config_hash": _config_hash(effective),
        }
    )
    return EXIT_OK


def cmd_dataset(args) -> int:
    settings = Settings(args)
    task = settings.require("task")
    out = Path(settings.require("out"))
    seed = int(settings.get("seed", 0))

    if task in ("age", "gender", "wing_center", "wing_extreme"):
        speeches = _require_path(settings, "speeches")
        wing_map = None
        if task.startswith("wing"):
            wing_map = datasets.PartyWingMap.load(_require_path(settings, "wing_map"))
        records = ingest.load_speeches(speeches)
        n_per_class = settings.get("n_per_class")
        dataset = datasets.build_metadata_task(
            records,
            task,
            seed=seed,
            n_per_class=int(n_per_class) if n_per_class is not None else None,
            wing_map=wing_map,
            age_cutoff=int(settings.get("age_cutoff", datasets.AGE_CUTOFF)),
        )
        dataset.save(out)
        effective = {"task": task, "speeches": str(speeches), "seed": seed, "out": str(out)}
        _write_run_sidecar(out, "dataset", effective)
        _emit(
            {
                "command": "dataset",
                "task": task,
                "instances": len(dataset),
                "class_counts": dataset.class_counts,
                "seed": seed,
                "out": str(out),
                "config_hash": _config_hash(effective),
            }
        )
        return EXIT_OK

    if task in ("sentiment", "emotion"):
        manifest = _require_path(settings, "manifest")
        sources, manifest_task, declared = datasets.sources_from_manifest(manifest)
        if manifest_task != task:
            raise ConfigError(f"manifest task {manifest_task!r} does not match --task {task!r}")
        dataset, report = datasets.merge_labeled_corpora(sources, task, declared)
        dataset.save(out)
        report_path = out.with_name(out.name + ".merge.json")
        report_path.write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        effective = {"task": task, "manifest": str(manifest), "out": str(out)}
        _write_run_sidecar(out, "dataset", effective)
        _emit(
            {
                "command": "dataset",
                "task": task,
                "instances": len(dataset),
                "negative": report.negative,
                "positive": report.positive,
                "declared_negative": report.declared_negative,
                "declared_positive": report.declared_positive,
                "negative_discrepancy": report.negative_discrepancy,
                "positive_discrepancy": report.positive_discrepancy,
                "merge_report": str(report_path),
                "out": str(out),
                "config_hash": _config_hash(effective),
            }
        )
        return EXIT_OK

    raise ConfigError(f"unknown task {task!r}")


def cmd_train(args) -> int:
    settings = Settings(args)
    train_path = _require_path(settings, "train")
    out = Path(settings.require("out"))
    task = settings.get("task", "sentiment")
    dataset = datasets.LabeledDataset.load(train_path, task)

    split_fraction = settings.get("split")
    test_out = settings.get("test_out")
    if split_fraction is not None:
        spec = datasets.SplitSpec(
            train_fraction=float(split_fraction), seed=int(settings.get("seed", 0))
        )
        train_ds, test_ds = datasets.split_dataset(dataset, spec)
        if test_out:
            test_ds.save(Path(test_out))
    else:
        train_ds = dataset

    classifier = classify.train_baseline(train_ds, _clean_config(settings))
    classifier.save(out)
    effective = {"train": str(train_path), "task": task, "out": str(out)}
    _write_run_sidecar(out, "train", effective)
    _emit(
        {
            "command": "train",
            "task": task,
            "train_instances": len(train_ds),
            "vocabulary": len(classifier.terms),
            "out": str(out),
            "config_hash": _config_hash(effective),
        }
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    settings = Settings(args)
    classifier_path = _require_path(settings, "classifier")
    test_path = _require_path(settings, "test")
    classifier = classify.NaiveBayesClassifier.load(classifier_path)
    test = datasets.LabeledDataset.load(test_path, settings.get("task", "sentiment"))
    metrics = classify.evaluate(classifier, test)
    out = settings.get("out")
    if out:
        Path(out).write_text(
            json.dumps(metrics.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    _emit({"command": "eval", "n": metrics.n, **metrics.to_dict()})
    return EXIT_OK


def cmd_score(args) -> int:
    settings = Settings(args)
    speeches = _require_path(settings, "speeches")
    out = Path(settings.require("out"))
    year = int(settings.require("year"))
    seed = int(settings.get("seed", 0))
    n = int(settings.get("n", reports.DEFAULT_SAMPLE_SIZE))
    min_chars = int(settings.get("min_chars", reports.DEFAULT_MIN_CHARS))

    records = ingest.load_speeches(speeches)
    sample = reports.sample_speeches(records, year=year, min_chars=min_chars, n=n, seed=seed)

    classifier_path = settings.get("classifier")
    endpoint_url = settings.get("endpoint_url")
    endpoint_cmd = settings.get("endpoint_cmd")
    texts = [r.text for r in sample.records]
    if classifier_path:
        model = classify.NaiveBayesClassifier.load(Path(classifier_path))
        scores = [score for _label, score in classify.predict_batch(model, texts)]
        scorer_id = settings.get("scorer_id", "baseline")
    elif endpoint_url or endpoint_cmd:
        endpoint = classify.ScorerEndpoint(
            url=endpoint_url,
            command=tuple(shlex.split(endpoint_cmd)) if endpoint_cmd else None,
            timeout=float(settings.get("timeout", 30.0)),
            retries=int(settings.get("retries", 0)),
        )
        scores = classify.external_score(endpoint, texts)
        scorer_id = settings.get("scorer_id", "external")
    else:
        raise ConfigError("provide --classifier, --endpoint-url or --endpoint-cmd")

    scored = [
        reports.ScoredSpeech(record.id, score, scorer_id)
        for record, score in zip(sample.records, scores)
    ]
    reports.save_scores(scored, out)
    effective = {
        "speeches": str(speeches),
        "year": year,
        "n": n,
        "min_chars": min_chars,
        "seed": seed,
        "scorer_id": scorer_id,
        "out": str(out),
    }
    _write_run_sidecar(out, "score", effective)
    _emit(
        {
            "command": "score",
            "scored": len(scored),
            "requested": n,
            "shortfall": sample.shortfall,
            "seed": seed,
            "out": str(out),
            "config_hash": _config_hash(effective),
        }
    )
    return EXIT_OK


def _parse_pairs(pairs: Sequence[str], flag: str) -> dict[str, Path]:
    out: dict[str, Path] = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"{flag} expects PARLIAMENT=PATH, got {pair!r}")
        key, _, value = pair.partition("=")
        out[key] = Path(value)
    return out


def cmd_report(args) -> int:
    settings = Settings(args)
    out_dir = Path(settings.require("out_dir"))
    score_files = _parse_pairs(args.scores or [], "--scores")
    if not score_files:
        raise ConfigError("at least one --scores PARLIAMENT=PATH is required")
    speech_files = _parse_pairs(args.speeches or [], "--speeches")
    bins = int(settings.get("bins", reports.DEFAULT_BINS))
    top_k = int(settings.get("top_k", 20))

    inputs: dict[str, reports.ParliamentReport] = {}
    for parliament, path in score_files.items():
        if not path.exists():
            raise ConfigError(f"scores file not found: {path}")
        scored = reports.load_scores(path)
        values = [s.score for s in scored]
        summary = reports.polarity_summary(values)
        counts = reports.histogram(values, bins=bins)
        validation_negative = validation_positive = None
        if parliament in speech_files:
            texts = {
                r.id: r.text for r in ingest.iter_speeches(speech_files[parliament])
            }
            def items(direction: str) -> list[reports.ValidationItem]:
                top = reports.top_k_extreme(scored, k=top_k, direction=direction)
                return [
                    reports.ValidationItem(s.speech_id, s.score, texts.get(s.speech_id, ""))
                    for s in top.speeches
                ]
            validation_negative = items("negative")
            validation_positive = items("positive")
        inputs[parliament] = reports.ParliamentReport(
            summary=summary,
            histogram=counts,
            validation_negative=validation_negative,
            validation_positive=validation_positive,
        )

    bundle = reports.render_report(inputs, out_dir)
    effective = {
        "scores": {k: str(v) for k, v in score_files.items()},
        "bins": bins,
        "top_k": top_k,
        "out_dir": str(out_dir),
    }
    _write_run_sidecar(bundle.report_json, "report", effective)
    _emit(
        {
            "command": "report",
            "parliaments": sorted(inputs),
            "negative_max": bundle.negative_max,
            "positive_max": bundle.positive_max,
            "out_dir": str(out_dir),
            "config_hash": _config_hash(effective),
        }
    )
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    settings = Settings(args)
    artifacts = _require_path(settings, "artifacts")
    static_dir = settings.get("static")
    app = create_app(artifacts, static_dir)
    host = settings.get("host", "127.0.0.1")
    port = int(settings.get("port", 8000))
    _emit({"command": "serve", "artifacts": str(artifacts), "host": host, "port": port})
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parlascope",
        description="Corpus analytics for parliamentary debate transcripts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.set_defaults(func=func)
        return p

    p = add("ingest", cmd_ingest, "parse TEI sessions into a speech store")
    p.add_argument("--corpus-dir")
    p.add_argument("--annotations-dir")
    p.add_argument("--out")

    p = add("stats", cmd_stats, "word/session counts per parliament and year")
    p.add_argument("--speeches")
    p.add_argument("--out")

    p = add("preprocess", cmd_preprocess, "clean text, build vocabulary and matrix")
    p.add_argument("--speeches")
    p.add_argument("--out-vocab")
    p.add_argument("--out-matrix")
    p.add_argument("--language")
    p.add_argument("--stopwords")
    p.add_argument("--domain-stopwords")
    p.add_argument("--min-count", type=int)
    p.add_argument("--min-token-len", type=int)
    p.add_argument("--keep-propn", action="store_true", default=None)
    p.add_argument("--no-lowercase", action="store_true", default=None)
    p.add_argument("--all-speakers", action="store_true", default=None,
                   help="skip the MP/Regular speaker filter")
    p.add_argument("--date-from")
    p.add_argument("--date-to")
    p.add_argument("--min-chars", type=int)

    p = add("lda", cmd_lda, "train a topic model with collapsed Gibbs sampling")
    p.add_argument("--matrix")
    p.add_argument("--out")
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--iterations", type=int)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--average", action="store_true", default=None)
    p.add_argument("--check-invariants", choices=["ends", "every_sweep"])

    p = add("sweep", cmd_sweep, "train models for a range of topic counts")
    p.add_argument("--matrix")
    p.add_argument("--out-dir")
    p.add_argument("--k-min", type=int)
    p.add_argument("--k-max", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--iterations", type=int)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--seed", type=int)

    p = add("vis", cmd_vis, "export the visualization payload for a model")
    p.add_argument("--model")
    p.add_argument("--vocabulary")
    p.add_argument("--out")
    p.add_argument("--top-n", type=int)
    p.add_argument("--default-lambda", type=float)

    p = add("dataset", cmd_dataset, "build a balanced labeled dataset")
    p.add_argument("--task", choices=list(datasets.TASKS))
    p.add_argument("--speeches")
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--n-per-class", type=int)
    p.add_argument("--wing-map")
    p.add_argument("--age-cutoff", type=int)
    p.add_argument("--manifest")

    p = add("train", cmd_train, "train the baseline classifier")
    p.add_argument("--train")
    p.add_argument("--task")
    p.add_argument("--out")
    p.add_argument("--split", type=float,
                   help="train on this fraction after an in-run stratified split")
    p.add_argument("--test-out")
    p.add_argument("--seed", type=int)
    p.add_argument("--stopwords")
    p.add_argument("--domain-stopwords")

    p = add("eval", cmd_eval, "evaluate a classifier on a test set")
    p.add_argument("--classifier")
    p.add_argument("--test")
    p.add_argument("--task")
    p.add_argument("--out")

    p = add("score", cmd_score, "score sampled speeches with a scorer")
    p.add_argument("--speeches")
    p.add_argument("--year", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--min-chars", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--classifier")
    p.add_argument("--endpoint-url")
    p.add_argument("--endpoint-cmd")
    p.add_argument("--scorer-id")
    p.add_argument("--timeout", type=float)
    p.add_argument("--retries", type=int)
    p.add_argument("--out")

    p = add("report", cmd_report, "render the polarity report bundle")
    p.add_argument("--scores", action="append", metavar="PARLIAMENT=PATH")
    p.add_argument("--speeches", action="append", metavar="PARLIAMENT=PATH")
    p.add_argument("--out-dir")
    p.add_argument("--bins", type=int)
    p.add_argument("--top-k", type=int)

    p = add("serve", cmd_serve, "serve visualization payloads over HTTP")
    p.add_argument("--artifacts")
    p.add_argument("--static")
    p.add_argument("--host")
    p.add_argument("--port", type=int)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParlascopeError, OSError, ValueError) as exc:
        # ValueError covers invariant violations raised by the data types
        # themselves (duplicate ids, malformed records in hand-edited files).
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
