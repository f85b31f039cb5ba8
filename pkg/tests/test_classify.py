"""Tests for metrics, the naive-Bayes baseline, and the scorer bridge."""

from __future__ import annotations

import json
import sys

import httpx
import numpy as np
import pytest

from parlascope.classify import (
    NaiveBayesClassifier,
    ScorerEndpoint,
    compute_metrics,
    evaluate,
    external_score,
    f1_score,
    predict_batch,
    train_baseline,
)
from parlascope.datasets import LabeledDataset, LabeledInstance
from parlascope.errors import ConfigError, ParlascopeError, ProtocolError


def dataset(pairs, task="sentiment") -> LabeledDataset:
    return LabeledDataset(
        task=task,
        instances=tuple(
            LabeledInstance(text, label, f"i{i}") for i, (text, label) in enumerate(pairs)
        ),
    )


class TestComputeMetrics:
    def test_perfect_predictions(self):
        m = compute_metrics(1, 0, 0, 1)
        assert (m.accuracy, m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0, 1.0)

    def test_hand_computed_confusion(self):
        m = compute_metrics(4, 1, 1, 4)
        assert m.accuracy == pytest.approx(0.8)
        assert m.precision == pytest.approx(0.8)
        assert m.recall == pytest.approx(0.8)
        assert m.f1 == pytest.approx(0.8)

    def test_degenerate_denominators_reported_absent(self):
        m = compute_metrics(0, 0, 5, 5)
        assert m.precision is None
        assert m.recall == 0.0
        assert m.accuracy == 0.5
        assert m.f1 is None

    def test_all_zero_counts_rejected(self):
        with pytest.raises(ConfigError):
            compute_metrics(0, 0, 0, 0)
        with pytest.raises(ConfigError):
            compute_metrics(-1, 1, 1, 1)

    def test_f1_rounding_spot_checks(self):
        assert round(f1_score(0.80, 0.61), 2) == 0.69
        assert round(f1_score(0.83, 0.80), 2) == 0.81

    def test_f1_is_harmonic_mean(self):
        rng = np.random.default_rng(41)
        for _ in range(300):
            tp, fp, fn, tn = (int(x) for x in rng.integers(0, 50, size=4))
            if tp + fp + fn + tn == 0:
                continue
            m = compute_metrics(tp, fp, fn, tn)
            if m.precision is None or m.recall is None or m.f1 is None:
                continue
            assert min(m.precision, m.recall) - 1e-12 <= m.f1
            assert m.f1 <= max(m.precision, m.recall) + 1e-12
            if m.precision == m.recall:
                assert m.f1 == pytest.approx(m.precision)


class _LookupClassifier:
    def __init__(self, mapping):
        self.mapping = mapping

    def predict(self, text):
        label = self.mapping[text]
        return label, float(label)


class TestEvaluate:
    def test_matches_brute_force_confusion_counting(self):
        rng = np.random.default_rng(47)
        for trial in range(50):
            n = int(rng.integers(1, 60))
            truths = rng.integers(0, 2, size=n)
            preds = rng.integers(0, 2, size=n)
            pairs = [(f"text {trial} {i}", int(t)) for i, t in enumerate(truths)]
            mapping = {f"text {trial} {i}": int(p) for i, p in enumerate(preds)}
            m = evaluate(_LookupClassifier(mapping), dataset(pairs))
            tp = sum(1 for t, p in zip(truths, preds) if t == 1 and p == 1)
            fp = sum(1 for t, p in zip(truths, preds) if t == 0 and p == 1)
            fn = sum(1 for t, p in zip(truths, preds) if t == 1 and p == 0)
            tn = sum(1 for t, p in zip(truths, preds) if t == 0 and p == 0)
            assert (m.tp, m.fp, m.fn, m.tn) == (tp, fp, fn, tn)
            assert m.accuracy == pytest.approx((tp + tn) / n)

    def test_empty_test_set_rejected(self):
        classifier = _LookupClassifier({})
        with pytest.raises(ConfigError):
            evaluate(classifier, dataset([]))


class TestNaiveBayes:
    def test_hand_computed_posterior(self):
        train = dataset([("tax budget", 0), ("budget deficit", 0), ("school child", 1)])
        model = train_baseline(train)
        label, score = model.predict("budget")
        # class 0: prior 2/3 * (2+1)/(4+5); class 1: prior 1/3 * (0+1)/(2+5)
        assert label == 0
        assert score == pytest.approx(3 / 17, abs=1e-12)

    def test_predicts_own_class_document(self):
        train = dataset([("tax budget deficit", 0), ("school child family", 1)])
        model = train_baseline(train)
        assert model.predict("tax budget deficit")[0] == 0
        assert model.predict("school child family")[0] == 1

    def test_single_class_input_rejected(self):
        with pytest.raises(ConfigError):
            train_baseline(dataset([("a b", 0), ("c d", 0)]))

    def test_separable_corpus_accuracy(self):
        rng = np.random.default_rng(53)
        neg_vocab = [f"aaa{i}" for i in range(20)]
        pos_vocab = [f"bbb{i}" for i in range(20)]
        pairs = []
        for i in range(200):
            pairs.append((" ".join(rng.choice(neg_vocab, size=10)), 0))
            pairs.append((" ".join(rng.choice(pos_vocab, size=10)), 1))
        train_pairs, test_pairs = pairs[:320], pairs[320:]
        model = train_baseline(dataset(train_pairs))
        test_ds = dataset(test_pairs)
        metrics = evaluate(model, test_ds)
        assert metrics.accuracy >= 0.95

    def test_training_is_order_invariant(self):
        pairs = [("tax budget", 0), ("school child", 1), ("deficit tax", 0), ("family child", 1)]
        forward = train_baseline(dataset(pairs))
        backward = train_baseline(dataset(list(reversed(pairs))))
        for text in ("tax", "child", "budget family", "unseen words"):
            assert forward.predict(text) == backward.predict(text)

    def test_tie_score_goes_to_label_zero(self):
        model = train_baseline(dataset([("same", 0), ("same", 1)]))
        label, score = model.predict("unrelated")
        assert score == pytest.approx(0.5)
        assert label == 0

    def test_save_load_round_trip(self, tmp_path):
        model = train_baseline(dataset([("tax budget", 0), ("school child", 1)]))
        path = tmp_path / "clf.json"
        model.save(path)
        loaded = NaiveBayesClassifier.load(path)
        for text in ("tax", "child", "budget school"):
            assert loaded.predict(text) == model.predict(text)


class TestPredictBatch:
    def test_empty_list(self):
        model = train_baseline(dataset([("a b", 0), ("c d", 1)]))
        assert predict_batch(model, []) == []

    def test_batch_equals_loop_and_purity(self):
        model = train_baseline(dataset([("tax budget", 0), ("school child", 1)]))
        texts = ["tax", "child", "tax"]
        batch = predict_batch(model, texts)
        assert batch == [model.predict(t) for t in texts]
        assert batch[0] == batch[2]


ECHO_SCORER = (
    "import sys, json\n"
    "for line in sys.stdin:\n"
    "    if not line.strip():\n"
    "        continue\n"
    "    obj = json.loads(line)\n"
    "    score = (len(obj['text']) % 10) / 10\n"
    "    print(json.dumps({'id': obj['id'], 'score': score}))\n"
)


class TestExternalScore:
    def command_endpoint(self, script=ECHO_SCORER, **kwargs) -> ScorerEndpoint:
        return ScorerEndpoint(command=(sys.executable, "-c", script), **kwargs)

    def test_subprocess_round_trip(self):
        texts = ["abc", "abcdefg", ""]
        scores = external_score(self.command_endpoint(), texts)
        assert scores == [(len(t) % 10) / 10 for t in texts]

    def test_empty_input(self):
        assert external_score(self.command_endpoint(), []) == []

    def test_http_out_of_order_responses_rematched(self):
        def handler(request: httpx.Request) -> httpx.Response:
            objs = [json.loads(line) for line in request.content.decode().splitlines()]
            lines = [
                json.dumps({"id": o["id"], "score": int(o["id"][1:]) / 10})
                for o in reversed(objs)
            ]
            return httpx.Response(200, text="\n".join(lines))

        endpoint = ScorerEndpoint(url="http://scorer.test/score")
        with httpx.Client(transport=httpx.MockTransport(handler)) as client:
            scores = external_score(endpoint, ["a", "b", "c"], client=client)
        assert scores == [0.0, 0.1, 0.2]

    def test_out_of_range_score_is_protocol_error(self):
        script = (
            "import sys, json\n"
            "for line in sys.stdin:\n"
            "    obj = json.loads(line)\n"
            "    print(json.dumps({'id': obj['id'], 'score': 1.7}))\n"
        )
        with pytest.raises(ProtocolError, match="out of"):
            external_score(self.command_endpoint(script), ["x"])

    def test_malformed_line_is_protocol_error(self):
        script = "print('not json at all')\n"
        with pytest.raises(ProtocolError, match="malformed"):
            external_score(self.command_endpoint(script), ["x"])

    def test_missing_id_is_protocol_error(self):
        script = (
            "import sys, json\n"
            "lines = [l for l in sys.stdin if l.strip()]\n"
            "obj = json.loads(lines[0])\n"
            "print(json.dumps({'id': obj['id'], 'score': 0.5}))\n"
        )
        with pytest.raises(ProtocolError, match="no response"):
            external_score(self.command_endpoint(script), ["x", "y"])

    def test_timeout_retries_then_fails(self):
        script = "import time\ntime.sleep(5)\n"
        endpoint = self.command_endpoint(script, timeout=0.2, retries=1)
        with pytest.raises(ParlascopeError, match="2 attempt"):
            external_score(endpoint, ["x"])

    def test_endpoint_validation(self):
        with pytest.raises(ConfigError):
            ScorerEndpoint()
        with pytest.raises(ConfigError):
            ScorerEndpoint(url="http://x", command=("y",))
