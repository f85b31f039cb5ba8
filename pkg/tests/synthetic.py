"""Synthetic corpora with known topic structure, used as test oracles.

Generation is independent of the sampler under test: documents are drawn
directly from planted topic-word distributions with numpy's RNG.
"""

from __future__ import annotations

import numpy as np

from parlascope.preprocess import DocTermMatrix, Vocabulary, build_vocabulary, vectorize


def planted_corpus(
    n_topics: int,
    docs_per_topic: int,
    doc_len: int,
    terms_per_topic: int,
    seed: int,
) -> tuple[DocTermMatrix, Vocabulary, np.ndarray]:
    """Corpus of documents drawn from disjoint-vocabulary planted topics.

    Topic t owns terms ``t00..`` exclusively with uniform probability; each
    document is generated from a single planted topic (round-robin) so the
    true structure is unambiguous. Returns the matrix, vocabulary, and the
    planted topic-word distributions aligned to vocabulary indices.
    """
    rng = np.random.default_rng(seed)
    topic_terms = [
        [f"t{t:02d}_{j:02d}" for j in range(terms_per_topic)] for t in range(n_topics)
    ]
    docs: list[list[str]] = []
    for d in range(n_topics * docs_per_topic):
        terms = topic_terms[d % n_topics]
        docs.append([terms[i] for i in rng.integers(0, terms_per_topic, size=doc_len)])
    vocabulary = build_vocabulary(docs, min_count=1)
    matrix = vectorize(docs, vocabulary, doc_ids=[f"d{d:04d}" for d in range(len(docs))])
    planted = np.zeros((n_topics, len(vocabulary)))
    for t, terms in enumerate(topic_terms):
        for term in terms:
            planted[t, vocabulary.index[term]] = 1.0 / terms_per_topic
    return matrix, vocabulary, planted


def random_corpus(
    n_docs: int, vocab_size: int, max_doc_len: int, seed: int
) -> tuple[DocTermMatrix, Vocabulary]:
    """Unstructured corpus over a shared vocabulary."""
    rng = np.random.default_rng(seed)
    alphabet = [f"w{i:03d}" for i in range(vocab_size)]
    docs = [
        [alphabet[int(j)] for j in rng.integers(0, vocab_size, size=rng.integers(1, max_doc_len + 1))]
        for _ in range(n_docs)
    ]
    vocabulary = build_vocabulary(docs, min_count=1)
    matrix = vectorize(docs, vocabulary, doc_ids=[f"d{d:04d}" for d in range(n_docs)])
    return matrix, vocabulary


def greedy_match_topics(learned: np.ndarray, planted: np.ndarray) -> list[float]:
    """Greedily pair each planted topic with its closest unused learned topic.

    Returns the Jensen-Shannon divergence (base 2) of each matched pair,
    computed here from first principles so the check does not depend on the
    library's own distance code.
    """

    def jsd(p: np.ndarray, q: np.ndarray) -> float:
        m = 0.5 * (p + q)
        total = 0.0
        for a in (p, q):
            mask = a > 0
            total += 0.5 * float(np.sum(a[mask] * np.log2(a[mask] / m[mask])))
        return total

    available = set(range(learned.shape[0]))
    divergences = []
    for t in range(planted.shape[0]):
        best_k = min(available, key=lambda k: jsd(planted[t], learned[k]))
        divergences.append(jsd(planted[t], learned[best_k]))
        available.remove(best_k)
    return divergences
