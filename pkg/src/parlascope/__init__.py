"""parlascope: comparative analytics for parliamentary debate transcripts.

Submodules
----------
ingest      TEI session parsing, annotation attachment, speech stores, stats
preprocess  text cleaning, POS filtering, vocabulary and doc-term matrices
lda         topic models trained with collapsed Gibbs sampling
visdata     relevance ranking, topic distances, 2-D projection, JSON export
datasets    balanced binary classification datasets and train/test splits
classify    baseline classifier, external scorer bridge, evaluation metrics
reports     polarity summaries, histograms, extreme-speech validation lists
service     read-only FastAPI app serving visualization payloads
cli         command-line entry point wiring the pipeline together
"""

__version__ = "0.1.0"
