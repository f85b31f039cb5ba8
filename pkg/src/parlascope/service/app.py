"""Read-only FastAPI service over exported visualization payloads.

The service wraps the core package: it lists exported models, serves their
VisData JSON verbatim to the topic explorer, and exposes a few stateless
compute endpoints (relevance ranking, metrics, polarity, histograms) so
other clients can reuse the exact same arithmetic.

Visualization payloads are files named ``<model-id>.visdata.json`` inside
the artifacts directory. All endpoints are read-only and safe under
concurrent requests.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..classify import compute_metrics
from ..errors import ConfigError
from ..reports import histogram, polarity_summary
from ..visdata import rank_exported_terms, relevance
from .schemas import (
    HistogramRequest,
    HistogramResponse,
    MetricsRequest,
    MetricsResponse,
    ModelInfo,
    PolarityRequest,
    PolarityResponse,
    RankRequest,
    RankResponse,
    RankedTerm,
    RelevanceRequest,
    RelevanceResponse,
    VisDataModel,
)

VISDATA_SUFFIX = ".visdata.json"


def _load_payload(artifacts_dir: Path, model_id: str) -> dict:
    if "/" in model_id or "\\" in model_id or model_id.startswith("."):
        raise HTTPException(status_code=400, detail="invalid model id")
    path = artifacts_dir / f"{model_id}{VISDATA_SUFFIX}"
    if not path.exists():
        raise HTTPException(status_code=404, detail=f"no visualization data for {model_id!r}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
        VisDataModel.model_validate(payload)
    except Exception as exc:
        raise HTTPException(status_code=500, detail=f"corrupt visdata file: {exc}")
    return payload


def create_app(
    artifacts_dir: Union[str, Path],
    static_dir: Optional[Union[str, Path]] = None,
) -> FastAPI:
    artifacts = Path(artifacts_dir)
    app = FastAPI(title="parlascope", version="0.1.0")

    @app.get("/api/models", response_model=list[ModelInfo])
    def list_models() -> list[ModelInfo]:
        models = []
        for path in sorted(artifacts.glob(f"*{VISDATA_SUFFIX}")):
            model_id = path.name[: -len(VISDATA_SUFFIX)]
            try:
                payload = _load_payload(artifacts, model_id)
            except HTTPException:
                continue
            models.append(
                ModelInfo(
                    id=model_id,
                    k=payload["k"],
                    n_tokens=payload["corpus"]["n_tokens"],
                )
            )
        return models

    @app.get("/api/visdata/{model_id}")
    def get_visdata(model_id: str) -> JSONResponse:
        return JSONResponse(_load_payload(artifacts, model_id))

    @app.post("/api/visdata/{model_id}/rank", response_model=RankResponse)
    def rank_topic_terms(model_id: str, request: RankRequest) -> RankResponse:
        payload = _load_payload(artifacts, model_id)
        if not (0 <= request.topic < payload["k"]):
            raise HTTPException(status_code=422, detail="topic index out of range")
        terms = payload["topics"][request.topic]["terms"]
        try:
            ranked = rank_exported_terms(terms, request.lambda_, request.top_n)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return RankResponse(
            topic=request.topic,
            terms=[RankedTerm(term=t, score=s) for t, s in ranked],
        )

    @app.post("/api/relevance", response_model=RelevanceResponse)
    def relevance_score(request: RelevanceRequest) -> RelevanceResponse:
        try:
            return RelevanceResponse(
                score=relevance(request.p_kw, request.p_w, request.lambda_)
            )
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/api/metrics", response_model=MetricsResponse)
    def metrics(request: MetricsRequest) -> MetricsResponse:
        try:
            m = compute_metrics(request.tp, request.fp, request.fn, request.tn)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return MetricsResponse(**m.to_dict())

    @app.post("/api/polarity", response_model=PolarityResponse)
    def polarity(request: PolarityRequest) -> PolarityResponse:
        try:
            summary = polarity_summary(
                request.scores, request.neg_threshold, request.pos_threshold
            )
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return PolarityResponse(**summary.to_dict())

    @app.post("/api/histogram", response_model=HistogramResponse)
    def histogram_counts(request: HistogramRequest) -> HistogramResponse:
        try:
            counts = histogram(request.scores, request.bins)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return HistogramResponse(bins=request.bins, counts=counts)

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="explorer")

    return app
