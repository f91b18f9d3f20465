"""HTTP service answering the prediction wire protocol.

Endpoints (shapes defined by the shared wire schema):

* ``GET /health``  -- 200 once every head is loaded, 503 before.
* ``POST /predict`` -- per comment, the argmax level of every criterion
  head; response order mirrors request order, ids echoed verbatim.

Every response body is validated against the shared schema before it is
sent, so a drifting head implementation fails loudly server-side instead
of poisoning clients.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import jsonschema
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .heads import PredictionHead, load_all_heads
from .protocol import criteria, max_level, validator

log = logging.getLogger("aqua_service")

Translator = Callable[[str], str]


@dataclass(frozen=True)
class ServiceConfig:
    model_dir: str
    base_model: str = ""
    port: int = 8080
    batch_size: int = 16
    translate_non_german: bool = False

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not (1 <= self.port <= 65535):
            raise ValueError(f"port out of range: {self.port}")


def create_app(cfg: ServiceConfig, translator: Translator | None = None) -> FastAPI:
    """Build the app; heads are loaded before the app is returned, so
    /health answers 200 from the first request on."""
    if cfg.translate_non_german and translator is None:
        raise ValueError("translate_non_german=True requires a translator")

    app = FastAPI(title="aqua inference service", docs_url=None, redoc_url=None)
    app.state.ready = False
    app.state.heads = {}

    heads: dict[str, PredictionHead] = load_all_heads(cfg.model_dir)
    log.info("loaded %d heads from %s (base model: %s)",
             len(heads), cfg.model_dir, cfg.base_model or "n/a")
    for name in criteria():
        log.info("  %s -> %s", name, heads[name].checkpoint)
    app.state.heads = heads
    app.state.ready = True

    request_validator = validator("predict_request")
    response_validator = validator("predict_response")

    def error(status: int, message: str, headers: dict | None = None) -> JSONResponse:
        return JSONResponse({"error": message}, status_code=status, headers=headers)

    @app.get("/health")
    def health():
        if not app.state.ready:
            return error(503, "heads not loaded yet")
        return {"status": "ok", "criteria": list(criteria()), "max_level": max_level()}

    @app.post("/predict")
    async def predict(request: Request):
        if not app.state.ready:
            return error(503, "heads not loaded yet")
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            return error(400, f"request body is not valid JSON: {exc}")
        try:
            request_validator.validate(body)
        except jsonschema.ValidationError as exc:
            return error(400, f"malformed request: {exc.message}")

        comments = body["comments"]
        texts = []
        n_translated = 0
        for comment in comments:
            text = comment["text"]
            if cfg.translate_non_german and comment.get("language", "de") != "de":
                text = translator(text)
                n_translated += 1
            texts.append(text)

        try:
            levels_by_criterion = {}
            for name in criteria():
                head = app.state.heads[name]
                levels: list[int] = []
                for start in range(0, len(texts), cfg.batch_size):
                    levels.extend(head.predict_batch(texts[start:start + cfg.batch_size]))
                levels_by_criterion[name] = levels
        except Exception as exc:  # inference failure must not leak a 200
            log.exception("inference failed")
            return error(500, f"inference failed: {exc}")

        payload = {"predictions": [
            {"comment_id": comment["id"],
             "scores": {name: levels_by_criterion[name][i] for name in criteria()}}
            for i, comment in enumerate(comments)]}
        try:
            response_validator.validate(payload)
        except jsonschema.ValidationError as exc:
            log.error("own response violates the wire schema: %s", exc.message)
            return error(500, f"response failed protocol validation: {exc.message}")

        headers = {}
        if cfg.translate_non_german:
            # translation is opt-in and auditable, never silent
            headers["X-Translation-Applied"] = str(n_translated)
        return JSONResponse(payload, headers=headers)

    return app


def serve(cfg: ServiceConfig, translator: Translator | None = None) -> None:
    """Run the service until interrupted."""
    import uvicorn

    app = create_app(cfg, translator)
    uvicorn.run(app, host="0.0.0.0", port=cfg.port)
