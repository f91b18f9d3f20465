"""Prediction providers: precomputed files, deterministic mocks, remote HTTP.

A provider turns a batch of comments into one validated
:class:`~aqua.score.PredictionVector` per comment, aligned positionally.
All externally produced predictions (files and wire) are range-checked here,
at the trust boundary, before they can reach the scorer.

Wire protocol (shared with the inference service; schema shipped as package
data in ``aqua/schemas/wire.json``):

* ``GET /health`` -> 200 ``{"status": "ok", "criteria": [...", "max_level": 3}``
* ``POST /predict`` with ``{"comments": [{"id", "text", "language"}, ...]}``
  -> 200 ``{"predictions": [{"comment_id", "scores": {...}}, ...]}``;
  non-200 responses carry ``{"error": str}``.
"""

from __future__ import annotations

import json
import time
from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import jsonschema
import requests

from .corpus import Comment
from .criteria import CRITERIA, CRITERION_SET, MAX_LEVEL
from .errors import (
    AquaError,
    EndpointUnavailable,
    InvalidRule,
    ProtocolError,
    Timeout,
    UnknownComment,
)
from .score import PredictionVector, load_predictions


@lru_cache(maxsize=1)
def load_wire_schema() -> dict:
    """The wire-protocol JSON schema shipped with this package."""
    text = resources.files("aqua").joinpath("schemas/wire.json").read_text(encoding="utf-8")
    return json.loads(text)


def wire_validator(part: str) -> jsonschema.Draft202012Validator:
    """Validator for one named message shape (e.g. ``predict_response``)."""
    schema = load_wire_schema()
    if part not in schema["$defs"]:
        raise KeyError(f"no wire message named {part!r}")
    return jsonschema.Draft202012Validator({"$defs": schema["$defs"], "$ref": f"#/$defs/{part}"})


class PredictionProvider(ABC):
    """Maps comments to per-criterion prediction vectors.

    Implementations must be safe for concurrent ``predict`` calls and must
    return one vector per input comment, ids aligned positionally.
    """

    @abstractmethod
    def predict(self, comments: Sequence[Comment]) -> list[PredictionVector]:
        raise NotImplementedError


class FilePredictionProvider(PredictionProvider):
    """Serves precomputed vectors from a predictions.jsonl file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        # load_predictions validates ranges and rejects duplicate ids
        self._index = {v.comment_id: v for v in load_predictions(self.path)}

    def predict(self, comments: Sequence[Comment]) -> list[PredictionVector]:
        out = []
        for c in comments:
            try:
                out.append(self._index[c.id])
            except KeyError:
                raise UnknownComment(f"no prediction vector for comment {c.id!r} in {self.path}") from None
        return out


def _fill_template(template: Mapping[str, int] | None) -> dict[str, int]:
    levels = {name: 0 for name in CRITERIA}
    if template:
        for name, level in template.items():
            if name not in CRITERION_SET:
                raise InvalidRule(f"template names unknown criterion {name!r}")
            if isinstance(level, bool) or not isinstance(level, int) or not 0 <= level <= MAX_LEVEL:
                raise InvalidRule(f"template level for {name!r} must be an int in 0..{MAX_LEVEL}")
            levels[name] = level
    return levels


class ConstantPredictionProvider(PredictionProvider):
    """Returns the same criterion levels for every comment (test scaffold)."""

    def __init__(self, template: Mapping[str, int] | None = None):
        self._levels = _fill_template(template)

    def predict(self, comments: Sequence[Comment]) -> list[PredictionVector]:
        return [PredictionVector(comment_id=c.id, predictions=dict(self._levels))
                for c in comments]


class KeywordMockProvider(PredictionProvider):
    """Sets criterion levels from case-insensitive substring rules.

    Rules are (substring, criterion, level) triples applied in order on top
    of a base template, e.g. ``("?", "question", 3)``. Deterministic by
    construction, which makes it useful for end-to-end tests.
    """

    def __init__(self, rules: Iterable[tuple[str, str, int]],
                 template: Mapping[str, int] | None = None):
        self._base = _fill_template(template)
        self._rules = []
        for rule in rules:
            try:
                substring, name, level = rule
            except (TypeError, ValueError):
                raise InvalidRule(f"rule must be (substring, criterion, level), got {rule!r}") from None
            if not substring:
                raise InvalidRule("rule substring must be nonempty")
            if name not in CRITERION_SET:
                raise InvalidRule(f"rule names unknown criterion {name!r}")
            if isinstance(level, bool) or not isinstance(level, int) or not 0 <= level <= MAX_LEVEL:
                raise InvalidRule(f"rule level for {name!r} must be an int in 0..{MAX_LEVEL}")
            self._rules.append((substring.lower(), name, level))

    def predict(self, comments: Sequence[Comment]) -> list[PredictionVector]:
        out = []
        for c in comments:
            levels = dict(self._base)
            text = c.text.lower()
            for substring, name, level in self._rules:
                if substring in text:
                    levels[name] = level
            out.append(PredictionVector(comment_id=c.id, predictions=levels))
        return out


def constant_provider(vector_template: Mapping[str, int] | None = None) -> ConstantPredictionProvider:
    return ConstantPredictionProvider(vector_template)


def keyword_mock_provider(rules: Iterable[tuple[str, str, int]],
                          template: Mapping[str, int] | None = None) -> KeywordMockProvider:
    return KeywordMockProvider(rules, template)


def file_provider(path: str | Path) -> FilePredictionProvider:
    return FilePredictionProvider(path)


# ---------------------------------------------------------------------------
# remote inference client


@dataclass(frozen=True)
class RemoteEndpointConfig:
    """Connection settings for a remote inference endpoint."""

    base_url: str
    timeout: float = 30.0
    max_batch: int = 32
    max_in_flight: int = 4
    retries: int = 2
    backoff_base: float = 0.5

    def __post_init__(self) -> None:
        if not self.base_url:
            raise ValueError("base_url must be nonempty")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_batch < 1:
            raise ValueError("max_batch must be >= 1")
        if self.max_in_flight < 1:
            raise ValueError("max_in_flight must be >= 1")
        if self.retries < 0:
            raise ValueError("retries must be >= 0")


class RemoteProvider(PredictionProvider):
    """HTTP client for the inference service.

    Comments are chunked into batches of at most ``max_batch``, fanned out
    over at most ``max_in_flight`` concurrent requests, retried per batch
    with exponential backoff, and reassembled in input order. Responses are
    validated against the shared wire schema before acceptance; a partially
    valid batch is rejected whole.
    """

    def __init__(self, cfg: RemoteEndpointConfig):
        self.cfg = cfg
        self._base = cfg.base_url.rstrip("/")
        self._response_validator = wire_validator("predict_response")
        self._check_health()

    def _check_health(self) -> None:
        try:
            resp = requests.get(f"{self._base}/health", timeout=self.cfg.timeout)
        except requests.RequestException as exc:
            raise EndpointUnavailable(f"health check failed for {self._base}: {exc}") from exc
        if resp.status_code != 200:
            raise EndpointUnavailable(
                f"health check for {self._base} returned {resp.status_code}")
        try:
            body = resp.json()
            wire_validator("health_response").validate(body)
        except (ValueError, jsonschema.ValidationError) as exc:
            raise ProtocolError(f"malformed health response from {self._base}: {exc}") from exc
        if set(body["criteria"]) != CRITERION_SET:
            raise ProtocolError(f"endpoint {self._base} does not serve the canonical criteria")

    def predict(self, comments: Sequence[Comment]) -> list[PredictionVector]:
        from concurrent.futures import ThreadPoolExecutor

        if not comments:
            return []
        chunks = [comments[i:i + self.cfg.max_batch]
                  for i in range(0, len(comments), self.cfg.max_batch)]
        results: list[list[PredictionVector] | None] = [None] * len(chunks)
        with ThreadPoolExecutor(max_workers=self.cfg.max_in_flight) as pool:
            futures = {pool.submit(self._predict_batch, chunk): i
                       for i, chunk in enumerate(chunks)}
            for future, i in futures.items():
                results[i] = future.result()
        out: list[PredictionVector] = []
        for chunk_result in results:
            assert chunk_result is not None
            out.extend(chunk_result)
        return out

    def _predict_batch(self, chunk: Sequence[Comment]) -> list[PredictionVector]:
        payload = {"comments": [{"id": c.id, "text": c.text, "language": c.language}
                                for c in chunk]}
        last_exc: AquaError | None = None
        for attempt in range(self.cfg.retries + 1):
            if attempt:
                time.sleep(self.cfg.backoff_base * 2 ** (attempt - 1))
            try:
                resp = requests.post(f"{self._base}/predict", json=payload,
                                     timeout=self.cfg.timeout)
            except requests.Timeout as exc:
                last_exc = Timeout(f"predict request timed out after {self.cfg.timeout}s")
                last_exc.__cause__ = exc
                continue
            except requests.RequestException as exc:
                last_exc = EndpointUnavailable(f"predict request failed: {exc}")
                last_exc.__cause__ = exc
                continue
            if resp.status_code >= 500:
                last_exc = EndpointUnavailable(
                    f"endpoint returned {resp.status_code}: {_error_text(resp)}")
                continue
            if resp.status_code != 200:
                raise ProtocolError(f"endpoint returned {resp.status_code}: {_error_text(resp)}")
            return self._parse_batch(resp, chunk)
        assert last_exc is not None
        raise last_exc

    def _parse_batch(self, resp: requests.Response, chunk: Sequence[Comment]) -> list[PredictionVector]:
        try:
            body = resp.json()
        except ValueError as exc:
            raise ProtocolError(f"response is not valid JSON: {exc}") from exc
        try:
            self._response_validator.validate(body)
        except jsonschema.ValidationError as exc:
            raise ProtocolError(f"response violates wire schema: {exc.message}") from exc
        requested = Counter(c.id for c in chunk)
        returned = Counter(p["comment_id"] for p in body["predictions"])
        if requested != returned:
            raise ProtocolError(
                f"response ids do not match request: missing {sorted(requested - returned)}, "
                f"unexpected {sorted(returned - requested)}")
        scores_by_id: dict[str, dict] = {}
        for pred in body["predictions"]:
            cid = pred["comment_id"]
            if cid in scores_by_id and scores_by_id[cid] != pred["scores"]:
                raise ProtocolError(f"conflicting duplicate predictions for {cid!r}")
            scores_by_id[cid] = pred["scores"]
        try:
            return [PredictionVector(comment_id=c.id, predictions=scores_by_id[c.id])
                    for c in chunk]
        except AquaError as exc:
            raise ProtocolError(f"response failed validation: {exc}") from exc


def _error_text(resp: requests.Response) -> str:
    try:
        body = resp.json()
        if isinstance(body, dict) and "error" in body:
            return str(body["error"])
    except ValueError:
        pass
    return resp.text[:200]


def remote_provider(cfg: RemoteEndpointConfig) -> RemoteProvider:
    return RemoteProvider(cfg)
