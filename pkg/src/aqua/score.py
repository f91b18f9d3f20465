"""Raw and normalized comment-quality scores.

The raw score of a comment is the weighted sum of its 20 per-criterion
predictions; it is then min-max scaled to [0, 5] using the analytic bounds
of the active weight table. Criteria are summed in canonical order in
double precision, so results are deterministic and batch scoring is
bitwise equal to per-comment scoring.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .criteria import CRITERIA, CRITERION_SET, check_level
from .errors import (
    CriterionMismatch,
    DegenerateBounds,
    DuplicateId,
    MissingCriterion,
    ParseError,
    UnknownCriterion,
)
from .weights import ScoreBounds, WeightTable, compute_bounds


@dataclass(frozen=True)
class PredictionVector:
    """Predicted 0..3 levels for all 20 criteria of one comment."""

    comment_id: str
    predictions: Mapping[str, int]

    def __post_init__(self) -> None:
        if set(self.predictions) != CRITERION_SET:
            extra = set(self.predictions) - CRITERION_SET
            if extra:
                raise UnknownCriterion(f"unknown criteria for {self.comment_id!r}: {sorted(extra)}")
            missing = CRITERION_SET - set(self.predictions)
            raise MissingCriterion(f"predictions for {self.comment_id!r} missing {sorted(missing)}")
        for name, v in self.predictions.items():
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v <= 3:
                check_level(v, f"{self.comment_id!r}:{name}")


@dataclass(frozen=True)
class AquaScore:
    """Raw and [0,5]-normalized quality score of one comment."""

    comment_id: str
    raw: float
    normalized: float

    def __post_init__(self) -> None:
        # Never clamped: a normalized value outside [0,5] is a contract
        # violation and must surface, not be hidden.
        if not 0.0 <= self.normalized <= 5.0:
            raise ValueError(
                f"normalized score for {self.comment_id!r} outside [0, 5]: {self.normalized!r}")


def raw_score(p: PredictionVector, w: WeightTable) -> float:
    """Weighted sum of predictions, in canonical criterion order."""
    total = 0.0
    try:
        for name in CRITERIA:
            total += w.weights[name] * p.predictions[name]
    except KeyError as exc:
        raise CriterionMismatch(
            f"prediction vector {p.comment_id!r} does not cover criterion {exc.args[0]!r}"
        ) from exc
    return total


def normalize(raw: float, bounds: ScoreBounds) -> float:
    """Min-max scale a raw score to [0, 5] using the given bounds."""
    if bounds.s_max == bounds.s_min:
        raise DegenerateBounds(f"cannot normalize with s_min == s_max == {bounds.s_min!r}")
    # ratio first, so raw == s_max lands on exactly 5.0 and s_min on 0.0
    return 5.0 * ((raw - bounds.s_min) / (bounds.s_max - bounds.s_min))


def aqua_score(p: PredictionVector, w: WeightTable) -> AquaScore:
    """Score one comment; bounds are recomputed from ``w`` on every call."""
    bounds = compute_bounds(w)
    r = raw_score(p, w)
    return AquaScore(comment_id=p.comment_id, raw=r, normalized=normalize(r, bounds))


def score_batch(ps: Sequence[PredictionVector], w: WeightTable) -> list[AquaScore]:
    """Score a batch; output order matches input order."""
    return [aqua_score(p, w) for p in ps]


# ---------------------------------------------------------------------------
# JSONL persistence
#
# predictions.jsonl: {"comment_id": str, "predictions": {criterion: int, ...}}
# scores.jsonl:      {"comment_id": str, "raw": float, "aqua": float}
# Floats are written at 17 significant digits (lossless round-trip); maps
# are emitted in canonical criterion order.


def load_predictions(path: str | Path) -> list[PredictionVector]:
    path = Path(path)
    vectors: list[PredictionVector] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict) or "comment_id" not in obj or "predictions" not in obj:
                raise ParseError(f"{path}:{lineno}: expected comment_id and predictions fields")
            cid = str(obj["comment_id"])
            if cid in seen:
                raise DuplicateId(f"{path}:{lineno}: duplicate predictions for {cid!r}")
            seen.add(cid)
            preds = obj["predictions"]
            if not isinstance(preds, dict):
                raise ParseError(f"{path}:{lineno}: 'predictions' must be an object")
            vectors.append(PredictionVector(comment_id=cid, predictions=preds))
    return vectors


def save_predictions(vectors: Sequence[PredictionVector], path: str | Path) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for v in vectors:
            obj = {"comment_id": v.comment_id,
                   "predictions": {name: v.predictions[name] for name in CRITERIA}}
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def load_scores(path: str | Path) -> list[AquaScore]:
    path = Path(path)
    scores: list[AquaScore] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            try:
                scores.append(AquaScore(comment_id=str(obj["comment_id"]),
                                        raw=float(obj["raw"]),
                                        normalized=float(obj["aqua"])))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: bad score record: {exc}") from exc
    return scores


def save_scores(scores: Sequence[AquaScore], path: str | Path) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for s in scores:
            fh.write('{"comment_id": %s, "raw": %s, "aqua": %s}\n' % (
                json.dumps(s.comment_id, ensure_ascii=False),
                format(s.raw, ".17g"),
                format(s.normalized, ".17g"),
            ))
