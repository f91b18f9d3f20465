"""Evaluation harness: agreement, F1 metrics, thresholding, reports.

Conventions, fixed here for comparability:

* F1 with a zero denominator (no predicted and no actual positives for a
  class) is 0.
* Macro F1 averages over the classes present in the gold labels; weighted
  F1 is the support-weighted mean over the same classes.
* Inter-coder agreement uses the nominal-metric coincidence-matrix form of
  Krippendorff's alpha; missing cells are handled by pairable-value
  counting.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Mapping, Sequence

import numpy as np

from .corpus import Comment
from .criteria import CRITERIA, TOXICITY_CRITERIA
from .errors import (
    DegenerateDataWarning,
    EmptyInput,
    InsufficientData,
    JoinFailure,
    LengthMismatch,
    ParseError,
)
from .score import AquaScore, PredictionVector

Label = Hashable


@dataclass(frozen=True)
class ClassCounts:
    true_positive: int
    false_positive: int
    false_negative: int
    support: int

    @property
    def precision(self) -> float:
        denom = self.true_positive + self.false_positive
        return self.true_positive / denom if denom else 0.0

    @property
    def recall(self) -> float:
        denom = self.true_positive + self.false_negative
        return self.true_positive / denom if denom else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2.0 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class ConfusionCounts:
    """Per-class tallies over one evaluation; supports sum to the item count."""

    per_class: Mapping[Label, ClassCounts]

    @property
    def n_items(self) -> int:
        return sum(c.support for c in self.per_class.values())


def confusion_counts(pred: Sequence[Label], gold: Sequence[Label]) -> ConfusionCounts:
    if len(pred) != len(gold):
        raise LengthMismatch(f"pred has {len(pred)} labels, gold has {len(gold)}")
    if not gold:
        raise EmptyInput("cannot evaluate zero items")
    classes = sorted(set(gold) | set(pred), key=repr)
    per_class = {}
    for cls in classes:
        tp = sum(1 for p, g in zip(pred, gold) if p == cls and g == cls)
        fp = sum(1 for p, g in zip(pred, gold) if p == cls and g != cls)
        fn = sum(1 for p, g in zip(pred, gold) if p != cls and g == cls)
        support = sum(1 for g in gold if g == cls)
        per_class[cls] = ClassCounts(tp, fp, fn, support)
    return ConfusionCounts(per_class=per_class)


def f1_scores(pred: Sequence[Label], gold: Sequence[Label]) -> tuple[dict[Label, float], float, float]:
    """Per-class, macro and support-weighted F1.

    The per-class map covers every label seen in gold or pred; the averages
    run over the classes present in gold.
    """
    counts = confusion_counts(pred, gold)
    per_class = {cls: c.f1 for cls, c in counts.per_class.items()}
    gold_classes = [cls for cls, c in counts.per_class.items() if c.support > 0]
    macro = sum(per_class[cls] for cls in gold_classes) / len(gold_classes)
    total = sum(counts.per_class[cls].support for cls in gold_classes)
    weighted = sum(per_class[cls] * counts.per_class[cls].support for cls in gold_classes) / total
    return per_class, macro, weighted


# ---------------------------------------------------------------------------
# inter-coder agreement


@dataclass(frozen=True)
class ReliabilityMatrix:
    """Items x coders table of nominal labels; ``None`` marks a missing cell."""

    rows: tuple[tuple[Label | None, ...], ...]

    def __post_init__(self) -> None:
        if not self.rows:
            raise InsufficientData("reliability matrix has no items")
        n_coders = len(self.rows[0])
        if any(len(row) != n_coders for row in self.rows):
            raise ValueError("all items must have one cell per coder")
        if n_coders < 2:
            raise InsufficientData("reliability data needs at least 2 coders")
        if not any(sum(v is not None for v in row) >= 2 for row in self.rows):
            raise InsufficientData("no item carries 2 or more labels")

    @property
    def n_coders(self) -> int:
        return len(self.rows[0])


def krippendorff_alpha(m: ReliabilityMatrix, metric: str = "nominal") -> float:
    """Chance-corrected agreement, alpha = 1 - D_o/D_e.

    Uses the coincidence-matrix formulation for nominal data. Items with
    fewer than two labels cannot form pairs and drop out. When every
    pairable value is identical, expected disagreement is undefined; alpha
    is defined as 1.0 and a :class:`DegenerateDataWarning` is emitted.
    """
    if metric != "nominal":
        raise ValueError(f"only the nominal metric is supported, got {metric!r}")
    units = [[v for v in row if v is not None] for row in m.rows]
    units = [u for u in units if len(u) >= 2]
    if not units:
        raise InsufficientData("no item carries 2 or more labels")

    categories: dict[Label, int] = {}
    for u in units:
        for v in u:
            categories.setdefault(v, len(categories))
    n_cat = len(categories)
    if n_cat == 1:
        warnings.warn("all pairable values identical; alpha defined as 1.0",
                      DegenerateDataWarning, stacklevel=2)
        return 1.0

    coincidence = np.zeros((n_cat, n_cat))
    for u in units:
        counts = np.zeros(n_cat)
        for v in u:
            counts[categories[v]] += 1
        n_u = len(u)
        # number of ordered (value, value) pairs within the unit, / (n_u - 1)
        contrib = np.outer(counts, counts) - np.diag(counts)
        coincidence += contrib / (n_u - 1)

    n_per_cat = coincidence.sum(axis=1)
    n_total = n_per_cat.sum()
    observed = coincidence.sum() - np.trace(coincidence)
    expected = (np.outer(n_per_cat, n_per_cat).sum() - (n_per_cat * n_per_cat).sum()) / (n_total - 1)
    d_o = observed / n_total
    d_e = expected / n_total
    if d_e == 0.0:
        warnings.warn("expected disagreement is zero; alpha defined as 1.0",
                      DegenerateDataWarning, stacklevel=2)
        return 1.0
    return 1.0 - d_o / d_e


# ---------------------------------------------------------------------------
# threshold-based constructiveness


def threshold_classify(scores: Sequence[AquaScore], threshold: float) -> list[int]:
    """Binary labels: 1 iff the normalized score reaches the threshold."""
    return [1 if s.normalized >= threshold else 0 for s in scores]


def threshold_grid(lo: float, hi: float, step: float) -> list[float]:
    if step <= 0 or hi <= lo:
        raise ValueError(f"grid must satisfy lo < hi and step > 0, got ({lo}, {hi}, {step})")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    # round to kill accumulation error so common cutoffs appear exactly
    return [round(lo + i * step, 9) for i in range(n)]


def tune_threshold(scores: Sequence[AquaScore], gold: Sequence[int],
                   grid: tuple[float, float, float] = (0.0, 5.0, 0.05)) -> tuple[float, float]:
    """Exhaustive grid scan maximizing weighted F1; ties take the lowest threshold."""
    if len(scores) != len(gold):
        raise LengthMismatch(f"{len(scores)} scores vs {len(gold)} labels")
    best_t = math.nan
    best_f1 = -1.0
    for t in threshold_grid(*grid):
        _, _, weighted = f1_scores(threshold_classify(scores, t), gold)
        if weighted > best_f1:
            best_t, best_f1 = t, weighted
    return best_t, best_f1


def toxicity_eval(predictions: Sequence[PredictionVector], gold_toxicity: Sequence[int],
                  criteria: Sequence[str] = TOXICITY_CRITERIA) -> dict[str, float]:
    """Weighted F1 of each criterion's raw levels against 0..3 toxicity labels."""
    if len(predictions) != len(gold_toxicity):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(gold_toxicity)} labels")
    if not criteria:
        raise ValueError("criteria subset must be nonempty")
    result = {}
    for name in criteria:
        levels = [p.predictions[name] for p in predictions]
        _, _, weighted = f1_scores(levels, list(gold_toxicity))
        result[name] = weighted
    return result


# ---------------------------------------------------------------------------
# ranking and length reports


@dataclass(frozen=True)
class RankEntry:
    comment_id: str
    aqua: float
    contributing: tuple[tuple[str, int], ...]  # criteria with prediction > 0


@dataclass(frozen=True)
class RankReport:
    top: tuple[RankEntry, ...]
    bottom: tuple[RankEntry, ...]


def _rank_entry(score: AquaScore, vector: PredictionVector) -> RankEntry:
    contributing = tuple((name, vector.predictions[name]) for name in CRITERIA
                         if vector.predictions[name] > 0)
    return RankEntry(comment_id=score.comment_id, aqua=score.normalized, contributing=contributing)


def rank_report(scores: Sequence[AquaScore], predictions: Sequence[PredictionVector],
                k: int = 3) -> RankReport:
    """Top-k and bottom-k comments by normalized score.

    Ties break by comment id ascending; entries list only criteria whose
    predicted level is greater than zero. A ``k`` beyond the corpus size
    returns the full ordering.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    by_id = {p.comment_id: p for p in predictions}
    missing = [s.comment_id for s in scores if s.comment_id not in by_id]
    if missing:
        raise JoinFailure(f"no prediction vector for scored comments: {sorted(missing)[:5]}")
    top = sorted(scores, key=lambda s: (-s.normalized, s.comment_id))[:k]
    bottom = sorted(scores, key=lambda s: (s.normalized, s.comment_id))[:k]
    return RankReport(
        top=tuple(_rank_entry(s, by_id[s.comment_id]) for s in top),
        bottom=tuple(_rank_entry(s, by_id[s.comment_id]) for s in bottom),
    )


@dataclass(frozen=True)
class LengthBin:
    lo: int  # inclusive word count
    hi: int  # exclusive
    count: int
    mean: float
    max: float


@dataclass(frozen=True)
class LengthReport:
    pairs: tuple[tuple[int, float], ...]  # (word_count, aqua) in scores order
    bins: tuple[LengthBin, ...]


def length_analysis(scores: Sequence[AquaScore], comments: Sequence[Comment]) -> LengthReport:
    """Word count (whitespace tokens) vs normalized score, plus width-10 bins."""
    text_by_id = {c.id: c.text for c in comments}
    missing = [s.comment_id for s in scores if s.comment_id not in text_by_id]
    if missing:
        raise JoinFailure(f"no comment text for scored comments: {sorted(missing)[:5]}")
    pairs = tuple((len(text_by_id[s.comment_id].split()), s.normalized) for s in scores)
    grouped: dict[int, list[float]] = {}
    for wc, aqua in pairs:
        grouped.setdefault(wc // 10, []).append(aqua)
    bins = tuple(
        LengthBin(lo=10 * b, hi=10 * b + 10, count=len(vals),
                  mean=sum(vals) / len(vals), max=max(vals))
        for b, vals in sorted(grouped.items())
    )
    return LengthReport(pairs=pairs, bins=bins)


# ---------------------------------------------------------------------------
# label file I/O
#
# labels.jsonl: {"comment_id": str, "label": 0/1} for constructiveness, or
# {"comment_id": str, "toxicity": 0..3}; one field per file, consistently.


def load_labels(path: str | Path) -> tuple[dict[str, int], str]:
    """Load external labels; returns (id -> value, field name)."""
    path = Path(path)
    labels: dict[str, int] = {}
    fieldname: str | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict) or "comment_id" not in obj:
                raise ParseError(f"{path}:{lineno}: expected a comment_id field")
            present = [f for f in ("label", "toxicity") if f in obj]
            if len(present) != 1:
                raise ParseError(f"{path}:{lineno}: exactly one of 'label'/'toxicity' required")
            if fieldname is None:
                fieldname = present[0]
            elif fieldname != present[0]:
                raise ParseError(f"{path}:{lineno}: mixed label fields in one file")
            value = obj[fieldname]
            limit = 1 if fieldname == "label" else 3
            if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value <= limit:
                raise ParseError(f"{path}:{lineno}: {fieldname} out of range 0..{limit}: {value!r}")
            cid = str(obj["comment_id"])
            if cid in labels:
                raise ParseError(f"{path}:{lineno}: duplicate label for {cid!r}")
            labels[cid] = value
    if fieldname is None:
        raise EmptyInput(f"{path}: no label records")
    return labels, fieldname
