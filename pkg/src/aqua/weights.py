"""Correlation weights over the 20 criteria, plus score bounds.

The weight of a criterion is the Pearson correlation between its expert
scores and the binary crowd deliberativeness labels over a paired corpus.
Because both inputs are small integers, the raw-moment form

    w = (N*Sxy - Sx*Sy) / (sqrt(N*Sxx - Sx^2) * sqrt(N*Syy - Sy^2))

is computed in exact integer arithmetic up to the final division, which
makes fitting invariant under row permutation and makes the label-flip
antisymmetry (c -> 1-c negates every weight) hold bitwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .corpus import PairedCorpus
from .criteria import CRITERIA, CRITERION_SET
from .errors import (
    DegenerateDataWarning,
    MissingCriterion,
    ParseError,
    TooFewSamples,
    UnknownCriterion,
    WeightOutOfRange,
)

#: Published per-criterion correlation weights shipped as defaults.
DEFAULT_WEIGHTS: dict[str, float] = {
    "relevance": 0.20908452,
    "fact": 0.18285757,
    "opinion": -0.11069402,
    "justification": 0.29000763,
    "solution_proposals": 0.39535126,
    "additional_knowledge": 0.14655912,
    "question": -0.07331445,
    "referencing_users": -0.03768367,
    "referencing_medium": 0.07019062,
    "referencing_contents": -0.02847408,
    "referencing_personal": 0.21126469,
    "referencing_format": -0.02674237,
    "polite_address": 0.01482095,
    "respect": 0.00732909,
    "screaming": -0.01900971,
    "vulgar": -0.04995486,
    "insult": -0.05884586,
    "sarcasm": -0.15170863,
    "discrimination": 0.02934227,
    "storytelling": 0.10628146,
}

DEFAULT_PROVENANCE = "shipped-defaults"


@dataclass(frozen=True)
class WeightTable:
    """A total map criterion -> weight in [-1, 1].

    ``n_samples`` is the number of paired comments used in fitting (0 for
    the shipped defaults). ``zero_variance`` flags criteria whose weight was
    forced to 0 because a constant column made the correlation undefined.
    """

    weights: Mapping[str, float]
    n_samples: int = 0
    provenance: str = ""
    zero_variance: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        extra = set(self.weights) - CRITERION_SET
        if extra:
            raise UnknownCriterion(f"unknown criteria in weight table: {sorted(extra)}")
        missing = CRITERION_SET - set(self.weights)
        if missing:
            raise MissingCriterion(f"weight table missing {sorted(missing)}")
        for name in CRITERIA:
            w = self.weights[name]
            if not math.isfinite(w) or not -1.0 <= w <= 1.0:
                raise WeightOutOfRange(f"weight for {name!r} outside [-1, 1]: {w!r}")


@dataclass(frozen=True)
class ScoreBounds:
    """Analytic extremes of the raw score for a weight table."""

    s_min: float
    s_max: float

    def __post_init__(self) -> None:
        if not (self.s_min <= 0.0 <= self.s_max):
            raise ValueError(f"bounds must satisfy s_min <= 0 <= s_max, got {self}")

    @property
    def span(self) -> float:
        return self.s_max - self.s_min


def default_weights() -> WeightTable:
    """The shipped default weight table."""
    return WeightTable(weights=dict(DEFAULT_WEIGHTS), n_samples=0, provenance=DEFAULT_PROVENANCE)


def fit_weights(corpus: PairedCorpus) -> WeightTable:
    """Fit per-criterion weights from a paired corpus.

    Each weight is the Pearson correlation between the criterion's expert
    scores and the crowd labels over all paired comments. A constant column
    (zero variance) yields weight 0, is recorded in ``zero_variance`` and
    triggers a :class:`DegenerateDataWarning`: a constant signal carries no
    information about perceived deliberativeness.
    """
    n = len(corpus)
    if n < 2:
        raise TooFewSamples(f"need at least 2 paired comments to fit weights, got {n}")
    ids = [c.id for c in corpus.comments]
    c_vals = [corpus.crowd[cid].label for cid in ids]
    sum_c = sum(c_vals)
    den_c = n * sum_c - sum_c * sum_c  # == n*sum(c^2) - sum(c)^2 for 0/1 labels

    weights: dict[str, float] = {}
    degenerate: set[str] = set()
    for name in CRITERIA:
        s_vals = [corpus.expert[cid].scores[name] for cid in ids]
        sum_s = sum(s_vals)
        den_s = n * sum(v * v for v in s_vals) - sum_s * sum_s
        if den_s == 0 or den_c == 0:
            weights[name] = 0.0
            degenerate.add(name)
            continue
        num = n * sum(s * c for s, c in zip(s_vals, c_vals)) - sum_s * sum_c
        w = num / (math.sqrt(den_s) * math.sqrt(den_c))
        weights[name] = max(-1.0, min(1.0, w))
    if degenerate:
        warnings.warn(
            f"zero-variance columns fitted as weight 0: {sorted(degenerate)}",
            DegenerateDataWarning,
            stacklevel=2,
        )
    return WeightTable(
        weights=weights,
        n_samples=n,
        provenance=f"fitted from {n} paired comments",
        zero_variance=frozenset(degenerate),
    )


def compute_bounds(table: WeightTable, max_level: int = 3) -> ScoreBounds:
    """Highest/lowest reachable raw scores for a weight table.

    The maximum sets every non-negatively weighted criterion to
    ``max_level`` and the rest to 0; the minimum is the mirror image.
    Summation runs in canonical criterion order so the extremes are
    bit-identical to raw scores of the extremal prediction vectors.
    """
    if max_level < 1:
        raise ValueError(f"max_level must be >= 1, got {max_level}")
    s_max = 0.0
    s_min = 0.0
    for name in CRITERIA:
        w = table.weights[name]
        s_max += max_level * w if w >= 0.0 else 0.0
        s_min += max_level * w if w <= 0.0 else 0.0
    return ScoreBounds(s_min=s_min, s_max=s_max)


# ---------------------------------------------------------------------------
# TSV persistence
#
# weights.tsv: optional '#'-prefixed metadata lines, then a 'criterion<TAB>weight'
# header and exactly 20 data rows in canonical order, weights at 17
# significant digits (lossless for doubles).


def save_weights(table: WeightTable, path: str | Path) -> None:
    path = Path(path)
    lines = [f"# provenance: {table.provenance}", f"# n_samples: {table.n_samples}"]
    if table.zero_variance:
        lines.append(f"# zero_variance: {','.join(sorted(table.zero_variance))}")
    lines.append("criterion\tweight")
    for name in CRITERIA:
        lines.append(f"{name}\t{format(table.weights[name], '.17g')}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_weights(path: str | Path) -> WeightTable:
    path = Path(path)
    provenance = ""
    n_samples = 0
    zero_variance: frozenset[str] = frozenset()
    weights: dict[str, float] = {}
    header_seen = False
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("provenance:"):
                    provenance = body.split(":", 1)[1].strip()
                elif body.startswith("n_samples:"):
                    try:
                        n_samples = int(body.split(":", 1)[1].strip())
                    except ValueError as exc:
                        raise ParseError(f"{path}:{lineno}: bad n_samples") from exc
                elif body.startswith("zero_variance:"):
                    names = [s for s in body.split(":", 1)[1].strip().split(",") if s]
                    zero_variance = frozenset(names)
                continue
            if not header_seen:
                if line != "criterion\tweight":
                    raise ParseError(f"{path}:{lineno}: expected header 'criterion<TAB>weight'")
                header_seen = True
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 2 tab-separated fields")
            name, raw = parts
            if name not in CRITERION_SET:
                raise UnknownCriterion(f"{path}:{lineno}: unknown criterion {name!r}")
            if name in weights:
                raise ParseError(f"{path}:{lineno}: duplicate row for {name!r}")
            try:
                w = float(raw)
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: bad weight literal {raw!r}") from exc
            if not math.isfinite(w) or not -1.0 <= w <= 1.0:
                raise WeightOutOfRange(f"{path}:{lineno}: weight for {name!r} outside [-1, 1]: {raw}")
            weights[name] = w
    if not header_seen:
        raise ParseError(f"{path}: missing 'criterion<TAB>weight' header")
    missing = CRITERION_SET - set(weights)
    if missing:
        raise MissingCriterion(f"{path}: missing rows for {sorted(missing)}")
    return WeightTable(weights=weights, n_samples=n_samples, provenance=provenance,
                       zero_variance=zero_variance)
