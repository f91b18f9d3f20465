"""Comment and annotation data model, corpus I/O, pairing and splitting.

File formats (all UTF-8):

* ``comments.jsonl``  -- ``{"id": str, "text": str, "language": str?, "source": str?}``
* ``expert.jsonl``    -- ``{"comment_id": str, "scores": {criterion: int, ...}}``
* ``crowd.jsonl``     -- ``{"comment_id": str, "votes": [0/1, ...]}`` or
  pre-aggregated ``{"comment_id": str, "label": 0/1}``
* CSV variants carry the same fields as columns (RFC 4180, comma-separated);
  crowd vote lists are space-separated inside a single ``votes`` cell.

Loaders are single-threaded per file; every returned value is immutable
after construction and safe to share across threads.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .criteria import CRITERIA, CRITERION_SET, check_level
from .errors import (
    BadFractions,
    DuplicateId,
    EmptyIntersection,
    EmptyText,
    EmptyVotes,
    MissingCriterion,
    ParseError,
    ScoreOutOfRange,
    UnknownCriterion,
)

FORMATS = ("jsonl", "csv")


@dataclass(frozen=True)
class Comment:
    """A unit of discussion text with identity and language tag."""

    id: str
    text: str
    language: str = "de"
    source: str = ""

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("comment id must be nonempty")
        if not self.text:
            raise EmptyText(f"comment {self.id!r} has empty text")


@dataclass(frozen=True)
class ExpertAnnotation:
    """Per-criterion 0..3 scores from trained coders; always complete."""

    comment_id: str
    scores: Mapping[str, int]

    def __post_init__(self) -> None:
        if set(self.scores) != CRITERION_SET:
            extra = set(self.scores) - CRITERION_SET
            if extra:
                raise UnknownCriterion(f"unknown criteria for {self.comment_id!r}: {sorted(extra)}")
            missing = CRITERION_SET - set(self.scores)
            raise MissingCriterion(f"annotation {self.comment_id!r} missing {sorted(missing)}")
        for name, v in self.scores.items():
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v <= 3:
                check_level(v, f"{self.comment_id!r}:{name}")


@dataclass(frozen=True)
class CrowdVotes:
    """Raw binary judgments from individual crowd annotators."""

    comment_id: str
    votes: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.votes) == 0:
            raise EmptyVotes(f"no votes for comment {self.comment_id!r}")
        for v in self.votes:
            if isinstance(v, bool) or v not in (0, 1):
                raise ValueError(f"vote for {self.comment_id!r} must be 0 or 1, got {v!r}")


@dataclass(frozen=True)
class CrowdLabel:
    """Aggregated binary judgment: is the comment enriching/value-adding?"""

    comment_id: str
    label: int

    def __post_init__(self) -> None:
        if isinstance(self.label, bool) or self.label not in (0, 1):
            raise ValueError(f"label for {self.comment_id!r} must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class PairedCorpus:
    """Comments that carry both an expert annotation and a crowd label."""

    comments: tuple[Comment, ...]
    expert: Mapping[str, ExpertAnnotation]
    crowd: Mapping[str, CrowdLabel]

    def __post_init__(self) -> None:
        ids = [c.id for c in self.comments]
        if len(set(ids)) != len(ids):
            raise DuplicateId("paired corpus has duplicate comment ids")
        if not (set(ids) == set(self.expert) == set(self.crowd)):
            raise ValueError("paired corpus requires identical id sets for comments, expert and crowd")

    def __len__(self) -> int:
        return len(self.comments)


@dataclass(frozen=True)
class PairingReport:
    """Ids dropped on each side while intersecting the three inputs."""

    dropped_comments: frozenset[str] = field(default_factory=frozenset)
    dropped_expert: frozenset[str] = field(default_factory=frozenset)
    dropped_crowd: frozenset[str] = field(default_factory=frozenset)


# ---------------------------------------------------------------------------
# low-level record iteration


def _check_format(fmt: str) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    return fmt


def _iter_jsonl(path: Path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise ParseError(f"{path}:{lineno}: expected a JSON object")
            yield lineno, obj


def _iter_csv(path: Path, required: Sequence[str]) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParseError(f"{path}: empty CSV file")
        missing = [col for col in required if col not in reader.fieldnames]
        if missing:
            raise ParseError(f"{path}: header missing required columns {missing}")
        for row in reader:
            yield reader.line_num, dict(row)


def _require(obj: dict, key: str, path: Path, lineno: int) -> object:
    if key not in obj or obj[key] is None:
        raise ParseError(f"{path}:{lineno}: missing field {key!r}")
    return obj[key]


# ---------------------------------------------------------------------------
# comments


def load_comments(path: str | Path, format: str = "jsonl") -> list[Comment]:
    """Load comments preserving file order.

    Raises :class:`ParseError` on malformed records, :class:`DuplicateId` on
    repeated ids and :class:`EmptyText` on empty comment text.
    """
    path = Path(path)
    _check_format(format)
    comments: list[Comment] = []
    seen: set[str] = set()
    if format == "jsonl":
        records: Iterable[tuple[int, dict]] = _iter_jsonl(path)
    else:
        records = _iter_csv(path, required=("id", "text"))
    for lineno, obj in records:
        cid = str(_require(obj, "id", path, lineno))
        if not cid:
            raise ParseError(f"{path}:{lineno}: empty comment id")
        if cid in seen:
            raise DuplicateId(f"{path}:{lineno}: duplicate comment id {cid!r}")
        seen.add(cid)
        text = _require(obj, "text", path, lineno)
        if not isinstance(text, str) or not text:
            raise EmptyText(f"{path}:{lineno}: comment {cid!r} has empty text")
        language = obj.get("language") or "de"
        source = obj.get("source") or ""
        comments.append(Comment(id=cid, text=text, language=str(language), source=str(source)))
    return comments


def save_comments(comments: Sequence[Comment], path: str | Path, format: str = "jsonl") -> None:
    path = Path(path)
    _check_format(format)
    if format == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for c in comments:
                fh.write(json.dumps(
                    {"id": c.id, "text": c.text, "language": c.language, "source": c.source},
                    ensure_ascii=False) + "\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "text", "language", "source"])
            for c in comments:
                writer.writerow([c.id, c.text, c.language, c.source])


# ---------------------------------------------------------------------------
# expert annotations


def _parse_expert_cell(raw: object, cid: str, name: str, path: Path, lineno: int) -> int:
    if isinstance(raw, str):
        try:
            raw = int(raw)
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: non-integer score for {name!r}: {raw!r}") from exc
    if isinstance(raw, bool) or not isinstance(raw, int):
        raise ParseError(f"{path}:{lineno}: non-integer score for {name!r}: {raw!r}")
    if not 0 <= raw <= 3:
        raise ScoreOutOfRange(f"{path}:{lineno}: {cid!r}:{name} out of range 0..3: {raw}")
    return raw


def load_expert_annotations(path: str | Path, format: str = "jsonl") -> tuple[list[ExpertAnnotation], int]:
    """Load expert annotations, keeping only complete rows.

    Rows missing one or more criteria are dropped (mirroring the filtering of
    incomplete annotations at corpus construction time) and counted; the
    second return value is the number of rejected rows. Unknown criterion
    names and out-of-range values are hard errors.
    """
    path = Path(path)
    _check_format(format)
    annotations: list[ExpertAnnotation] = []
    n_rejected = 0
    seen: set[str] = set()

    if format == "jsonl":
        for lineno, obj in _iter_jsonl(path):
            cid = str(_require(obj, "comment_id", path, lineno))
            scores_raw = _require(obj, "scores", path, lineno)
            if not isinstance(scores_raw, dict):
                raise ParseError(f"{path}:{lineno}: 'scores' must be an object")
            extra = set(scores_raw) - CRITERION_SET
            if extra:
                raise UnknownCriterion(f"{path}:{lineno}: unknown criteria {sorted(extra)}")
            scores = {}
            for name, raw in scores_raw.items():
                scores[name] = _parse_expert_cell(raw, cid, name, path, lineno)
            if set(scores) != CRITERION_SET:
                n_rejected += 1
                continue
            if cid in seen:
                raise DuplicateId(f"{path}:{lineno}: duplicate annotation for {cid!r}")
            seen.add(cid)
            annotations.append(ExpertAnnotation(comment_id=cid, scores=scores))
    else:
        with open(path, encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise ParseError(f"{path}: empty CSV file")
            extra = set(reader.fieldnames) - CRITERION_SET - {"comment_id"}
            if extra:
                raise UnknownCriterion(f"{path}: unknown criterion columns {sorted(extra)}")
            if "comment_id" not in reader.fieldnames:
                raise ParseError(f"{path}: header missing 'comment_id'")
            for row in reader:
                lineno = reader.line_num
                cid = row.get("comment_id") or ""
                if not cid:
                    raise ParseError(f"{path}:{lineno}: empty comment_id")
                scores = {}
                complete = True
                for name in CRITERIA:
                    raw = row.get(name)
                    if raw is None or raw == "":
                        complete = False
                        continue
                    scores[name] = _parse_expert_cell(raw, cid, name, path, lineno)
                if not complete:
                    n_rejected += 1
                    continue
                if cid in seen:
                    raise DuplicateId(f"{path}:{lineno}: duplicate annotation for {cid!r}")
                seen.add(cid)
                annotations.append(ExpertAnnotation(comment_id=cid, scores=scores))
    return annotations, n_rejected


def save_expert_annotations(annotations: Sequence[ExpertAnnotation], path: str | Path,
                            format: str = "jsonl") -> None:
    path = Path(path)
    _check_format(format)
    if format == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for ann in annotations:
                obj = {"comment_id": ann.comment_id,
                       "scores": {name: ann.scores[name] for name in CRITERIA}}
                fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["comment_id", *CRITERIA])
            for ann in annotations:
                writer.writerow([ann.comment_id, *(ann.scores[name] for name in CRITERIA)])


# ---------------------------------------------------------------------------
# crowd labels


def majority_vote(votes: CrowdVotes) -> CrowdLabel:
    """Aggregate binary crowd votes: 1 iff strictly more 1s than 0s.

    An even split resolves to 0 (a comment not clearly judged enriching is
    treated as non-deliberative). With an odd number of annotators the
    tie-break can never fire.
    """
    if len(votes.votes) == 0:
        raise EmptyVotes(f"no votes for comment {votes.comment_id!r}")
    ones = sum(votes.votes)
    zeros = len(votes.votes) - ones
    return CrowdLabel(comment_id=votes.comment_id, label=1 if ones > zeros else 0)


def _parse_vote_list(raw: object, path: Path, lineno: int) -> tuple[int, ...]:
    if isinstance(raw, str):
        parts = raw.split()
        try:
            raw = [int(p) for p in parts]
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: votes must be 0/1 values") from exc
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{path}:{lineno}: 'votes' must be a nonempty list")
    for v in raw:
        if isinstance(v, bool) or v not in (0, 1):
            raise ParseError(f"{path}:{lineno}: vote out of domain {{0,1}}: {v!r}")
    return tuple(raw)


def load_crowd_labels(path: str | Path, format: str = "jsonl") -> list[CrowdLabel]:
    """Load crowd labels; raw vote lists are aggregated by majority vote."""
    path = Path(path)
    _check_format(format)
    labels: list[CrowdLabel] = []
    seen: set[str] = set()
    if format == "jsonl":
        records: Iterable[tuple[int, dict]] = _iter_jsonl(path)
    else:
        records = _iter_csv(path, required=("comment_id",))
    for lineno, obj in records:
        cid = str(_require(obj, "comment_id", path, lineno))
        if cid in seen:
            raise DuplicateId(f"{path}:{lineno}: duplicate crowd record for {cid!r}")
        seen.add(cid)
        has_votes = obj.get("votes") not in (None, "")
        has_label = obj.get("label") not in (None, "")
        if has_votes == has_label:
            raise ParseError(f"{path}:{lineno}: exactly one of 'votes'/'label' required")
        if has_votes:
            votes = _parse_vote_list(obj["votes"], path, lineno)
            labels.append(majority_vote(CrowdVotes(comment_id=cid, votes=votes)))
        else:
            raw = obj["label"]
            if isinstance(raw, str):
                try:
                    raw = int(raw)
                except ValueError as exc:
                    raise ParseError(f"{path}:{lineno}: label must be 0 or 1") from exc
            if isinstance(raw, bool) or raw not in (0, 1):
                raise ParseError(f"{path}:{lineno}: label out of domain {{0,1}}: {raw!r}")
            labels.append(CrowdLabel(comment_id=cid, label=raw))
    return labels


def save_crowd_labels(labels: Sequence[CrowdLabel], path: str | Path, format: str = "jsonl") -> None:
    path = Path(path)
    _check_format(format)
    if format == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for lab in labels:
                fh.write(json.dumps({"comment_id": lab.comment_id, "label": lab.label}) + "\n")
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["comment_id", "label"])
            for lab in labels:
                writer.writerow([lab.comment_id, lab.label])


# ---------------------------------------------------------------------------
# pairing and splitting


def pair_corpus(comments: Sequence[Comment],
                expert: Sequence[ExpertAnnotation],
                crowd_labels: Sequence[CrowdLabel]) -> tuple[PairedCorpus, PairingReport]:
    """Intersect the three inputs on comment id.

    Returns the paired corpus (comment order preserved from ``comments``)
    plus a report of the ids dropped on each side. Raises
    :class:`EmptyIntersection` when no id survives.
    """
    expert_by_id = {a.comment_id: a for a in expert}
    crowd_by_id = {l.comment_id: l for l in crowd_labels}
    if len(expert_by_id) != len(expert):
        raise DuplicateId("duplicate comment ids in expert annotations")
    if len(crowd_by_id) != len(crowd_labels):
        raise DuplicateId("duplicate comment ids in crowd labels")
    comment_ids = {c.id for c in comments}
    paired_ids = comment_ids & set(expert_by_id) & set(crowd_by_id)
    if not paired_ids:
        raise EmptyIntersection("no comment id occurs in comments, expert and crowd inputs alike")
    corpus = PairedCorpus(
        comments=tuple(c for c in comments if c.id in paired_ids),
        expert={cid: expert_by_id[cid] for cid in paired_ids},
        crowd={cid: crowd_by_id[cid] for cid in paired_ids},
    )
    report = PairingReport(
        dropped_comments=frozenset(comment_ids - paired_ids),
        dropped_expert=frozenset(set(expert_by_id) - paired_ids),
        dropped_crowd=frozenset(set(crowd_by_id) - paired_ids),
    )
    return corpus, report


def _apportion(n: int, fractions: Sequence[float]) -> list[int]:
    # Floor every bucket, then hand the remainder to the largest fractional
    # parts (ties to the earlier bucket). Reproduces the published
    # 13,069 -> 8,495/1,960/2,614 arithmetic.
    floors = [math.floor(n * f) for f in fractions]
    remainders = [n * f - fl for f, fl in zip(fractions, floors)]
    order = sorted(range(len(fractions)), key=lambda i: (-remainders[i], i))
    for i in range(n - sum(floors)):
        floors[order[i]] += 1
    return floors


def split_corpus(comments: Sequence[Comment],
                 fractions: tuple[float, float, float] = (0.65, 0.15, 0.20),
                 seed: int = 0) -> tuple[list[Comment], list[Comment], list[Comment]]:
    """Randomly partition comments into train/val/test.

    The partition is disjoint and exhaustive, deterministic for a fixed
    seed, and sized by floor-plus-largest-remainder apportionment.
    """
    if len(fractions) != 3 or any(f <= 0 for f in fractions):
        raise BadFractions(f"fractions must be three positive values, got {fractions}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise BadFractions(f"fractions must sum to 1.0, got {sum(fractions)!r}")
    sizes = _apportion(len(comments), fractions)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(comments))
    shuffled = [comments[i] for i in order]
    train = shuffled[:sizes[0]]
    val = shuffled[sizes[0]:sizes[0] + sizes[1]]
    test = shuffled[sizes[0] + sizes[1]:]
    return train, val, test
