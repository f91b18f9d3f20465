"""The closed set of 20 deliberative-quality criteria.

Canonical snake_case identifiers are the single naming authority for files,
wire payloads, and in-memory maps. The tuple order below is the canonical
order used for deterministic summation and serialization.
"""

from __future__ import annotations

from .errors import UnknownCriterion

# Per-criterion scores (expert annotations and classifier predictions) live
# on a four-point scale 0..MAX_LEVEL.
MAX_LEVEL = 3
LEVELS = (0, 1, 2, 3)

RATIONALITY = (
    "relevance",
    "fact",
    "opinion",
    "justification",
    "solution_proposals",
    "additional_knowledge",
    "question",
)

RECIPROCITY = (
    "referencing_users",
    "referencing_medium",
    "referencing_contents",
    "referencing_personal",
    "referencing_format",
)

CIVILITY = (
    "polite_address",
    "respect",
    "screaming",
    "vulgar",
    "insult",
    "sarcasm",
    "discrimination",
)

STORYTELLING = ("storytelling",)

CRITERIA: tuple[str, ...] = RATIONALITY + RECIPROCITY + CIVILITY + STORYTELLING
CRITERION_SET = frozenset(CRITERIA)

DIMENSION_OF: dict[str, str] = {
    **{name: "rationality" for name in RATIONALITY},
    **{name: "reciprocity" for name in RECIPROCITY},
    **{name: "civility" for name in CIVILITY},
    **{name: "storytelling" for name in STORYTELLING},
}

# Criteria whose levels double as toxicity indicators.
TOXICITY_CRITERIA = ("screaming", "vulgar", "insult", "sarcasm", "discrimination")


def check_criterion(name: str) -> str:
    """Return ``name`` if canonical, else raise :class:`UnknownCriterion`."""
    if name not in CRITERION_SET:
        raise UnknownCriterion(f"unknown criterion {name!r}")
    return name


def check_level(value: object, context: str = "score") -> int:
    """Validate a four-point-scale value; bools are rejected."""
    from .errors import ScoreOutOfRange

    if isinstance(value, bool) or not isinstance(value, int):
        raise ScoreOutOfRange(f"{context} must be an integer in 0..{MAX_LEVEL}, got {value!r}")
    if not 0 <= value <= MAX_LEVEL:
        raise ScoreOutOfRange(f"{context} out of range 0..{MAX_LEVEL}: {value}")
    return value
