"""Exception types shared across the package.

Every error raised by the public API derives from :class:`AquaError`, so
callers (and the CLI) can catch one base class for data/runtime failures.
"""


class AquaError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateDataWarning(UserWarning):
    """Emitted when an input is statistically degenerate (e.g. a constant
    annotation column) and a documented fallback value is returned."""


# ---------------------------------------------------------------------------
# corpus loading / validation

class ParseError(AquaError):
    """A file could not be parsed; message carries path/line and reason."""


class DuplicateId(AquaError):
    """An identifier occurred more than once where uniqueness is required."""


class EmptyText(AquaError):
    """A comment with empty text was encountered."""


class UnknownCriterion(AquaError):
    """A criterion name outside the canonical 20-identifier set."""


class MissingCriterion(AquaError):
    """A required criterion is absent from an annotation or weight table."""


class ScoreOutOfRange(AquaError):
    """An annotation or prediction value outside {0, 1, 2, 3}."""


class EmptyVotes(AquaError):
    """A crowd vote list with no votes."""


class EmptyIntersection(AquaError):
    """Pairing produced no common comment ids; weight fitting is impossible."""


class BadFractions(AquaError):
    """Split fractions are not positive or do not sum to 1."""


# ---------------------------------------------------------------------------
# weights

class TooFewSamples(AquaError):
    """Weight fitting needs at least two paired comments."""


class WeightOutOfRange(AquaError):
    """A weight outside [-1, 1] (or non-finite) was supplied."""


# ---------------------------------------------------------------------------
# scoring

class CriterionMismatch(AquaError):
    """A prediction vector does not cover the weight table's criteria."""


class DegenerateBounds(AquaError):
    """Normalization bounds with s_max == s_min."""


# ---------------------------------------------------------------------------
# prediction providers

class UnknownComment(AquaError):
    """A provider was asked about a comment id it has no vector for."""


class InvalidRule(AquaError):
    """A mock-provider template or keyword rule is malformed."""


class EndpointUnavailable(AquaError):
    """The remote inference endpoint cannot be reached or is unhealthy."""


class ProtocolError(AquaError):
    """The remote endpoint violated the wire protocol."""


class Timeout(AquaError):
    """A remote request exceeded its deadline (after retries)."""


# ---------------------------------------------------------------------------
# evaluation

class LengthMismatch(AquaError):
    """Two paired label sequences differ in length."""


class EmptyInput(AquaError):
    """A metric was called with no data points."""


class InsufficientData(AquaError):
    """Reliability data has no item with two or more labels."""


class JoinFailure(AquaError):
    """Scores, predictions, or comments could not be joined by comment id."""
