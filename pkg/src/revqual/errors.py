"""Exception hierarchy shared across the engine."""


class RevqualError(Exception):
    """Base class for all errors raised by this package."""


class EmptyText(RevqualError):
    """Raised when an operation requires non-empty tokenized text."""


class InvalidInput(RevqualError):
    """A request or record violates an input invariant.

    Carries a machine-readable ``code`` alongside the human message.
    """

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


class BackendError(RevqualError):
    """Transport-level failure talking to an external backend."""


class InvalidAuthorId(RevqualError):
    """Author identifier does not match the expected syntax."""


class NotFound(RevqualError):
    """Upstream service reported the requested entity does not exist."""


class RateLimited(RevqualError):
    """Upstream service rejected the request due to rate limiting."""

    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class NetworkError(BackendError):
    """Connection, timeout, or other socket-level failure."""


class MalformedResponse(RevqualError):
    """Upstream response could not be parsed as expected."""


class MalformedJudgment(RevqualError):
    """Judge reply failed validation after all retries."""


class ScoreOutOfRange(MalformedJudgment):
    """Judge persistently returned a score outside 1..5."""


class SchemaMismatch(RevqualError):
    """Feature vector and model disagree about the feature schema."""


class DimensionMismatch(RevqualError):
    """Matrix/target shapes are inconsistent."""


class SingularSystem(RevqualError):
    """The regularized normal equations are numerically singular."""


class NonFiniteLoss(RevqualError):
    """Training diverged: loss became NaN or infinite."""

    def __init__(self, message: str, epoch: int | None = None):
        super().__init__(message)
        self.epoch = epoch


class DegenerateInput(RevqualError):
    """Rank correlation is undefined for the given inputs."""


class TooFewSamples(RevqualError):
    """Not enough records for the requested fit or fold layout."""


class FormatVersionMismatch(RevqualError):
    """Model file carries an unsupported format or feature-schema version."""


class CorruptModel(RevqualError):
    """Model file is truncated, unparsable, or fails its checksum."""


class ModelNotLoaded(RevqualError):
    """An overall-quality estimate was required but no model is loaded."""


class ConfigError(RevqualError):
    """Configuration file or environment overrides are invalid.

    ``key`` points at the offending section/option.
    """

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
