"""Exception taxonomy.

Two families: input/precondition violations (bad arguments, malformed
files) and structured search failures (an algorithm ran as designed but
could not produce the object on this instance).  The CLI maps the first
family to exit code 3 and the second to exit code 2.
"""
from __future__ import annotations


class RobhamError(Exception):
    """Base class for every error raised by this package."""


class InputError(RobhamError):
    """Precondition or parse violation: the call itself was malformed."""


class SearchError(RobhamError):
    """The construction ran but failed on this instance (structured)."""


# -- input / precondition ------------------------------------------------

class LoopRejected(InputError):
    pass


class OutOfRange(InputError):
    pass


class EndpointClash(InputError):
    pass


class LengthMismatch(InputError):
    pass


class ParamUnderflow(InputError):
    pass


class ParamInvalid(InputError):
    pass


class HypothesisViolated(InputError):
    """A proposition's hypothesis fails; message names the inequality."""


class NotDistinct(InputError):
    pass


class TooLarge(InputError):
    pass


class TooManyPaths(InputError):
    pass


class EdgeNotOnCycle(InputError):
    pass


class NotOutNeighbour(InputError):
    pass


class IsOrigin(InputError):
    pass


class InvalidSpec(InputError):
    pass


class ParseError(InputError):
    pass


# -- structured search failures ------------------------------------------

class LayerStalled(SearchError):
    def __init__(self, layer: int, size: int):
        super().__init__(f"layer {layer} stalled at size {size}")
        self.layer = layer
        self.size = size


class BackwardBlocked(SearchError):
    def __init__(self, layer: int):
        super().__init__(f"no eligible vertex at layer {layer}")
        self.layer = layer


class LengthExceeded(SearchError):
    def __init__(self, needed: int, cap: int):
        super().__init__(f"construction needs {needed} vertices, cap is {cap}")
        self.needed = needed
        self.cap = cap


class SizeExceeded(SearchError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"structure has {size} vertices, cap is {cap}")
        self.size = size
        self.cap = cap


class CoverNotFound(SearchError):
    def __init__(self, attempts: int, worst_target=None, worst_count: int = 0):
        msg = f"no valid cover after {attempts} attempts"
        if worst_target is not None:
            msg += f" (worst target {worst_target} covered {worst_count}x)"
        super().__init__(msg)
        self.attempts = attempts
        self.worst_target = worst_target
        self.worst_count = worst_count


class NotEmbedded(SearchError):
    pass


class PathCollision(SearchError):
    pass


class AssignmentFailed(SearchError):
    pass


class NoFactor(SearchError):
    """No 1-factor exists; carries a Hall-violator vertex set."""

    def __init__(self, violator: tuple[int, ...]):
        super().__init__(f"no 1-factor: Hall violator of size {len(violator)}")
        self.violator = violator


class GoalUnreachable(SearchError):
    def __init__(self, depth_cap: int, reached: int):
        super().__init__(
            f"goal terminus not reached within depth {depth_cap} "
            f"({reached} termini explored)"
        )
        self.depth_cap = depth_cap
        self.reached = reached


class PipelineError(SearchError):
    """Stage-tagged pipeline failure.

    ``stage`` is one of AbsorberFailed, FactorFailed, ReductionFailed,
    TrimInfeasible, AbsorbFailed, BruteForceExhausted.
    """

    def __init__(self, stage: str, message: str, cause: Exception | None = None):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.cause = cause
