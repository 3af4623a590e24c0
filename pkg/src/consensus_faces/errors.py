"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ConsensusError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(ConsensusError, ValueError):
    """Operands have incompatible or empty dimensions."""


class RationalParseError(ConsensusError, ValueError):
    """A string does not follow the ``p`` / ``p/q`` rational grammar."""


class PreconditionError(ConsensusError, ValueError):
    """An operation was called on an input outside its domain."""


class CapacityError(ConsensusError):
    """The requested computation exceeds a configured size guard."""


class OutsidePolyhedronError(ConsensusError, ValueError):
    """A point handed to the face classifier does not lie in ``P``."""


class InvariantViolation(ConsensusError, RuntimeError):
    """An internal invariant that the theory guarantees was broken.

    Seeing this means either a bug or an input that bypassed validation.
    """


class ValidationError(ConsensusError):
    """A matrix of a candidate system violates a standing assumption.

    ``index`` is the 0-based position of the first offending matrix.
    """

    condition = "invalid"

    def __init__(self, index: int, message: str) -> None:
        super().__init__(f"matrix {index}: {message}")
        self.index = index


class FixedVectorViolation(ValidationError):
    condition = "fixed_vector"


class AssumptionViolation(ValidationError):
    condition = "assumption_1"

    def __init__(self, index: int, seminorm) -> None:
        super().__init__(
            index,
            f"Assumption 1 violated: induced consensus seminorm is {seminorm} > 1",
        )
        self.seminorm = seminorm


class InvarianceError(ConsensusError):
    """A matrix does not map a custom polyhedron into itself."""

    def __init__(self, violations: list[tuple[int, tuple]]) -> None:
        pairs = ", ".join(f"(matrix {i}, rep {rep})" for i, rep in violations)
        super().__init__(f"polyhedron is not invariant: {pairs}")
        self.violations = violations
