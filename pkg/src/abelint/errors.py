"""Exception hierarchy for the abelint engine."""


class AbelintError(Exception):
    """Base class for all engine errors."""


class PoleOrderMismatch(AbelintError):
    """The declared pole order does not match the actual multiplicity."""


class InvalidFamily(AbelintError):
    """A normal-form parameter set violates a family constraint."""

    def __init__(self, constraint: str):
        self.constraint = constraint
        super().__init__(constraint)


class NoCyclesError(InvalidFamily):
    """The fiber carries no cycles at all (homology rank zero)."""


class ConstructionFailure(AbelintError):
    """Symbolic verification of a rectifying map failed.

    This signals an implementation bug, never bad user input.
    """


class NonPolynomialResidue(AbelintError):
    """A cycle integral failed to cancel to a polynomial in c.

    Internal invariant breach: the theory guarantees cancellation.
    """


class IdenticallyZero(AbelintError):
    """Zero counting was requested for an identically-zero integral."""


class NonConvergence(AbelintError):
    """A numeric routine failed to converge within its iteration budget."""


class GoldenMismatch(AbelintError):
    """A bundled example produced output differing from its stored golden."""
