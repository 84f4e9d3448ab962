"""Shared exception types.

Every budget-style failure carries enough context to be reported as an
`unknown` verification status instead of crashing a whole suite.
"""


class GraphFieldError(Exception):
    """Base class for all library errors."""


class BudgetExceeded(GraphFieldError):
    """A search or closure exceeded its configured node/element budget."""

    def __init__(self, what: str, budget: int):
        super().__init__(f"{what} exceeded budget {budget}")
        self.what = what
        self.budget = budget


class Disconnected(GraphFieldError):
    """Operation requires a connected graph."""


class NotFromTransform(GraphFieldError):
    """Colored graph lacks the vertex tagging produced by transform()."""


class NotSubgroup(GraphFieldError):
    """H is not contained in G."""


class NotCenterless(GraphFieldError):
    """Automorphism towers require a centerless base group."""


class NotPrimePower(GraphFieldError):
    """q is not a prime power in the supported range."""


class NotAnAction(GraphFieldError):
    """The supplied map is not a homomorphism into Aut(N)."""


class SingularMultiplication(GraphFieldError):
    """A zero divisor appeared in a tower that should be a field.

    This would exhibit a counterexample to primality of the defining
    ideal; the offending factor is kept for the report.
    """

    def __init__(self, detail: str, counterexample=None):
        super().__init__(detail)
        self.counterexample = counterexample


class TooLarge(GraphFieldError):
    """Tower basis dimension exceeds the configured cap."""


class DepthExceeded(GraphFieldError):
    """Requested a root deeper than the profile provides."""


class ProfileNotLarger(GraphFieldError):
    """Embedding target profile must dominate the source pointwise."""


class ProfileNotSmaller(GraphFieldError):
    """Norm subfield profile must be dominated by the element's profile."""


class SpecInvalid(GraphFieldError):
    """A radical-extension specification violates one of its hypotheses."""

    def __init__(self, condition: str):
        super().__init__(f"invalid radical spec: {condition}")
        self.condition = condition


class ColorViolation(GraphFieldError):
    """A vertex map does not preserve the edge coloring."""


class ZeroInput(GraphFieldError):
    """Valuation of zero is undefined."""


class BadPrime(GraphFieldError):
    """No admissible specialization prime found."""


class UnknownResult(GraphFieldError):
    """A decision procedure returned Unknown where a verdict was required."""
