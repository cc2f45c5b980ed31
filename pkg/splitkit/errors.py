"""Exception hierarchy shared by all splitkit modules."""
from typing import Any, Optional


class SplitkitError(Exception):
    """Base class for every error raised by the library."""


class WordError(SplitkitError):
    """A word uses an unknown symbol or cannot be parsed."""


class PresentationError(SplitkitError):
    """A group description is inconsistent (bad table, bad rules)."""


class ConfluenceError(PresentationError):
    """A rewriting system failed the critical-pair check."""


class MembershipError(SplitkitError):
    """A subgroup oracle cannot answer for the given group or word."""


class SplittingError(SplitkitError):
    """A splitting description is degenerate or inconsistent."""


class BudgetExceeded(SplitkitError):
    """A ball or region outgrew the configured memory budget."""


class TreeDepthError(SplitkitError):
    """A tree neighbourhood was requested beyond the configured depth."""


class InvariantError(SplitkitError):
    """An indicator is not invariant under the subgroup it should be."""

    def __init__(self, message: str, witness: Optional[str] = None):
        super().__init__(message)
        self.witness = witness


class UnresolvedError(SplitkitError):
    """A certified answer was required but the radius was insufficient."""

    def __init__(self, message: str, radius: Optional[int] = None):
        super().__init__(message)
        self.radius = radius


class PosetConditionError(SplitkitError):
    """A poset with involution violates one of the tree-construction conditions.

    Condition 0 covers the partial-order axioms and e != ē; conditions 1-4
    are order reversal, finite intervals, comparability and the exclusion
    of e <= f together with e <= f̄.
    """

    def __init__(self, condition: int, witnesses: tuple[Any, ...], message: str = ""):
        text = message or f"condition ({condition}) violated by {witnesses}"
        super().__init__(text)
        self.condition = condition
        self.witnesses = witnesses


class CrossingDetected(SplitkitError):
    """Two half-spaces cross, so no nested family exists."""

    def __init__(self, message: str, double_coset: str, splittings: tuple[int, int]):
        super().__init__(message)
        self.double_coset = double_coset
        self.splittings = splittings


class AssemblyError(SplitkitError):
    """A graph of groups could not be assembled from the inputs."""


class InputError(SplitkitError):
    """An input file is missing, not JSON, or does not match its schema."""
