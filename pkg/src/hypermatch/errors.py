"""Exception vocabulary shared by all hypermatch modules."""


class HypermatchError(Exception):
    """Base class for all package-specific errors."""


class DomainError(HypermatchError):
    """Argument outside the open domain of an analytic function."""


class DivisibilityError(HypermatchError):
    """Half-edge count l*m is not a multiple of the vertex degree d."""


class CapExceeded(HypermatchError):
    """Exhaustive enumeration would exceed the configured instance cap."""


class BudgetExceeded(HypermatchError):
    """Exact counting exhausted its search-node budget."""


class NonIntegralError(HypermatchError):
    """A quantity that must be an integer (factorial argument, index) is not."""


class RangeError(HypermatchError):
    """Index arguments violate their admissible range."""


class InfeasibleError(HypermatchError):
    """No hypergraph satisfies the requested conditioning."""


class NoRootError(HypermatchError):
    """The requested root does not exist for these parameters."""


class ConvergenceError(HypermatchError):
    """A root search failed to bracket or converge."""


class PoleError(HypermatchError):
    """Evaluation requested at (or numerically on top of) a pole."""


class MismatchError(HypermatchError):
    """An exact oracle comparison failed; carries the differing pair."""
