"""Exception hierarchy shared by every module of the package."""


class CollabError(Exception):
    """Base class for all errors raised by collabest."""


class DimensionError(CollabError, ValueError):
    """Matrix or graph too small for the requested construction."""


class DomainError(CollabError, ValueError):
    """A scalar parameter lies outside its admissible range."""


class NotStochasticError(CollabError, ValueError):
    """Entries are negative or some row does not sum to one."""


class IsolatedNodeError(CollabError, ValueError):
    """A node has no in-neighbour, so equal-neighbour weights are undefined."""


class NotSymmetricError(CollabError, ValueError):
    pass


class DegenerateSpectrumError(CollabError, ValueError):
    """A non-trivial eigenvalue has modulus (numerically) equal to one.

    Raised for reducible or periodic inputs, where the closed-form
    performance ratio and the coefficient S(A) are undefined.
    """


class NotErgodicError(CollabError, ValueError):
    """The matrix is not irreducible and aperiodic."""


class NoTotalSupportError(CollabError, ValueError):
    pass


class ConvergenceError(CollabError, RuntimeError):
    pass


class InfeasibleParametersError(CollabError, ValueError):
    """No simple d-regular graph exists for the requested (n, d)."""


class GenerationTimeoutError(CollabError, RuntimeError):
    """Random generation exhausted its attempt budget."""
