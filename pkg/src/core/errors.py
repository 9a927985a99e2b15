"""
Exception hierarchy shared by the solvers, the kernels and the CLI.
Each CLI exit code maps to exactly one branch of this tree.
"""


class ClusteringError(Exception):
    """Base class for every error raised by this package."""
    pass


class InstanceError(ClusteringError):
    """Raised when an instance document is malformed or violates the metric axioms."""
    pass


class PreconditionError(InstanceError):
    """Raised when a well-formed instance falls outside an algorithm's precondition (e.g. 2*ell > u)."""
    pass


class InfeasibleInstanceError(ClusteringError):
    """Raised when no clustering can satisfy the requested constraints."""
    pass


class SizeCapError(ClusteringError):
    """Raised when an exhaustive routine is asked to handle an instance above its configured cap."""
    pass


class MalformedSolutionError(ClusteringError):
    """Raised when a solution does not describe a clustering of the instance it is checked against."""
    pass


class InvalidInputError(ClusteringError):
    """Raised when a kernel receives inputs of the wrong shape."""
    pass


class ContractViolation(ClusteringError):
    """Raised when an internal contract is misused or a structural assertion fails."""
    pass


def ensure(condition: bool, message: str) -> None:
    """Raise ContractViolation with message unless condition holds."""
    if not condition:
        raise ContractViolation(message)


class UnknownNameError(ClusteringError):
    """Raised when a variant or underlying solver id is not registered."""
    pass
