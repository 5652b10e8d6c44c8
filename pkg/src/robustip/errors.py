"""Exception hierarchy shared by all modules.

The CLI maps these onto its exit-code contract, so solver and model code
must raise the most specific class that applies.
"""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(ToolkitError):
    """Vector lengths or matrix shapes do not line up."""


class ValidationError(ToolkitError):
    """Input data violates a structural invariant (bad bounds, bad model data)."""


class InfeasibleError(ToolkitError):
    """The model is provably infeasible (empty feasible set, inconsistent totals)."""


class ResourceLimitError(ToolkitError):
    """A resource cap was hit before the computation finished.

    The partial state is never returned: callers get this error or a
    complete, exact answer.
    """
