"""Exception types shared across the package."""


class ToricError(Exception):
    """Base class for all errors raised by toricfam."""


class DimensionError(ToricError, ValueError):
    """Matrix or vector shapes do not fit together."""


class FanValidationError(ToricError, ValueError):
    """A fan or ray configuration violates its defining axioms."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NotCompleteError(ToricError, ValueError):
    """An operation that needs a complete fan received an incomplete one."""


class NotSimplicialError(ToricError, ValueError):
    """An operation that needs a simplicial fan received a non-simplicial one."""


class InconsistentSpecError(ToricError, ValueError):
    """Bundle data or multiplicities do not match the ray configuration."""


class InconsistentSystemError(ToricError, ValueError):
    """A linear system expected to be solvable has no solution."""


class InhomogeneousError(ToricError, ValueError):
    """A polynomial that must be homogeneous is not."""


class InfiniteFiberError(ToricError, ValueError):
    """A graded piece or polytope that should be finite is unbounded."""


class FalsificationError(ToricError, AssertionError):
    """A property that holds by theorem failed on concrete input.

    These are never expected; raising one means either the input broke an
    unchecked precondition or the implementation has a bug.
    """
