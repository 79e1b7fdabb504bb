"""Exception hierarchy shared by every module in the package."""


class CGCError(Exception):
    """Base class for all package errors."""


class DataError(CGCError, ValueError):
    """Input data cannot be analysed as given."""


class NonFiniteValue(DataError):
    def __init__(self, variable, timestep, value):
        self.variable = variable
        self.timestep = timestep
        self.value = value
        super().__init__(
            f"non-finite value {value!r} at variable {variable!r}, timestep {timestep}"
        )


class DuplicateName(DataError):
    pass


class EmptyData(DataError):
    pass


class InsufficientSamples(DataError):
    pass


class InvalidLag(CGCError, ValueError):
    pass


class RankDeficient(DataError):
    def __init__(self, columns, message=None):
        self.columns = list(columns)
        super().__init__(message or f"collinear regressor columns: {self.columns}")


class InvalidDof(CGCError, ValueError):
    pass


class DegenerateModel(DataError):
    pass


class NonConvergence(CGCError, ArithmeticError):
    pass


class SelfEdge(CGCError, ValueError):
    pass


class ConditioningOverlap(CGCError, ValueError):
    pass


class ShapeMismatch(CGCError, ValueError):
    pass


class InvalidDensity(CGCError, ValueError):
    pass


class DivergenceDetected(CGCError, ArithmeticError):
    pass


class AllHidden(CGCError, ValueError):
    pass


class EdgeTestError(CGCError):
    """Wraps a failure raised while testing one directed edge."""

    def __init__(self, kind, source, target, cause):
        self.kind = kind
        self.source = source
        self.target = target
        self.cause = cause
        super().__init__(f"{kind} test {source}->{target} failed: {cause}")
