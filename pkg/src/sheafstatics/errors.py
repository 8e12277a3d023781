"""Exception types raised across the package."""


class StaticsError(Exception):
    """Base class for every error raised by sheafstatics."""


class SchemaError(StaticsError):
    """Input document does not conform to the diagram file schema."""


class ValidationError(StaticsError):
    """A cell complex or diagram violates its structural invariants."""


class NotClosedSurface(ValidationError):
    pass


class DegenerateEdge(ValidationError):
    pass


class DegenerateCell(ValidationError):
    pass


class NumericalGateError(StaticsError):
    """A residual or rank check failed beyond its tolerance."""


class NonFiniteInput(NumericalGateError):
    pass


class ImageNotInKernel(NumericalGateError):
    pass


class BoundarySquareNonzero(NumericalGateError):
    pass


class NotInjective(NumericalGateError):
    pass


class NotExact(NumericalGateError):
    pass


class NotACycle(NumericalGateError):
    pass


class PreimageResidualTooLarge(NumericalGateError):
    pass


class CommutativityError(NumericalGateError):
    pass


class Infeasible(NumericalGateError):
    pass


class GluingViolated(NumericalGateError):
    pass


class CollinearProbePoint(NumericalGateError):
    pass


class NonPositiveWeight(StaticsError, ValueError):
    pass


class UnstableStepSize(StaticsError, ValueError):
    pass
