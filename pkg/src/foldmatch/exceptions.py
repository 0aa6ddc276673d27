class FoldmatchError(Exception):
    """Base exception for foldmatch errors."""

    exit_code = 1

    @property
    def code(self) -> str:
        return type(self).__name__


class GeometryError(FoldmatchError):
    """Invalid polygon, diagonal or triangulation input."""


class CrossingDiagonals(GeometryError):
    """Two diagonals of a triangulation cross."""


class NotMaximal(GeometryError):
    """A triangulation has the wrong number of diagonals."""


class NotThetaInvariant(GeometryError):
    """The indexing of a full triangulation is not symmetric under the half-turn."""


class DiameterNotAtIndexN(GeometryError):
    """The n-th diagonal of a full triangulation is not a diameter."""


class InvalidOperation(GeometryError):
    """The operation does not apply to this kind of polygon."""


class OrbitInTriangulation(GeometryError):
    """The orbit already belongs to the triangulation."""


class OddDiameterCoordinate(GeometryError):
    """A vector cannot be halved on its diameter coordinate."""


class NoCommonTriangle(GeometryError):
    """tau_{n-1} and the diameter do not bound a common triangle."""


class DiagonalInTriangulation(GeometryError):
    """The diagonal is one of the triangulation's own diagonals."""


class BoundarySegment(GeometryError):
    """The pair of vertices is a boundary segment, not a diagonal."""


class NotCrossing(GeometryError):
    """The two diagonals do not cross."""


class UnsupportedTriangulationForB(FoldmatchError):
    """The diameter and tau_{n-1} do not bound a triangle with a boundary side."""

    exit_code = 2


class ConventionError(FoldmatchError):
    """Internal consistency failure; signals a sign or orientation bug."""

    exit_code = 3


class NoCommonExteriorEdge(ConventionError):
    """The two hat graphs of a type C pair have no gluing edge."""


class CompanionOrbitNotFound(ConventionError):
    """A companion orbit required by the type C formula does not exist."""


class InexactDivision(ConventionError):
    """A mutation exchange relation did not divide exactly."""


class NotHomogeneous(ConventionError):
    """A cluster variable is not homogeneous for the principal grading."""


class ClosureBudgetExceeded(ConventionError):
    """Seed exploration visited more seeds than the configured budget."""


class InstanceError(FoldmatchError):
    """Instance input errors."""


class ParseError(InstanceError):
    """The instance text is not valid JSON."""


class ValidationError(InstanceError):
    """The instance JSON does not match the instance schema."""

    def __init__(self, message: str, *, errors: list | None = None):
        super().__init__(message)
        self.errors = errors or []
