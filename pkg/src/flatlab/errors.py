"""Exception hierarchy.

Every domain error carries a short machine-readable ``code`` (the class name)
and an optional ``report`` dict; the CLI prints both on one line.
"""

from __future__ import annotations


class FlatlabError(Exception):
    """Base class for all domain errors raised by flatlab."""

    def __init__(self, message: str = "", **report):
        super().__init__(message)
        self.report = dict(report)

    @property
    def code(self) -> str:
        return type(self).__name__

    def as_dict(self) -> dict:
        out = {"error": self.code, "message": str(self)}
        if self.report:
            out["report"] = self.report
        return out


# exact_scalar
class IncompatibleFields(FlatlabError):
    pass


class RationalParameter(FlatlabError):
    pass


# surface_core
class InvalidSurface(FlatlabError):
    pass


class NonParallelGluing(InvalidSurface):
    pass


class LengthMismatch(InvalidSurface):
    pass


class Disconnected(InvalidSurface):
    pass


class NonSimplePolygon(InvalidSurface):
    pass


class UnpairedEdge(InvalidSurface):
    pass


class SingularMatrix(FlatlabError):
    pass


class NonMultipleConeAngle(FlatlabError):
    pass


# homology_periods
class DegenerateTau(FlatlabError):
    pass


# plane_lattice
class DegeneratePlane(FlatlabError):
    pass


class NonSemisimple(FlatlabError):
    pass


class InconsistentInput(FlatlabError):
    pass


# veech
class NotPeriodicDirection(FlatlabError):
    pass


class IncommensurableModuli(FlatlabError):
    pass


class EmptyInput(FlatlabError):
    pass


# margulis_chain
class PreconditionNotVerified(FlatlabError):
    pass
