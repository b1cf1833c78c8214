"""Exception types shared across the package.

Every error raised by the library derives from :class:`ArcAggError` so callers
can catch one base class. The concrete subclasses carry no extra state beyond
their message; they exist so tests and the CLI can distinguish failure modes.
"""


class ArcAggError(Exception):
    """Base class for all arcagg errors."""


class GeometryError(ArcAggError, ValueError):
    """Invalid geometric input or construction."""


class DegenerateChord(GeometryError):
    """Arc construction from two coincident points (|uv| <= eps)."""


class ChordTooLong(GeometryError):
    """Arc construction with |uv| >= 2 * radius (no minor arc exists)."""


class CurveCrossesChordLine(GeometryError):
    """Efficiency queried for a curve that properly crosses line(u, v)."""


class OverlappingRegions(GeometryError):
    """Objective queried on regions that are not pairwise disjoint."""


class NonPositiveFactor(GeometryError):
    """Scaling factor must be strictly positive."""


class SelfIntersectingInput(GeometryError):
    """Input polygon is not simple under tolerance."""


class OverlappingInputs(GeometryError):
    """Input polygons are not pairwise interior-disjoint."""


class NumericalDegeneracy(ArcAggError):
    """Intersection clustering failed to stabilize under tolerance."""


class OpenBoundary(GeometryError):
    """Face measure requested for a boundary cycle that does not close."""


class ConstraintIntersection(ArcAggError):
    """Triangulation constraints intersect (impossible for valid input)."""


class TooManyCells(ArcAggError):
    """Brute-force subdivision oracle refused: > 22 free cells."""


class InfeasibleIntermediate(ArcAggError):
    """An approximation phase produced an infeasible solution (bug guard)."""


class NoStopEvent(ArcAggError):
    """Phase 2 shift found no stop event (bug guard; cannot happen)."""


class TooLarge(ArcAggError):
    """Combinatorial enumeration refused: instance above the size cap."""


class ParseError(ArcAggError):
    """Input file could not be parsed as polygon geometry."""
