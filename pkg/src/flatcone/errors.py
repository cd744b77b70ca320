"""Exception hierarchy.

Everything raised deliberately by the package derives from FlatConeError.
Errors that mean "the surface file is malformed" derive from SurfaceError,
which the command line maps to exit code 2.
"""


class FlatConeError(Exception):
    pass


class SurfaceError(FlatConeError, ValueError):
    """The polygons and gluings do not describe a valid flat cone surface."""


class ChartError(SurfaceError):
    pass


class EdgeLengthMismatch(SurfaceError):
    pass


class OrientationError(SurfaceError):
    pass


class NonOrientable(OrientationError):
    """A gluing identifies two edges with the same boundary orientation."""


class Disconnected(SurfaceError):
    pass


class NonClosed(SurfaceError):
    pass


class GaussBonnetViolation(SurfaceError):
    pass


class CurvatureError(SurfaceError):
    """A vertex class has cone angle below 2*pi (positive curvature)."""


class InexactAngle(FlatConeError):
    pass


class NumericalStall(FlatConeError, RuntimeError):
    pass


class Explosion(FlatConeError, RuntimeError):
    pass


class OpenLoop(FlatConeError, ValueError):
    pass


class NullHomotopic(FlatConeError):
    pass


class NonConvergent(FlatConeError, RuntimeError):
    pass


class WordInvalidOnB(FlatConeError, ValueError):
    pass
