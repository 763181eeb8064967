"""Exception types shared across the package."""


class TubeGeomError(Exception):
    """Base class for all tubegeom errors."""


class InvalidSpecError(TubeGeomError):
    """Malformed or inconsistent curve/surface specification."""


class UnsupportedOrderError(TubeGeomError):
    """A derivative order beyond what the analytic supply provides."""


class VanishingCurvatureError(TubeGeomError):
    """Curvature below the threshold where a Frenet frame is meaningful."""


class DomainError(TubeGeomError):
    """Parameter value outside the declared surface domain."""


class DegenerateParametrizationError(TubeGeomError):
    """|r_1 x r_2| too small; no well-defined tangent plane."""


class SingularFormError(TubeGeomError):
    """Fundamental form with (near-)zero determinant used as a metric."""


class SingularBandError(SingularFormError):
    """Evaluation inside the excluded band around the flat circles of a tube."""


class InvalidRadiusError(TubeGeomError):
    """Tube radius violating 0 < r < min 1/|kappa|."""


class WrongCaseError(TubeGeomError):
    """An anchor-ring-only formula applied to a non-circular tube."""
