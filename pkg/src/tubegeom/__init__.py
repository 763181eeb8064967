"""Numerical differential geometry of parametric surfaces and tubes:
fundamental forms, Beltrami-Laplace operators for all three forms, and
least-squares testing of the constant-matrix Gauss map condition."""

from .beltrami import (
    ChristoffelSymbols,
    beltrami_first,
    christoffel,
    grad_first_form,
    laplacian_gauss,
    laplacian_scalar,
    laplacian_vector,
    verify_gauss_identity,
)
from .errors import (
    DegenerateParametrizationError,
    DomainError,
    InvalidRadiusError,
    InvalidSpecError,
    SingularBandError,
    SingularFormError,
    TubeGeomError,
    UnsupportedOrderError,
    VanishingCurvatureError,
    WrongCaseError,
)
from .frenet import (
    CircleCurve,
    CurveSpec,
    FourierCurve,
    FourierSeries1,
    FrenetData,
    HelixCurve,
    curve_from_json,
    curve_jet,
    frenet_frame,
)
from .geom import (
    FormMatrix,
    SurfaceJet,
    SurfacePoint,
    SurfaceSpec,
    curvatures,
    cylinder,
    ellipsoid,
    evaluate,
    fundamental_forms,
    gauss_map,
    plane,
    sphere,
    surface_jet,
)
from .finitetype import (
    FitReport,
    GridSpec,
    SampleSet,
    TubeTypeReport,
    collect_samples,
    fit_coordinate_matrix,
    theorem_check_tube,
)
from .jets import Jet2
from .specio import surface_from_json
from .tubes import (
    OperatorCoefficients,
    TubePoint,
    TubeSpec,
    anchor_a33_profile,
    anchor_ring_laplacian_components,
    phi_values_avoiding_band,
    tube_forms_closed,
    tube_gauss_curvature,
    tube_gauss_map,
    tube_laplacian_coeffs,
    tube_laplacian_gauss_closed,
    tube_laplacian_gauss_vector,
    tube_point,
    tube_surface,
)

__version__ = "0.1.0"
