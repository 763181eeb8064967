"""Least-squares test of the constant-coordinate-matrix condition on the
Gauss map: find the 3x3 matrix A minimizing |lap_J(N) - A N| over a
sample set and judge whether the relation can hold exactly.

The fit decouples into one linear least-squares problem per row of A and
is solved through an SVD-based orthogonal factorization; the smallest
singular value of the stacked normals is always reported so degenerate
sampling (normals not spanning 3-space) is visible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .beltrami import laplacian_gauss
from .errors import InvalidSpecError, SingularFormError, TubeGeomError
from .geom import FORM_SECOND, SurfaceSpec, surface_jet
from .tubes import (
    DEFAULT_EPS_BAND,
    TubeSpec,
    anchor_a33_profile,
    phi_values_avoiding_band,
    tube_point,
    tube_surface,
)

TAU_FINITE = 1e-6
TAU_REJECT = 1e-2
BETA_ZERO_TOL = 1e-10
RANK_RTOL = 1e-8


@dataclass(frozen=True)
class GridSpec:
    """Deterministic evaluation grid over a surface's parameter rectangle."""

    n1: int = 32
    n2: int = 32
    v1_range: Optional[tuple] = None  # default: the surface domain
    v2_range: Optional[tuple] = None
    eps_band: float = DEFAULT_EPS_BAND

    def __post_init__(self):
        if self.n1 < 2 or self.n2 < 2:
            raise InvalidSpecError("grid needs at least 2 points per axis")
        if not 0.0 <= self.eps_band < 1.0:
            raise InvalidSpecError("eps_band must lie in [0, 1)")

    def values(self, surface: SurfaceSpec, band_aware: bool):
        (d1, d2) = surface.domain
        lo1, hi1 = self.v1_range or d1
        lo2, hi2 = self.v2_range or d2
        v1 = lo1 + np.arange(self.n1) * (hi1 - lo1) / self.n1
        if band_aware:
            v2 = phi_values_avoiding_band(self.n2, (lo2, hi2), self.eps_band)
        else:
            v2 = lo2 + np.arange(self.n2) * (hi2 - lo2) / self.n2
        return v1, v2

    def to_json(self):
        return {
            "n1": self.n1,
            "n2": self.n2,
            "v1_range": list(self.v1_range) if self.v1_range else None,
            "v2_range": list(self.v2_range) if self.v2_range else None,
            "eps_band": self.eps_band,
        }


@dataclass(frozen=True)
class SampleSet:
    """Gauss-map samples: parameters, unit normals N, and lap_J(N)."""

    params: np.ndarray  # (n, 2)
    N: np.ndarray  # (n, 3)
    LN: np.ndarray  # (n, 3)
    surface: str
    form: str
    grid: dict = field(default_factory=dict)

    def __post_init__(self):
        norms = np.linalg.norm(self.N, axis=-1)
        if np.any(np.abs(norms - 1.0) > 1e-10):
            raise TubeGeomError("sample normals are not unit vectors")
        uniq = np.unique(self.params, axis=0)
        if len(uniq) != len(self.params):
            raise TubeGeomError("duplicate sample parameters")

    def __len__(self):
        return len(self.params)


def collect_samples(surface: SurfaceSpec, form: str, grid: GridSpec) -> SampleSet:
    """Evaluate lap_form(N) on the grid; aborts on the first singular or
    non-finite evaluation, naming the offending point."""
    band_aware = surface.meta.get("kind") == "tube" and form != "I"
    v1, v2 = grid.values(surface, band_aware)
    V1, V2 = [a.ravel() for a in np.meshgrid(v1, v2, indexing="ij")]
    jet = surface_jet(surface, V1, V2)
    N = jet.normal_deriv(0, 0)
    try:
        LN = laplacian_gauss(jet, form)
    except SingularFormError as exc:
        bad = _first_singular_point(surface, form, V1, V2)
        raise SingularFormError(f"{exc} at (v1, v2) = {bad}") from exc
    if not (np.all(np.isfinite(N)) and np.all(np.isfinite(LN))):
        bad_idx = np.argwhere(~np.isfinite(LN).all(axis=-1) | ~np.isfinite(N).all(axis=-1))
        p = (V1[bad_idx[0, 0]], V2[bad_idx[0, 0]])
        raise TubeGeomError(f"non-finite evaluation at (v1, v2) = {p}")
    return SampleSet(
        params=np.stack([V1, V2], axis=-1),
        N=N,
        LN=LN,
        surface=surface.name,
        form=form,
        grid=grid.to_json(),
    )


def _first_singular_point(surface, form, V1, V2):
    from .beltrami import _gauss_curvature_guard  # local to avoid cycle noise

    for p1, p2 in zip(V1, V2):
        try:
            _gauss_curvature_guard(surface_jet(surface, p1, p2), form)
        except SingularFormError:
            return (float(p1), float(p2))
    return None


@dataclass(frozen=True)
class FitReport:
    """Best constant matrix A for lap_J(N) = A N over a sample set."""

    A: np.ndarray
    per_sample_residuals: np.ndarray
    normalized_residual: float
    verdict: Optional[str]
    degenerate: bool
    min_singular_value: float
    max_singular_value: float
    n_samples: int
    surface: str
    form: str

    def to_json(self):
        out = {
            "A": self.A.tolist(),
            "normalized_residual": self.normalized_residual,
            "verdict": self.verdict,
            "degenerate": self.degenerate,
            "min_singular_value": self.min_singular_value,
            "max_singular_value": self.max_singular_value,
            "n_samples": self.n_samples,
            "surface": self.surface,
            "form": self.form,
        }
        return out


def fit_coordinate_matrix(samples: SampleSet) -> FitReport:
    """Solve the three row-wise linear least-squares problems min |M a_i - y_i|
    with M the stacked normals, via SVD.

    With normals spanning 3-space the minimizer is unique; otherwise the
    report is flagged degenerate (minimum-norm solution, no verdict).
    """
    if len(samples) < 3:
        raise TubeGeomError("need at least 3 samples to fit a 3x3 matrix")
    M = samples.N
    Y = samples.LN
    X, _, rank, sv = np.linalg.lstsq(M, Y, rcond=None)
    A = X.T
    R = Y - M @ X
    per_sample = np.linalg.norm(R, axis=-1)
    rms_ln = float(np.sqrt(np.mean(np.sum(Y * Y, axis=-1))))
    rms_res = float(np.sqrt(np.mean(per_sample**2)))
    normalized = rms_res / rms_ln if rms_ln > 0 else 0.0
    degenerate = bool(rank < 3 or sv[-1] < RANK_RTOL * sv[0])
    if degenerate:
        verdict = None
    elif normalized < TAU_FINITE:
        verdict = "finite-type"
    elif normalized >= TAU_REJECT:
        verdict = "infinite-type"
    else:
        verdict = "inconclusive"
    return FitReport(
        A=A,
        per_sample_residuals=per_sample,
        normalized_residual=normalized,
        verdict=verdict,
        degenerate=degenerate,
        min_singular_value=float(sv[-1]),
        max_singular_value=float(sv[0]),
        n_samples=len(samples),
        surface=samples.surface,
        form=samples.form,
    )


@dataclass(frozen=True)
class TubeTypeReport:
    """Evidence bundle for the tube classification."""

    case: str  # "I" (plane circle) or "II" (beta not identically zero)
    beta_max: float
    fit: FitReport
    verdict: Optional[str]
    a33_spread: Optional[float] = None
    a33_endpoints: Optional[tuple] = None

    def to_json(self):
        out = {
            "case": self.case,
            "beta_max": self.beta_max,
            "verdict": self.verdict,
            "fit": self.fit.to_json(),
        }
        if self.a33_spread is not None:
            out["a33_spread"] = self.a33_spread
            out["a33_endpoints"] = list(self.a33_endpoints)
        return out


def theorem_check_tube(spec: TubeSpec, grid: GridSpec) -> TubeTypeReport:
    """Classify the tube's curve (beta identically zero or not), gather the
    per-case evidence, and run the coordinate-matrix fit with the
    second-form Laplacian."""
    surface = tube_surface(spec)
    v1, v2 = grid.values(surface, band_aware=True)
    U, PHI = np.meshgrid(v1, v2, indexing="ij")
    beta_max = float(np.max(np.abs(tube_point(spec, U, PHI).beta)))
    case = "I" if beta_max < BETA_ZERO_TOL else "II"

    samples = collect_samples(surface, FORM_SECOND, grid)
    fit = fit_coordinate_matrix(samples)
    verdict = fit.verdict
    if not fit.degenerate and fit.normalized_residual >= TAU_REJECT:
        verdict = "infinite-type"

    a33_spread = None
    a33_endpoints = None
    if case == "I":
        phis = np.linspace(0.0, np.pi / 2.0, 181)
        profile = anchor_a33_profile(spec, phis)
        a33_spread = float(profile.max() - profile.min())
        a33_endpoints = (float(profile[0]), float(profile[-1]))

    return TubeTypeReport(
        case=case,
        beta_max=beta_max,
        fit=fit,
        verdict=verdict,
        a33_spread=a33_spread,
        a33_endpoints=a33_endpoints,
    )
