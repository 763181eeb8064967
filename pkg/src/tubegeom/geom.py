"""Generic parametric surfaces: jets, fundamental forms, curvatures, Gauss map.

A surface is a map (v1, v2) -> R^3 whose evaluator produces position jets
(all partials to total order 3) through jet arithmetic.  The unit normal
is differentiated as a jet too, so the third fundamental form and the
second derivatives of the Gauss map come out of the same pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DegenerateParametrizationError, DomainError, SingularFormError
from .jets import Jet2, jet_cross, jet_dot

REGULARITY_MIN = 1e-10
DET_MIN = 1e-12

FORM_FIRST = "I"
FORM_SECOND = "II"
FORM_THIRD = "III"
FORMS = (FORM_FIRST, FORM_SECOND, FORM_THIRD)


@dataclass(frozen=True)
class SurfaceSpec:
    """A parametric surface: jet evaluator + rectangular domain + metadata."""

    name: str
    jet_fn: Callable
    domain: tuple  # ((v1min, v1max), (v2min, v2max))
    meta: dict = field(default_factory=dict)

    def contains(self, v1, v2):
        (a1, b1), (a2, b2) = self.domain
        return np.all((v1 >= a1) & (v1 <= b1)) and np.all((v2 >= a2) & (v2 <= b2))


@dataclass(frozen=True)
class FormMatrix:
    """Symmetric 2x2 bilinear form; entries may be scalars or batch arrays."""

    a11: np.ndarray
    a12: np.ndarray
    a22: np.ndarray

    @property
    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a12

    def inverse_components(self, det_floor=DET_MIN):
        """(a^11, a^12, a^22); raises SingularFormError when |det| < floor."""
        d = self.det
        if np.any(np.abs(d) < det_floor):
            raise SingularFormError(
                f"form determinant {float(np.min(np.abs(d))):.3e} below {det_floor:g}"
            )
        return self.a22 / d, -self.a12 / d, self.a11 / d

    def entries(self):
        return self.a11, self.a12, self.a22


class SurfaceJet:
    """Position jets of a surface point (total order 3) plus the derived
    normal jets (order 2).  Exposes derivatives by multi-index."""

    def __init__(self, jets):
        self.jets = tuple(jets)  # three order-3 Jet2
        self._normal = None

    def deriv(self, i, j):
        """Partial derivative of the position, shape (..., 3)."""
        return np.stack([c.deriv(i, j) for c in self.jets], axis=-1)

    @property
    def normal_jets(self):
        """Unit normal as three order-2 jets, oriented along r_1 x r_2."""
        if self._normal is None:
            r1 = [c.d_dv(0) for c in self.jets]
            r2 = [c.d_dv(1) for c in self.jets]
            n = jet_cross(r1, r2)
            norm2 = jet_dot(n, n)
            if np.any(norm2.value < REGULARITY_MIN**2):
                raise DegenerateParametrizationError(
                    f"|r_1 x r_2| = {float(np.min(np.sqrt(norm2.value))):.3e} "
                    f"below {REGULARITY_MIN:g}"
                )
            inv_norm = norm2.sqrt().reciprocal()
            self._normal = tuple(c * inv_norm for c in n)
        return self._normal

    def normal_deriv(self, i, j):
        """Partial derivative of the unit normal, shape (..., 3)."""
        return np.stack([c.deriv(i, j) for c in self.normal_jets], axis=-1)

    def batch_shape(self):
        return self.jets[0].value.shape


@dataclass(frozen=True)
class SurfacePoint:
    """Evaluated surface data at a parameter point (or batch of points)."""

    position: np.ndarray
    normal: np.ndarray
    K: np.ndarray
    H: np.ndarray
    I: FormMatrix
    II: FormMatrix
    III: FormMatrix


def surface_jet(surface: SurfaceSpec, v1, v2) -> SurfaceJet:
    """Evaluate the surface's position jets; raises DomainError outside."""
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    if not surface.contains(v1, v2):
        raise DomainError(
            f"parameters outside domain {surface.domain} of {surface.name}"
        )
    return SurfaceJet(surface.jet_fn(v1, v2))


def fundamental_forms(jet: SurfaceJet):
    """First, second, and third fundamental forms at the jet's point."""
    r1, r2 = jet.deriv(1, 0), jet.deriv(0, 1)
    g = FormMatrix(
        a11=_dot(r1, r1), a12=_dot(r1, r2), a22=_dot(r2, r2)
    )
    n = jet.normal_deriv(0, 0)
    b = FormMatrix(
        a11=_dot(jet.deriv(2, 0), n),
        a12=_dot(jet.deriv(1, 1), n),
        a22=_dot(jet.deriv(0, 2), n),
    )
    n1, n2 = jet.normal_deriv(1, 0), jet.normal_deriv(0, 1)
    e = FormMatrix(a11=_dot(n1, n1), a12=_dot(n1, n2), a22=_dot(n2, n2))
    return g, b, e


def curvatures(jet: SurfaceJet):
    """Gauss and mean curvature (K, H); signs follow the r_1 x r_2 normal."""
    g, b, _ = fundamental_forms(jet)
    detg = g.det
    K = b.det / detg
    H = (g.a11 * b.a22 - 2.0 * g.a12 * b.a12 + g.a22 * b.a11) / (2.0 * detg)
    return K, H


def gauss_map(jet: SurfaceJet):
    """Unit normal and its first/second partials as a dict keyed by
    multi-index (i, j) with i + j <= 2."""
    return {
        (i, j): jet.normal_deriv(i, j)
        for i in range(3)
        for j in range(3 - i)
    }


def evaluate(surface: SurfaceSpec, v1, v2) -> SurfacePoint:
    """Full pointwise evaluation used by exports and reports."""
    jet = surface_jet(surface, v1, v2)
    g, b, e = fundamental_forms(jet)
    K, H = curvatures(jet)
    return SurfacePoint(
        position=jet.deriv(0, 0),
        normal=jet.normal_deriv(0, 0),
        K=K,
        H=H,
        I=g,
        II=b,
        III=e,
    )


def form_entry_jets(jet: SurfaceJet, form: str):
    """The chosen form's entries (a11, a12, a22) as order-1 jets, enough
    for Christoffel symbols."""
    if form == FORM_FIRST:
        r1 = [c.d_dv(0) for c in jet.jets]
        r2 = [c.d_dv(1) for c in jet.jets]
        return jet_dot(r1, r1), jet_dot(r1, r2), jet_dot(r2, r2)
    if form == FORM_SECOND:
        n = jet.normal_jets
        r11 = [c.d_dv(0).d_dv(0) for c in jet.jets]
        r12 = [c.d_dv(0).d_dv(1) for c in jet.jets]
        r22 = [c.d_dv(1).d_dv(1) for c in jet.jets]
        return jet_dot(r11, n), jet_dot(r12, n), jet_dot(r22, n)
    if form == FORM_THIRD:
        n1 = [c.d_dv(0) for c in jet.normal_jets]
        n2 = [c.d_dv(1) for c in jet.normal_jets]
        return jet_dot(n1, n1), jet_dot(n1, n2), jet_dot(n2, n2)
    raise ValueError(f"unknown form selector {form!r}; expected one of {FORMS}")


def form_matrix(jet: SurfaceJet, form: str) -> FormMatrix:
    j11, j12, j22 = form_entry_jets(jet, form)
    return FormMatrix(a11=j11.value, a12=j12.value, a22=j22.value)


def _dot(u, v):
    return np.sum(u * v, axis=-1)


# ---------------------------------------------------------------------------
# built-in surfaces (controls and identity-check fixtures)


def plane():
    def jet_fn(v1, v2):
        x = Jet2.variable(v1, 0)
        y = Jet2.variable(v2, 1)
        z = Jet2.constant(np.zeros(np.broadcast_shapes(np.shape(v1), np.shape(v2))))
        return x, y, z

    return SurfaceSpec(
        name="plane",
        jet_fn=jet_fn,
        domain=((-10.0, 10.0), (-10.0, 10.0)),
        meta={"kind": "plane"},
    )


def sphere(radius=1.0):
    """Round sphere in colatitude/longitude coordinates (poles excluded)."""
    radius = float(radius)

    def jet_fn(v1, v2):
        theta = Jet2.variable(v1, 0)
        phi = Jet2.variable(v2, 1)
        st, ct = theta.sin(), theta.cos()
        cp, sp = phi.cos(), phi.sin()
        return (radius * st * cp, radius * st * sp, radius * ct)

    return SurfaceSpec(
        name=f"sphere(r={radius:g})",
        jet_fn=jet_fn,
        domain=((0.05, np.pi - 0.05), (0.0, 2.0 * np.pi)),
        meta={"kind": "sphere", "radius": radius},
    )


def ellipsoid(ax=1.0, ay=1.3, az=0.7):
    ax, ay, az = float(ax), float(ay), float(az)

    def jet_fn(v1, v2):
        theta = Jet2.variable(v1, 0)
        phi = Jet2.variable(v2, 1)
        st, ct = theta.sin(), theta.cos()
        cp, sp = phi.cos(), phi.sin()
        return (ax * st * cp, ay * st * sp, az * ct)

    return SurfaceSpec(
        name=f"ellipsoid({ax:g},{ay:g},{az:g})",
        jet_fn=jet_fn,
        domain=((0.05, np.pi - 0.05), (0.0, 2.0 * np.pi)),
        meta={"kind": "ellipsoid", "semiaxes": [ax, ay, az]},
    )


def cylinder(radius=1.0, height=(-2.0, 2.0)):
    """Circular cylinder around the z axis; v1 = height, v2 = angle."""
    radius = float(radius)

    def jet_fn(v1, v2):
        z = Jet2.variable(v1, 0)
        ang = Jet2.variable(v2, 1)
        return (radius * ang.cos(), radius * ang.sin(), z)

    return SurfaceSpec(
        name=f"cylinder(r={radius:g})",
        jet_fn=jet_fn,
        domain=((float(height[0]), float(height[1])), (0.0, 2.0 * np.pi)),
        meta={"kind": "cylinder", "radius": radius},
    )
