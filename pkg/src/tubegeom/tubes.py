"""Tube surfaces around space curves and their closed-form geometry.

The tube of radius r around a unit-speed curve a(u) is
x(u, phi) = a + r cos(phi) h + r sin(phi) b in the curve's Frenet frame.
Everything the generic engine computes for tubes also has a printed
closed form here (fundamental forms, Gauss curvature, Gauss map, the
second-form Laplace operator and its action on the Gauss map), evaluated
independently so the two routes can be cross-checked.

Shorthand used throughout: delta = 1 - r kappa cos(phi) (regularity
factor, positive for admissible radii) and beta = kappa' cos(phi) +
kappa tau sin(phi) (zero exactly for tubes around plane circles).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidRadiusError, SingularBandError, WrongCaseError
from .frenet import CircleCurve, CurveSpec, frame_taylor, frenet_frame
from .geom import FormMatrix, SurfaceSpec
from .jets import Jet2

DEFAULT_EPS_BAND = 0.15


@dataclass(frozen=True)
class TubeSpec:
    """A tube: curve plus radius with 0 < r < min 1/|kappa|."""

    curve: CurveSpec
    radius: float

    def __post_init__(self):
        r = float(self.radius)
        _, kmax = self.curve.kappa_range()
        if not 0.0 < r or not r * kmax < 1.0:
            raise InvalidRadiusError(
                f"radius {r:g} violates 0 < r < {1.0 / kmax:.6g} (max curvature {kmax:g})"
            )

    @property
    def domain(self):
        return (self.curve.domain, (0.0, 2.0 * np.pi))


@dataclass(frozen=True)
class TubePoint:
    """Derived scalars at (u, phi); all arrays broadcast together."""

    u: np.ndarray
    phi: np.ndarray
    delta: np.ndarray
    beta: np.ndarray
    kappa: np.ndarray
    kappa_prime: np.ndarray
    tau: np.ndarray
    tau_prime: np.ndarray


@dataclass(frozen=True)
class OperatorCoefficients:
    """Coefficients of the second-form Laplacian as a differential operator
    c_uu d^2/du^2 + c_uphi d^2/dudphi + c_phiphi d^2/dphi^2
    + c_u d/du + c_phi d/dphi (the common 1/(kappa delta cos phi)
    prefactor is folded in)."""

    c_uu: np.ndarray
    c_uphi: np.ndarray
    c_phiphi: np.ndarray
    c_u: np.ndarray
    c_phi: np.ndarray

    def apply(self, f: Jet2):
        """Apply the operator to a scalar jet (order >= 2)."""
        return (
            self.c_uu * f.deriv(2, 0)
            + self.c_uphi * f.deriv(1, 1)
            + self.c_phiphi * f.deriv(0, 2)
            + self.c_u * f.deriv(1, 0)
            + self.c_phi * f.deriv(0, 1)
        )


def tube_point(spec: TubeSpec, u, phi) -> TubePoint:
    u = np.asarray(u, dtype=float)
    phi = np.asarray(phi, dtype=float)
    kap, tau = spec.curve.intrinsics_taylor(u, 1)
    kappa, kappa_p = kap[..., 0], kap[..., 1]
    tau0, tau_p = tau[..., 0], tau[..., 1]
    cp, sp = np.cos(phi), np.sin(phi)
    delta = 1.0 - spec.radius * kappa * cp
    beta = kappa_p * cp + kappa * tau0 * sp
    return TubePoint(
        u=u, phi=phi, delta=delta, beta=beta,
        kappa=kappa, kappa_prime=kappa_p, tau=tau0, tau_prime=tau_p,
    )


def tube_surface(spec: TubeSpec) -> SurfaceSpec:
    """The tube as a generic surface; position jets are transported through
    the Frenet equations with the curve's analytic intrinsics."""
    r = spec.radius
    curve = spec.curve

    def jet_fn(u, phi):
        fs = frame_taylor(curve, u, order=3)
        phj = Jet2.variable(phi, 1)
        cp, sp = phj.cos(), phj.sin()
        out = []
        for i in range(3):
            a_i = Jet2.from_series(fs.a[..., i, :], 0)
            h_i = Jet2.from_series(fs.h[..., i, :], 0)
            b_i = Jet2.from_series(fs.b[..., i, :], 0)
            out.append(a_i + (r * cp) * h_i + (r * sp) * b_i)
        return tuple(out)

    return SurfaceSpec(
        name=f"tube({curve.family}, r={r:g})",
        jet_fn=jet_fn,
        domain=spec.domain,
        meta={"kind": "tube", "curve": curve.to_json(), "radius": r},
    )


def tube_forms_closed(spec: TubeSpec, u, phi):
    """First and second fundamental forms from the printed closed forms."""
    tp = tube_point(spec, u, phi)
    r = spec.radius
    cp = np.cos(tp.phi)
    shape = np.broadcast_shapes(np.shape(tp.u), np.shape(tp.phi))
    first = FormMatrix(
        a11=tp.delta**2 + r**2 * tp.tau**2,
        a12=np.broadcast_to(r**2 * tp.tau, shape).copy(),
        a22=np.broadcast_to(np.asarray(r**2, dtype=float), shape).copy(),
    )
    second = FormMatrix(
        a11=-tp.kappa * tp.delta * cp + r * tp.tau**2,
        a12=np.broadcast_to(r * tp.tau, shape).copy(),
        a22=np.broadcast_to(np.asarray(r, dtype=float), shape).copy(),
    )
    return first, second


def tube_gauss_curvature(spec: TubeSpec, u, phi):
    """K = -kappa cos(phi) / (r delta); zero on the flat circles."""
    tp = tube_point(spec, u, phi)
    return -tp.kappa * np.cos(tp.phi) / (spec.radius * tp.delta)


def band_guard(phi, eps_band=DEFAULT_EPS_BAND):
    """Reject phi values where |cos phi| <= eps_band (the K ~ 0 band)."""
    c = np.abs(np.cos(phi))
    if np.any(c <= eps_band):
        raise SingularBandError(
            f"|cos phi| = {float(np.min(c)):.3e} inside excluded band "
            f"(eps_band = {eps_band:g})"
        )


def tube_laplacian_coeffs(spec: TubeSpec, u, phi, eps_band=DEFAULT_EPS_BAND):
    """Closed-form coefficients of the second-form Laplacian at (u, phi)."""
    band_guard(phi, eps_band)
    tp = tube_point(spec, u, phi)
    r = spec.radius
    cp, sp = np.cos(tp.phi), np.sin(tp.phi)
    kdc = tp.kappa * tp.delta * cp
    pref = 1.0 / kdc
    c_uu = pref + np.zeros(np.broadcast_shapes(np.shape(tp.u), np.shape(tp.phi)))
    c_uphi = -2.0 * tp.tau * pref
    c_phiphi = (tp.tau**2 - kdc / r) * pref
    c_u = (1.0 - 2.0 * tp.delta) * tp.beta / (2.0 * kdc) * pref
    c_phi = (
        -tp.tau_prime
        + tp.tau * tp.beta * (2.0 * tp.delta - 1.0) / (2.0 * kdc)
        + tp.kappa * (2.0 * tp.delta - 1.0) * sp / (2.0 * r)
    ) * pref
    return OperatorCoefficients(c_uu, c_uphi, c_phiphi, c_u, c_phi)


def anchor_ring_laplacian_coeffs(spec: TubeSpec, u, phi, eps_band=DEFAULT_EPS_BAND):
    """The specialized operator for tubes around plane circles, written
    directly from its printed form (no beta terms)."""
    _require_circle(spec)
    band_guard(phi, eps_band)
    tp = tube_point(spec, u, phi)
    r = spec.radius
    cp, sp = np.cos(tp.phi), np.sin(tp.phi)
    shape = np.broadcast_shapes(np.shape(tp.u), np.shape(tp.phi))
    zero = np.zeros(shape)
    return OperatorCoefficients(
        c_uu=1.0 / (tp.kappa * tp.delta * cp) + zero,
        c_uphi=zero,
        c_phiphi=-1.0 / r + zero,
        c_u=zero,
        c_phi=(2.0 * tp.delta - 1.0) * sp / (2.0 * r * tp.delta * cp) + zero,
    )


def tube_gauss_map(spec: TubeSpec, u, phi):
    """Gauss map -cos(phi) h - sin(phi) b, unit by construction."""
    fd = frenet_frame(spec.curve, u)
    phi = np.asarray(phi, dtype=float)
    cp, sp = np.cos(phi)[..., None], np.sin(phi)[..., None]
    return -cp * fd.h - sp * fd.b


def tube_laplacian_gauss_closed(spec: TubeSpec, u, phi, eps_band=DEFAULT_EPS_BAND):
    """Frenet components (c_t, c_h, c_b) of the second-form Laplacian of
    the Gauss map, from the printed closed form."""
    band_guard(phi, eps_band)
    tp = tube_point(spec, u, phi)
    r = spec.radius
    cp, sp = np.cos(tp.phi), np.sin(tp.phi)
    c_t = tp.beta / (2.0 * tp.kappa * tp.delta**2 * cp)
    c_h = sp**2 / (2.0 * r * tp.delta * cp) + cp / (r * tp.delta) - 2.0 * cp / r
    c_b = (1.0 - 4.0 * tp.delta) * sp / (2.0 * r * tp.delta)
    shape = np.broadcast_shapes(np.shape(tp.u), np.shape(tp.phi))
    return (
        c_t + np.zeros(shape),
        c_h + np.zeros(shape),
        c_b + np.zeros(shape),
    )


def tube_laplacian_gauss_vector(spec: TubeSpec, u, phi, eps_band=DEFAULT_EPS_BAND):
    """The closed-form Laplacian of the Gauss map assembled in ambient
    coordinates."""
    c_t, c_h, c_b = tube_laplacian_gauss_closed(spec, u, phi, eps_band)
    fd = frenet_frame(spec.curve, u)
    return c_t[..., None] * fd.t + c_h[..., None] * fd.h + c_b[..., None] * fd.b


def tube_laplacian_gauss_poly(spec: TubeSpec, u, phi):
    """The same Frenet components with the common denominator cleared:
    multiplying (c_t, c_h, c_b) by 2 r kappa delta^2 cos(phi) gives
    (r beta, kappa delta (1 + (1-4delta) cos^2), kappa delta (1-4delta)
    cos sin).  Returned for consistency scans; defined for every phi."""
    tp = tube_point(spec, u, phi)
    r = spec.radius
    cp, sp = np.cos(tp.phi), np.sin(tp.phi)
    kd = tp.kappa * tp.delta
    poly_t = r * tp.beta
    poly_h = kd * (1.0 + (1.0 - 4.0 * tp.delta) * cp**2)
    poly_b = kd * (1.0 - 4.0 * tp.delta) * cp * sp
    shape = np.broadcast_shapes(np.shape(tp.u), np.shape(tp.phi))
    return (
        poly_t + np.zeros(shape),
        poly_h + np.zeros(shape),
        poly_b + np.zeros(shape),
    )


def _require_circle(spec: TubeSpec):
    if not isinstance(spec.curve, CircleCurve):
        raise WrongCaseError(
            f"anchor-ring formula needs a circle curve, got {spec.curve.family}"
        )


def anchor_ring_laplacian_components(
    spec: TubeSpec, u, phi, eps_band=DEFAULT_EPS_BAND
):
    """Ambient components of the Gauss-map Laplacian for a tube around a
    plane circle, written from their printed componentwise form.

    The printed form orients the circle's normal outward, opposite to the
    Frenet normal of the counterclockwise unit-speed circle; the first two
    components therefore carry the opposite sign from the Frenet-assembled
    vector, while the third agrees.  Callers comparing against the engine
    should check both signs explicitly (see the test-suite scans).
    """
    _require_circle(spec)
    band_guard(phi, eps_band)
    tp = tube_point(spec, u, phi)
    r = spec.radius
    cp, sp = np.cos(tp.phi), np.sin(tp.phi)
    bracket = (
        1.0 / (tp.kappa * tp.delta)
        - cp / r
        + (2.0 * tp.delta - 1.0) * sp**2 / (2.0 * r * tp.delta * cp)
    )
    ang = spec.curve.kappa0 * np.asarray(u, dtype=float)  # polar angle of the circle point
    n1 = bracket * np.cos(ang)
    n2 = bracket * np.sin(ang)
    n3 = -sp * (4.0 * tp.delta - 1.0) / (2.0 * r * tp.delta)
    return np.stack(np.broadcast_arrays(n1, n2, n3), axis=-1)


def anchor_a33_profile(spec: TubeSpec, phi):
    """(4 delta - 1) / (2 r delta): the value the (3,3) entry of a constant
    coordinate matrix would have to take pointwise.  Its variation in phi
    is the numeric witness that no constant matrix works."""
    _require_circle(spec)
    tp = tube_point(spec, np.zeros_like(np.asarray(phi, dtype=float)), phi)
    return (4.0 * tp.delta - 1.0) / (2.0 * spec.radius * tp.delta)


# ---------------------------------------------------------------------------
# band-aware sampling


def phi_values_avoiding_band(n, phi_range=(0.0, 2.0 * np.pi), eps_band=DEFAULT_EPS_BAND):
    """n strictly-interior phi samples with |cos phi| > eps_band.

    The admissible set (the range minus closed bands around odd multiples
    of pi/2) is parametrized by arc length and sampled at cell centers,
    so the requested count is always honored and results are
    deterministic.
    """
    lo, hi = float(phi_range[0]), float(phi_range[1])
    if not hi > lo:
        raise ValueError("phi range must be increasing")
    w = float(np.arcsin(min(max(eps_band, 0.0), 1.0)))
    if w == 0.0:
        # no exclusion requested: plain uniform grid (which may well land
        # on the singular circles; downstream guards are the safety net)
        return lo + np.arange(n) * (hi - lo) / n
    k_lo = int(np.floor((lo - np.pi / 2) / np.pi)) - 1
    k_hi = int(np.ceil((hi - np.pi / 2) / np.pi)) + 1
    blocked = [
        (np.pi / 2 + k * np.pi - w, np.pi / 2 + k * np.pi + w)
        for k in range(k_lo, k_hi + 1)
    ]
    allowed = []
    cursor = lo
    for b0, b1 in sorted(blocked):
        if b1 <= cursor:
            continue
        if b0 > hi:
            break
        if b0 > cursor:
            allowed.append((cursor, min(b0, hi)))
        cursor = max(cursor, b1)
        if cursor >= hi:
            break
    if cursor < hi:
        allowed.append((cursor, hi))
    lengths = np.array([b - a for a, b in allowed])
    total = lengths.sum()
    if total <= 0:
        raise SingularBandError("excluded band covers the whole phi range")
    s = (np.arange(n) + 0.5) * total / n
    starts = np.concatenate([[0.0], np.cumsum(lengths)])
    idx = np.searchsorted(starts, s, side="right") - 1
    idx = np.clip(idx, 0, len(allowed) - 1)
    return np.array([allowed[i][0] for i in idx]) + (s - starts[idx])
