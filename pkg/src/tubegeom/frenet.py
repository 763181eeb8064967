"""Space curves, Frenet frames, and exact derivative supply.

Three unit-speed curve families are provided:

* ``CircleCurve`` -- plane circle of constant curvature (torsion 0),
* ``HelixCurve``  -- circular helix (constant curvature and torsion),
* ``FourierCurve``-- curvature and torsion given as truncated Fourier
  series in the arclength parameter; the frame is reconstructed by
  integrating the Frenet system with a fixed-step RK4 scheme.

Every family supplies Taylor coefficients of curvature and torsion, so
frame and position derivatives of any order up to 4 follow from the
Frenet equations by exact series recursion -- no finite differencing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidSpecError,
    UnsupportedOrderError,
    VanishingCurvatureError,
)
from .jets import series_deriv_values, series_mul

KAPPA_MIN = 1e-9


@dataclass(frozen=True)
class FrenetData:
    """Frenet frame (t, h, b) with curvature and torsion at one or more
    curve parameters; vectors have shape (..., 3)."""

    t: np.ndarray
    h: np.ndarray
    b: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray


@dataclass(frozen=True)
class FrameSeries:
    """Taylor coefficients (f^(k)/k!) in u of the curve position and frame,
    plus intrinsics series; array shapes are (..., 3, n) and (..., n)."""

    a: np.ndarray
    t: np.ndarray
    h: np.ndarray
    b: np.ndarray
    kappa: np.ndarray
    tau: np.ndarray


class FourierSeries1:
    """Real Fourier series c0 + sum_k (ck cos(k u) + sk sin(k u)) with
    analytic derivatives of every order."""

    def __init__(self, const, cos_coeffs=(), sin_coeffs=()):
        self.const = float(const)
        self.cos_coeffs = np.asarray(cos_coeffs, dtype=float)
        self.sin_coeffs = np.asarray(sin_coeffs, dtype=float)

    def taylor(self, u, order):
        """Coefficients f^(k)(u)/k! for k = 0..order; u may be an array."""
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape + (order + 1,))
        out[..., 0] = self.const
        for idx, (ck, sk) in enumerate(
            zip_longest_zeros(self.cos_coeffs, self.sin_coeffs)
        ):
            k = idx + 1
            cku, sku = np.cos(k * u), np.sin(k * u)
            for d in range(order + 1):
                # d-th derivative of ck cos(ku) + sk sin(ku)
                kf = k**d
                phase = d % 4
                if phase == 0:
                    val = ck * cku + sk * sku
                elif phase == 1:
                    val = -ck * sku + sk * cku
                elif phase == 2:
                    val = -ck * cku - sk * sku
                else:
                    val = ck * sku - sk * cku
                out[..., d] += kf * val / math.factorial(d)
        return out

    def to_json(self):
        return {
            "const": self.const,
            "cos": self.cos_coeffs.tolist(),
            "sin": self.sin_coeffs.tolist(),
        }

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, (int, float)):
            return cls(obj)
        return cls(obj.get("const", 0.0), obj.get("cos", ()), obj.get("sin", ()))


def zip_longest_zeros(a, b):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0.0), (b[i] if i < len(b) else 0.0)


# ---------------------------------------------------------------------------
# curve families


class CurveSpec:
    """Base class: a unit-speed space curve on a closed interval with an
    exact Frenet frame and analytic curvature/torsion series."""

    family = "abstract"
    domain = (0.0, 2.0 * np.pi)

    def frenet_state(self, u):
        """(a, t, h, b) arrays of shape (..., 3) at parameter u."""
        raise NotImplementedError

    def intrinsics_taylor(self, u, order):
        """(kappa, tau) Taylor coefficient arrays of shape (..., order+1)."""
        raise NotImplementedError

    def kappa_range(self, samples=2048):
        """(min, max) of curvature over the domain, by dense sampling."""
        u = np.linspace(self.domain[0], self.domain[1], samples)
        kap = self.intrinsics_taylor(u, 0)[0][..., 0]
        return float(kap.min()), float(kap.max())

    # -- serialization ----

    def params_json(self):
        raise NotImplementedError

    def to_json(self):
        return {"family": self.family, "params": self.params_json()}


class CircleCurve(CurveSpec):
    """Plane circle of curvature kappa0, traversed at unit speed."""

    family = "circle"

    def __init__(self, kappa0=1.0):
        if kappa0 <= 0:
            raise InvalidSpecError("circle curvature must be positive")
        self.kappa0 = float(kappa0)
        self.radius = 1.0 / self.kappa0
        self.domain = (0.0, 2.0 * np.pi * self.radius)

    def frenet_state(self, u):
        u = np.asarray(u, dtype=float)
        w = u * self.kappa0
        cw, sw = np.cos(w), np.sin(w)
        zero = np.zeros_like(w)
        one = np.ones_like(w)
        a = np.stack([self.radius * cw, self.radius * sw, zero], axis=-1)
        t = np.stack([-sw, cw, zero], axis=-1)
        h = np.stack([-cw, -sw, zero], axis=-1)
        b = np.stack([zero, zero, one], axis=-1)
        return a, t, h, b

    def intrinsics_taylor(self, u, order):
        u = np.asarray(u, dtype=float)
        kap = np.zeros(u.shape + (order + 1,))
        kap[..., 0] = self.kappa0
        tau = np.zeros(u.shape + (order + 1,))
        return kap, tau

    def params_json(self):
        return {"kappa0": self.kappa0}


class HelixCurve(CurveSpec):
    """Circular helix (a cos(u/w), a sin(u/w), c u/w), w = sqrt(a^2+c^2);
    unit speed with kappa = a/w^2, tau = c/w^2."""

    family = "helix"

    def __init__(self, a=1.0, c=1.0, turns=2.0):
        self.a = float(a)
        self.c = float(c)
        self.w = math.hypot(self.a, self.c)
        if self.w == 0.0:
            raise InvalidSpecError("helix needs a nonzero radius or pitch")
        self.kappa = self.a / self.w**2
        self.tau = self.c / self.w**2
        self.domain = (0.0, 2.0 * np.pi * self.w * float(turns))

    def frenet_state(self, u):
        if self.kappa < KAPPA_MIN:
            raise VanishingCurvatureError(
                f"helix with a={self.a} degenerates to a straight line"
            )
        u = np.asarray(u, dtype=float)
        w = self.w
        s, c = np.sin(u / w), np.cos(u / w)
        zero = np.zeros_like(u)
        a_vec = np.stack([self.a * c, self.a * s, self.c * u / w], axis=-1)
        t = np.stack([-(self.a / w) * s, (self.a / w) * c, self.c / w + zero], axis=-1)
        h = np.stack([-c, -s, zero], axis=-1)
        b = np.stack([(self.c / w) * s, -(self.c / w) * c, self.a / w + zero], axis=-1)
        return a_vec, t, h, b

    def intrinsics_taylor(self, u, order):
        u = np.asarray(u, dtype=float)
        kap = np.zeros(u.shape + (order + 1,))
        tau = np.zeros(u.shape + (order + 1,))
        kap[..., 0] = self.kappa
        tau[..., 0] = self.tau
        return kap, tau

    def params_json(self):
        return {"a": self.a, "c": self.c, "turns": (self.domain[1] / (2 * np.pi * self.w))}


class FourierCurve(CurveSpec):
    """Curve defined by its curvature and torsion as Fourier series in u.

    The position and frame are reconstructed by integrating the Frenet
    system a' = t, t' = kappa h, h' = -kappa t + tau b, b' = -tau h with a
    fixed-step classical RK4 over the domain; states are cached on the
    integration grid and queries take a single sub-step from the nearest
    node below, so results are deterministic and accurate to ~1e-13.
    """

    family = "fourier"

    def __init__(self, kappa, tau, domain=(0.0, 2.0 * np.pi), step=1e-3):
        self.kappa_series = kappa if isinstance(kappa, FourierSeries1) else FourierSeries1.from_json(kappa)
        self.tau_series = tau if isinstance(tau, FourierSeries1) else FourierSeries1.from_json(tau)
        self.domain = (float(domain[0]), float(domain[1]))
        if not self.domain[1] > self.domain[0]:
            raise InvalidSpecError("domain must be an increasing interval")
        self._step = float(step)
        self._nodes = None
        self._grid_h = None
        kmin, _ = self.kappa_range()
        if kmin <= KAPPA_MIN:
            raise VanishingCurvatureError(
                f"curvature reaches {kmin:.3e}; Frenet frame undefined"
            )

    def kappa_range(self, samples=4096):
        u = np.linspace(self.domain[0], self.domain[1], samples)
        kap = self.kappa_series.taylor(u, 0)[..., 0]
        return float(kap.min()), float(kap.max())

    def intrinsics_taylor(self, u, order):
        return self.kappa_series.taylor(u, order), self.tau_series.taylor(u, order)

    # -- Frenet system integration ----

    def _rhs(self, u, y):
        # y[..., 0:3] = a, 3:6 = t, 6:9 = h, 9:12 = b
        kap = self.kappa_series.taylor(u, 0)[..., 0]
        tau = self.tau_series.taylor(u, 0)[..., 0]
        t, h, b = y[..., 3:6], y[..., 6:9], y[..., 9:12]
        out = np.empty_like(y)
        out[..., 0:3] = t
        out[..., 3:6] = kap[..., None] * h
        out[..., 6:9] = -kap[..., None] * t + tau[..., None] * b
        out[..., 9:12] = -tau[..., None] * h
        return out

    def _rk4_step(self, u, y, dt):
        dt_ = dt[..., None] if np.ndim(dt) else dt
        k1 = self._rhs(u, y)
        k2 = self._rhs(u + dt / 2, y + dt_ / 2 * k1)
        k3 = self._rhs(u + dt / 2, y + dt_ / 2 * k2)
        k4 = self._rhs(u + dt, y + dt_ * k3)
        return y + dt_ / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    def _ensure_nodes(self):
        if self._nodes is not None:
            return
        u0, u1 = self.domain
        n = max(2, int(math.ceil((u1 - u0) / self._step)))
        h = (u1 - u0) / n
        y = np.zeros(12)
        y[3:6] = (1.0, 0.0, 0.0)
        y[6:9] = (0.0, 1.0, 0.0)
        y[9:12] = (0.0, 0.0, 1.0)
        nodes = np.empty((n + 1, 12))
        nodes[0] = y
        u = u0
        for i in range(n):
            y = self._rk4_step(u, y, h)
            nodes[i + 1] = y
            u = u0 + (i + 1) * h
        self._nodes = nodes
        self._grid_h = h

    def frenet_state(self, u):
        self._ensure_nodes()
        u = np.asarray(u, dtype=float)
        u0 = self.domain[0]
        idx = np.clip(
            np.floor((u - u0) / self._grid_h).astype(int), 0, len(self._nodes) - 1
        )
        base_u = u0 + idx * self._grid_h
        y = self._rk4_step(base_u, self._nodes[idx], u - base_u)
        return y[..., 0:3], y[..., 3:6], y[..., 6:9], y[..., 9:12]

    def params_json(self):
        return {
            "kappa": self.kappa_series.to_json(),
            "tau": self.tau_series.to_json(),
            "domain": list(self.domain),
            "step": self._step,
        }


_FAMILIES = {"circle": CircleCurve, "helix": HelixCurve, "fourier": FourierCurve}


def curve_from_json(obj):
    """Build a CurveSpec from {"family": ..., "params": {...}}."""
    try:
        family = obj["family"]
        params = dict(obj.get("params", {}))
    except (TypeError, KeyError) as exc:
        raise InvalidSpecError(f"malformed curve spec: {obj!r}") from exc
    if family not in _FAMILIES:
        raise InvalidSpecError(f"unknown curve family {family!r}")
    try:
        if family == "fourier":
            return FourierCurve(
                params["kappa"],
                params["tau"],
                domain=tuple(params.get("domain", (0.0, 2.0 * np.pi))),
                step=params.get("step", 1e-3),
            )
        return _FAMILIES[family](**params)
    except (TypeError, KeyError) as exc:
        raise InvalidSpecError(f"bad parameters for family {family!r}: {params}") from exc


# ---------------------------------------------------------------------------
# derivative supply


def frame_taylor(curve: CurveSpec, u, order=4) -> FrameSeries:
    """Taylor coefficients of (a, t, h, b) in u, to the given order.

    The recursion integrates the Frenet equations formally:
    (k+1) t_{k+1} = (kappa h)_k and so on, with the exact intrinsics
    series supplied by the curve family.
    """
    u = np.asarray(u, dtype=float)
    kap, tau = curve.intrinsics_taylor(u, max(order - 1, 0))
    a0, t0, h0, b0 = curve.frenet_state(u)
    shape = u.shape + (3, order + 1)
    a = np.zeros(shape)
    t = np.zeros(shape)
    h = np.zeros(shape)
    b = np.zeros(shape)
    a[..., 0], t[..., 0], h[..., 0], b[..., 0] = a0, t0, h0, b0
    kapv = kap[..., None, :]
    tauv = tau[..., None, :]
    for k in range(order):
        a[..., k + 1] = t[..., k] / (k + 1)
        t[..., k + 1] = series_mul(kapv, h, k + 1)[..., k] / (k + 1)
        h[..., k + 1] = (
            -series_mul(kapv, t, k + 1)[..., k] + series_mul(tauv, b, k + 1)[..., k]
        ) / (k + 1)
        b[..., k + 1] = -series_mul(tauv, h, k + 1)[..., k] / (k + 1)
    return FrameSeries(a=a, t=t, h=h, b=b, kappa=kap, tau=tau)


def curve_jet(curve: CurveSpec, u, order):
    """Position derivatives [a(u), a'(u), ..., a^(order)(u)], each (..., 3).

    Analytic accuracy: the series recursion uses exact intrinsics, never
    finite differences.
    """
    if not 0 <= order <= 4:
        raise UnsupportedOrderError(f"derivative order {order} not supplied (max 4)")
    fs = frame_taylor(curve, u, order=max(order, 1))
    derivs = series_deriv_values(fs.a)
    return [derivs[..., k] for k in range(order + 1)]


def frenet_frame(curve: CurveSpec, u) -> FrenetData:
    """Orthonormal right-handed Frenet frame with curvature and torsion.

    Raises VanishingCurvatureError where kappa < KAPPA_MIN.
    """
    kap, tau = curve.intrinsics_taylor(u, 0)
    kap = kap[..., 0]
    tau = tau[..., 0]
    if np.any(kap < KAPPA_MIN):
        raise VanishingCurvatureError(
            f"curvature {float(np.min(kap)):.3e} below {KAPPA_MIN:g}"
        )
    _, t, h, b = curve.frenet_state(u)
    return FrenetData(t=t, h=h, b=b, kappa=kap, tau=tau)
