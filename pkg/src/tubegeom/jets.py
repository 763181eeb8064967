"""Truncated Taylor (jet) arithmetic.

Two flavours live here:

* ``Jet2`` -- bivariate jets up to total degree 3, the derivative engine
  behind all surface evaluations.  Coefficients are stored as numpy
  arrays of shape ``(..., 4, 4)`` so whole grids of points are pushed
  through the arithmetic at once.
* univariate Taylor series helpers (plain ``(..., K)`` arrays of
  coefficients ``f^(k)(u0)/k!``) used to transport curve frames.
"""

from __future__ import annotations

import math

import numpy as np

MAX_ORDER = 3
_SIZE = MAX_ORDER + 1


def _as_batch(value):
    return np.asarray(value, dtype=float)


class Jet2:
    """Taylor expansion of a scalar in two variables, truncated at total
    degree ``order``.

    ``coeff[..., i, j]`` is the coefficient of ``dv1^i dv2^j``, i.e. the
    partial derivative of order (i, j) divided by ``i! j!``.  Leading axes
    are broadcast batch dimensions.  Entries with ``i + j > order`` carry
    no information and reads beyond ``order`` are rejected.
    """

    __slots__ = ("coeff", "order")

    def __init__(self, coeff, order=MAX_ORDER):
        self.coeff = np.asarray(coeff, dtype=float)
        if self.coeff.shape[-2:] != (_SIZE, _SIZE):
            raise ValueError("jet coefficient array must end in (4, 4)")
        self.order = int(order)

    # ----- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value, order=MAX_ORDER):
        value = _as_batch(value)
        coeff = np.zeros(value.shape + (_SIZE, _SIZE))
        coeff[..., 0, 0] = value
        return cls(coeff, order)

    @classmethod
    def variable(cls, value, index, order=MAX_ORDER):
        """Jet of the coordinate v1 (index 0) or v2 (index 1) at ``value``."""
        if index not in (0, 1):
            raise ValueError("variable index must be 0 or 1")
        value = _as_batch(value)
        coeff = np.zeros(value.shape + (_SIZE, _SIZE))
        coeff[..., 0, 0] = value
        if index == 0:
            coeff[..., 1, 0] = 1.0
        else:
            coeff[..., 0, 1] = 1.0
        return cls(coeff, order)

    @classmethod
    def from_series(cls, series, index, order=MAX_ORDER):
        """Lift a univariate Taylor series (coefficients along v1 or v2)
        into a bivariate jet; the other variable does not appear."""
        series = _as_batch(series)
        n = min(series.shape[-1], order + 1)
        coeff = np.zeros(series.shape[:-1] + (_SIZE, _SIZE))
        for k in range(n):
            if index == 0:
                coeff[..., k, 0] = series[..., k]
            else:
                coeff[..., 0, k] = series[..., k]
        return cls(coeff, order)

    # ----- reads ---------------------------------------------------------

    @property
    def value(self):
        return self.coeff[..., 0, 0]

    def deriv(self, i, j):
        """Partial derivative value of order (i, j)."""
        if i + j > self.order:
            raise UnsupportedJetOrder(
                f"derivative ({i},{j}) beyond jet order {self.order}"
            )
        return self.coeff[..., i, j] * (math.factorial(i) * math.factorial(j))

    def d_dv(self, index):
        """Formal partial derivative; the result is one order lower."""
        coeff = np.zeros_like(self.coeff)
        if index == 0:
            for i in range(_SIZE - 1):
                coeff[..., i, :] = self.coeff[..., i + 1, :] * (i + 1)
        else:
            for j in range(_SIZE - 1):
                coeff[..., :, j] = self.coeff[..., :, j + 1] * (j + 1)
        return Jet2(coeff, self.order - 1)

    # ----- arithmetic ----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.coeff + other.coeff, min(self.order, other.order))
        coeff = np.broadcast_to(
            self.coeff, np.broadcast_shapes(self.coeff.shape, np.shape(other) + (_SIZE, _SIZE))
        ).copy()
        coeff[..., 0, 0] += other
        return Jet2(coeff, self.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.coeff, self.order)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Jet2) else -np.asarray(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            other = _as_batch(other)
            return Jet2(self.coeff * other[..., None, None], self.order)
        order = min(self.order, other.order)
        a, b = self.coeff, other.coeff
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
        for i in range(_SIZE):
            for j in range(_SIZE - i):
                acc = 0.0
                for p in range(i + 1):
                    for q in range(j + 1):
                        acc = acc + a[..., p, q] * b[..., i - p, j - q]
                out[..., i, j] = acc
        return Jet2(out, order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        return self * (1.0 / _as_batch(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("jet powers must be non-negative integers")
        out = Jet2.constant(np.ones(self.coeff.shape[:-2]), self.order)
        for _ in range(n):
            out = out * self
        return out

    # ----- univariate composition ----------------------------------------

    def _compose(self, d0, d1, d2, d3):
        """Evaluate F(self) where d0..d3 are F and its derivatives at the
        jet's constant term (Horner on the shifted jet)."""
        dg = Jet2(self.coeff.copy(), self.order)
        dg.coeff[..., 0, 0] = 0.0
        out = dg * (d3 / 6.0) + (d2 / 2.0)
        out = out * dg + d1
        out = out * dg + d0
        return out

    def reciprocal(self):
        x = self.coeff[..., 0, 0]
        return self._compose(1.0 / x, -1.0 / x**2, 2.0 / x**3, -6.0 / x**4)

    def sqrt(self):
        x = self.coeff[..., 0, 0]
        s = np.sqrt(x)
        return self._compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x))

    def sin(self):
        x = self.coeff[..., 0, 0]
        s, c = np.sin(x), np.cos(x)
        return self._compose(s, c, -s, -c)

    def cos(self):
        x = self.coeff[..., 0, 0]
        s, c = np.sin(x), np.cos(x)
        return self._compose(c, -s, -c, s)


class UnsupportedJetOrder(ValueError):
    """Read past the truncation order of a jet."""


# ----- 3-vectors of jets --------------------------------------------------


def jet_dot(u, v):
    """Dot product of two length-3 sequences of jets."""
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def jet_cross(u, v):
    """Cross product of two length-3 sequences of jets."""
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


# ----- univariate Taylor series -------------------------------------------


def series_mul(a, b, n=None):
    """Truncated product of Taylor coefficient arrays along the last axis."""
    a = _as_batch(a)
    b = _as_batch(b)
    if n is None:
        n = min(a.shape[-1], b.shape[-1])
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (n,)
    out = np.zeros(shape)
    for k in range(n):
        for p in range(max(0, k - b.shape[-1] + 1), min(k + 1, a.shape[-1])):
            out[..., k] += a[..., p] * b[..., k - p]
    return out


def series_deriv_values(series):
    """Convert coefficients f^(k)/k! into derivative values f^(k)."""
    series = _as_batch(series)
    k = np.arange(series.shape[-1])
    return series * np.array([math.factorial(int(i)) for i in k])
