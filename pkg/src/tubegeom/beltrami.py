"""Beltrami differential parameters with respect to any fundamental form.

Scalar fields enter as jets (value plus partials to order 2, produced by
the same jet arithmetic as the surfaces), so the operators here are pure
algebra: no differencing, no quadrature.

The sign convention of the second parameter is the covariant-Hessian
trace with a leading minus, which makes ambient coordinates on the unit
sphere eigenfunctions with eigenvalue +2 for the first-form operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularFormError
from .geom import (
    FORM_FIRST,
    FORM_SECOND,
    FORM_THIRD,
    FormMatrix,
    SurfaceJet,
    form_entry_jets,
    fundamental_forms,
    curvatures,
    surface_jet,
)
from .jets import Jet2

K_MIN = 1e-12


@dataclass(frozen=True)
class ChristoffelSymbols:
    """Connection coefficients gamma[..., k, s, t] of a chosen form."""

    gamma: np.ndarray
    form: str


def _gauss_curvature_guard(jet: SurfaceJet, form: str):
    """Reject evaluations where the chosen form cannot serve as a metric."""
    g, b, _ = fundamental_forms(jet)
    detg = g.det
    if form == FORM_FIRST:
        if np.any(np.abs(detg) < K_MIN):
            raise SingularFormError("first form degenerate (det I ~ 0)")
        return
    K = b.det / detg
    if np.any(np.abs(K) < K_MIN):
        raise SingularFormError(
            f"|K| = {float(np.min(np.abs(K))):.3e} < {K_MIN:g}: form {form} singular"
        )


def _form_value_and_grad(jet: SurfaceJet, form: str):
    """Entries E[..., w, t] and their parameter gradients dE[..., s, w, t]."""
    j11, j12, j22 = form_entry_jets(jet, form)
    batch = j11.value.shape
    E = np.empty(batch + (2, 2))
    dE = np.empty(batch + (2, 2, 2))
    for (w, t), entry in (((0, 0), j11), ((0, 1), j12), ((1, 1), j22)):
        E[..., w, t] = entry.value
        E[..., t, w] = entry.value
        for s in range(2):
            d = entry.deriv(1, 0) if s == 0 else entry.deriv(0, 1)
            dE[..., s, w, t] = d
            dE[..., s, t, w] = d
    return E, dE


def _inverse_entries(E):
    det = E[..., 0, 0] * E[..., 1, 1] - E[..., 0, 1] * E[..., 1, 0]
    inv = np.empty_like(E)
    inv[..., 0, 0] = E[..., 1, 1] / det
    inv[..., 1, 1] = E[..., 0, 0] / det
    inv[..., 0, 1] = -E[..., 0, 1] / det
    inv[..., 1, 0] = -E[..., 1, 0] / det
    return inv


def christoffel(jet: SurfaceJet, form: str) -> ChristoffelSymbols:
    """Connection coefficients of the chosen fundamental form.

    gamma^k_{st} = 1/2 a^{kw} (d_s a_{wt} + d_t a_{ws} - d_w a_{st});
    raises SingularFormError where the form determinant vanishes (for the
    second form that is the K = 0 set).
    """
    _gauss_curvature_guard(jet, form)
    E, dE = _form_value_and_grad(jet, form)
    inv = _inverse_entries(E)
    batch = E.shape[:-2]
    gamma = np.zeros(batch + (2, 2, 2))
    for k in range(2):
        for s in range(2):
            for t in range(2):
                acc = np.zeros(batch)
                for w in range(2):
                    acc = acc + inv[..., k, w] * (
                        dE[..., s, w, t] + dE[..., t, w, s] - dE[..., w, s, t]
                    )
                gamma[..., k, s, t] = 0.5 * acc
    return ChristoffelSymbols(gamma=gamma, form=form)


def beltrami_first(p: Jet2, q: Jet2, jet: SurfaceJet, form: str):
    """First differential parameter a^{st} p_s q_t of two scalar fields."""
    _gauss_curvature_guard(jet, form)
    E, _ = _form_value_and_grad(jet, form)
    inv = _inverse_entries(E)
    dp = np.stack([p.deriv(1, 0), p.deriv(0, 1)], axis=-1)
    dq = np.stack([q.deriv(1, 0), q.deriv(0, 1)], axis=-1)
    return np.einsum("...st,...s,...t->...", inv, dp, dq)


def laplacian_scalar(p: Jet2, jet: SurfaceJet, form: str):
    """Second differential parameter: minus the form-trace of the covariant
    Hessian of p."""
    gamma = christoffel(jet, form).gamma
    E, _ = _form_value_and_grad(jet, form)
    inv = _inverse_entries(E)
    hess = np.empty(E.shape)
    hess[..., 0, 0] = p.deriv(2, 0)
    hess[..., 0, 1] = hess[..., 1, 0] = p.deriv(1, 1)
    hess[..., 1, 1] = p.deriv(0, 2)
    dp = np.stack([p.deriv(1, 0), p.deriv(0, 1)], axis=-1)
    cov = hess - np.einsum("...kst,...k->...st", gamma, dp)
    return -np.einsum("...st,...st->...", inv, cov)


def laplacian_vector(F, jet: SurfaceJet, form: str):
    """Componentwise second parameter of an ambient vector field given as
    three jets; returns shape (..., 3)."""
    return np.stack([laplacian_scalar(c, jet, form) for c in F], axis=-1)


def laplacian_gauss(jet: SurfaceJet, form: str = FORM_SECOND):
    """The vector Laplacian of the Gauss map with respect to the form."""
    return laplacian_vector(jet.normal_jets, jet, form)


def grad_first_form(p: Jet2, jet: SurfaceJet):
    """Surface gradient g^{st} p_s r_t of a scalar field, a tangent vector."""
    g11, g12, g22 = form_entry_jets(jet, FORM_FIRST)
    g = FormMatrix(a11=g11.value, a12=g12.value, a22=g22.value)
    i11, i12, i22 = g.inverse_components()
    p1, p2 = p.deriv(1, 0), p.deriv(0, 1)
    c1 = i11 * p1 + i12 * p2
    c2 = i12 * p1 + i22 * p2
    r1, r2 = jet.deriv(1, 0), jet.deriv(0, 1)
    return c1[..., None] * r1 + c2[..., None] * r2


def gauss_curvature_jet(jet: SurfaceJet) -> Jet2:
    """Gauss curvature as an order-1 jet (value and first partials)."""
    g11, g12, g22 = form_entry_jets(jet, FORM_FIRST)
    b11, b12, b22 = form_entry_jets(jet, FORM_SECOND)
    detg = g11 * g22 - g12 * g12
    detb = b11 * b22 - b12 * b12
    return detb / detg


def verify_gauss_identity(surface, v1, v2):
    """Residual of the structural identity linking the second-form
    Laplacian of the Gauss map to curvature data:

        lap_II(N) - (1/2K) grad_I(K) - 2 H N

    Returns the residual vector, shape (..., 3); small residuals certify
    the engine end to end.
    """
    jet = surface if isinstance(surface, SurfaceJet) else surface_jet(surface, v1, v2)
    K_jet = gauss_curvature_jet(jet)
    K = K_jet.value
    if np.any(np.abs(K) < K_MIN):
        raise SingularFormError("identity undefined where K = 0")
    _, H = curvatures(jet)
    lapN = laplacian_gauss(jet, FORM_SECOND)
    gradK = grad_first_form(K_jet, jet)
    N = jet.normal_deriv(0, 0)
    return lapN - gradK / (2.0 * K)[..., None] - 2.0 * H[..., None] * N
