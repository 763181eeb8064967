import numpy as np
import pytest

from tubegeom.beltrami import laplacian_gauss
from tubegeom.errors import InvalidRadiusError, SingularBandError, WrongCaseError
from tubegeom.frenet import CircleCurve, FourierCurve, FourierSeries1, HelixCurve, frenet_frame
from tubegeom.geom import curvatures, fundamental_forms, surface_jet
from tubegeom.tubes import (
    TubeSpec,
    anchor_a33_profile,
    anchor_ring_laplacian_coeffs,
    anchor_ring_laplacian_components,
    phi_values_avoiding_band,
    tube_forms_closed,
    tube_gauss_curvature,
    tube_gauss_map,
    tube_laplacian_coeffs,
    tube_laplacian_gauss_closed,
    tube_laplacian_gauss_poly,
    tube_laplacian_gauss_vector,
    tube_point,
    tube_surface,
)

TORUS_SPEC = TubeSpec(curve=CircleCurve(1.0), radius=0.5)
HELIX_SPEC = TubeSpec(curve=HelixCurve(1.0, 1.0), radius=0.5)


def sample_params(spec, n, seed, min_cos=0.0):
    rng = np.random.default_rng(seed)
    (u_lo, u_hi), _ = spec.domain
    u = rng.uniform(u_lo, u_hi, n)
    phi = rng.uniform(0.0, 2 * np.pi, n)
    if min_cos > 0:
        bad = np.abs(np.cos(phi)) <= min_cos
        phi[bad] = 0.1  # pull stragglers out of the band
    return u, phi


def test_radius_bound_enforced():
    with pytest.raises(InvalidRadiusError):
        TubeSpec(curve=CircleCurve(1.0), radius=1.2)
    with pytest.raises(InvalidRadiusError):
        TubeSpec(curve=CircleCurve(1.0), radius=-0.1)
    TubeSpec(curve=CircleCurve(1.0), radius=0.99)  # just inside the bound


def test_tube_position_spot_value():
    surf = tube_surface(TORUS_SPEC)
    pos = surface_jet(surf, 0.0, 0.0).deriv(0, 0)
    np.testing.assert_allclose(pos, [0.5, 0.0, 0.0], atol=1e-14)


def test_helix_tube_regular_everywhere():
    surf = tube_surface(HELIX_SPEC)
    u, phi = sample_params(HELIX_SPEC, 1000, seed=21)
    jet = surface_jet(surf, u, phi)
    r1, r2 = jet.deriv(1, 0), jet.deriv(0, 1)
    area = np.linalg.norm(np.cross(r1, r2), axis=-1)
    assert np.min(area) > 1e-10


def test_delta_positive_for_valid_specs():
    for spec in (TORUS_SPEC, HELIX_SPEC):
        u, phi = sample_params(spec, 500, seed=22)
        assert np.min(tube_point(spec, u, phi).delta) > 0.0


def test_closed_forms_spot_values():
    first, second = tube_forms_closed(TORUS_SPEC, 0.0, np.pi / 3)
    np.testing.assert_allclose(
        [first.a11, first.a12, first.a22], [0.5625, 0.0, 0.25], atol=1e-15
    )
    np.testing.assert_allclose(
        [second.a11, second.a12, second.a22], [-0.375, 0.0, 0.5], atol=1e-15
    )
    firsth, secondh = tube_forms_closed(HELIX_SPEC, 0.0, np.pi / 4)
    assert firsth.a12 == pytest.approx(0.125, abs=1e-15)  # r^2 tau
    assert secondh.a12 == pytest.approx(0.25, abs=1e-15)  # r tau


@pytest.mark.parametrize("spec", [TORUS_SPEC, HELIX_SPEC], ids=["torus", "helix"])
def test_closed_forms_match_engine(spec):
    surf = tube_surface(spec)
    u, phi = sample_params(spec, 1000, seed=23)
    jet = surface_jet(surf, u, phi)
    g, b, _ = fundamental_forms(jet)
    first, second = tube_forms_closed(spec, u, phi)
    for closed, generic in zip(first.entries() + second.entries(), g.entries() + b.entries()):
        np.testing.assert_allclose(closed, generic, atol=1e-9)


def test_gauss_curvature_spot_values():
    assert tube_gauss_curvature(TORUS_SPEC, 0.0, 0.0) == pytest.approx(-4.0, abs=1e-14)
    assert tube_gauss_curvature(TORUS_SPEC, 0.0, np.pi / 2) == pytest.approx(
        0.0, abs=1e-14
    )


@pytest.mark.parametrize("spec", [TORUS_SPEC, HELIX_SPEC], ids=["torus", "helix"])
def test_gauss_curvature_matches_engine(spec):
    surf = tube_surface(spec)
    u, phi = sample_params(spec, 1000, seed=24, min_cos=0.05)
    K, _ = curvatures(surface_jet(surf, u, phi))
    closed = tube_gauss_curvature(spec, u, phi)
    np.testing.assert_allclose(np.abs(K - closed) / np.abs(closed), 0.0, atol=1e-9)


def test_gauss_map_frenet_combination():
    fd = frenet_frame(CircleCurve(1.0), 0.7)
    np.testing.assert_allclose(tube_gauss_map(TORUS_SPEC, 0.7, 0.0), -fd.h, atol=1e-14)
    np.testing.assert_allclose(
        tube_gauss_map(TORUS_SPEC, 0.7, np.pi / 2), -fd.b, atol=1e-14
    )
    # spec example: tube over circle kappa=1 at u=0, phi=pi/2 has N = (0,0,-1)
    np.testing.assert_allclose(
        tube_gauss_map(TORUS_SPEC, 0.0, np.pi / 2), [0.0, 0.0, -1.0], atol=1e-14
    )


@pytest.mark.parametrize("spec", [TORUS_SPEC, HELIX_SPEC], ids=["torus", "helix"])
def test_gauss_map_matches_engine(spec):
    surf = tube_surface(spec)
    u, phi = sample_params(spec, 1000, seed=25)
    N = surface_jet(surf, u, phi).normal_deriv(0, 0)
    closed = tube_gauss_map(spec, u, phi)
    assert np.max(np.linalg.norm(N - closed, axis=-1)) < 1e-10


def test_operator_coefficients_torus_structure():
    co = tube_laplacian_coeffs(TORUS_SPEC, 0.4, 0.9)
    assert co.c_uphi == pytest.approx(0.0, abs=1e-15)
    assert co.c_u == pytest.approx(0.0, abs=1e-15)
    reduced = anchor_ring_laplacian_coeffs(TORUS_SPEC, 0.4, 0.9)
    for f in ("c_uu", "c_uphi", "c_phiphi", "c_u", "c_phi"):
        assert getattr(co, f) == pytest.approx(getattr(reduced, f), abs=1e-12)


@pytest.mark.parametrize("spec", [TORUS_SPEC, HELIX_SPEC], ids=["torus", "helix"])
def test_operator_applied_to_gauss_map_matches_engine(spec):
    surf = tube_surface(spec)
    (u_lo, u_hi), _ = spec.domain
    u = u_lo + np.arange(32) * (u_hi - u_lo) / 32
    phi = phi_values_avoiding_band(32, eps_band=0.15)
    U, PHI = [a.ravel() for a in np.meshgrid(u, phi, indexing="ij")]
    jet = surface_jet(surf, U, PHI)
    lap_engine = laplacian_gauss(jet, "II")
    co = tube_laplacian_coeffs(spec, U, PHI)
    lap_op = np.stack([co.apply(c) for c in jet.normal_jets], axis=-1)
    assert np.max(np.linalg.norm(lap_op - lap_engine, axis=-1)) < 1e-6
    lap_closed = tube_laplacian_gauss_vector(spec, U, PHI)
    assert np.max(np.linalg.norm(lap_closed - lap_engine, axis=-1)) < 1e-6


def test_singular_band_guard():
    with pytest.raises(SingularBandError):
        tube_laplacian_coeffs(TORUS_SPEC, 0.0, np.pi / 2)
    with pytest.raises(SingularBandError):
        tube_laplacian_gauss_closed(TORUS_SPEC, 0.0, np.pi / 2 + 0.1)
    # outside the default band: fine
    tube_laplacian_gauss_closed(TORUS_SPEC, 0.0, np.pi / 2 + 0.2)


def test_frenet_components_spot_values():
    c_t, c_h, c_b = tube_laplacian_gauss_closed(TORUS_SPEC, 0.0, np.pi / 3)
    assert c_t == pytest.approx(0.0, abs=1e-15)
    assert c_h == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert c_b == pytest.approx(-2.309401076758503, abs=1e-9)


def test_frenet_tangent_component_helix_spot_value():
    # beta = kappa' cos + kappa tau sin = 0.25 sin(pi/4); delta = 1 - 0.25 cos(pi/4)
    c_t, _, _ = tube_laplacian_gauss_closed(HELIX_SPEC, 1.3, np.pi / 4)
    beta = 0.25 * np.sin(np.pi / 4)
    delta = 1.0 - 0.25 * np.cos(np.pi / 4)
    want = beta / (2 * 0.5 * delta**2 * np.cos(np.pi / 4))
    assert c_t == pytest.approx(want, abs=1e-14)
    assert c_t == pytest.approx(0.36890, abs=1e-5)
    # confirmed against the engine expansion in the frame
    surf = tube_surface(HELIX_SPEC)
    jet = surface_jet(surf, 1.3, np.pi / 4)
    fd = frenet_frame(HELIX_SPEC.curve, 1.3)
    lap = laplacian_gauss(jet, "II")
    assert np.dot(lap, fd.t) == pytest.approx(c_t, abs=1e-10)


def test_tangent_component_vanishes_for_circle_tubes():
    u, phi = sample_params(TORUS_SPEC, 300, seed=26, min_cos=0.16)
    c_t, _, _ = tube_laplacian_gauss_closed(TORUS_SPEC, u, phi)
    np.testing.assert_allclose(c_t, 0.0, atol=1e-15)
    assert np.max(np.abs(tube_point(TORUS_SPEC, u, phi).beta)) == 0.0


@pytest.mark.parametrize("spec", [TORUS_SPEC, HELIX_SPEC], ids=["torus", "helix"])
def test_cleared_denominator_consistency(spec):
    """Multiplying the Frenet components by 2 r kappa delta^2 cos(phi) must
    give the polynomial triple exactly."""
    u, phi = sample_params(spec, 1000, seed=27, min_cos=0.16)
    tp = tube_point(spec, u, phi)
    scale = 2.0 * spec.radius * tp.kappa * tp.delta**2 * np.cos(phi)
    closed = tube_laplacian_gauss_closed(spec, u, phi)
    poly = tube_laplacian_gauss_poly(spec, u, phi)
    for c, p in zip(closed, poly):
        np.testing.assert_allclose(scale * c, p, atol=1e-10)


def test_anchor_components_spot_values():
    # bracket at kappa=1, r=0.5, phi=pi/3 equals 4/3; third component -2.30940
    comps = anchor_ring_laplacian_components(TORUS_SPEC, 0.0, np.pi / 3)
    assert comps[0] == pytest.approx(4.0 / 3.0, abs=1e-12)  # cos(0) = 1
    assert comps[1] == pytest.approx(0.0, abs=1e-15)
    assert comps[2] == pytest.approx(-2.309401076758503, abs=1e-9)
    comps = anchor_ring_laplacian_components(TORUS_SPEC, 0.0, np.pi / 4)
    assert comps[2] == pytest.approx(-1.73459, abs=1e-5)


def test_anchor_bracket_equals_frame_normal_coefficient():
    """The printed bracket is the same function as the Frenet h-component."""
    u, phi = sample_params(TORUS_SPEC, 1000, seed=28, min_cos=0.16)
    comps = anchor_ring_laplacian_components(TORUS_SPEC, u, phi)
    bracket = comps[..., 0] / np.cos(u)  # safe: u sampled away from zeros below
    mask = np.abs(np.cos(u)) > 0.1
    _, c_h, c_b = tube_laplacian_gauss_closed(TORUS_SPEC, u, phi)
    np.testing.assert_allclose(bracket[mask], c_h[mask], atol=1e-10)
    np.testing.assert_allclose(comps[..., 2], c_b, atol=1e-12)


def test_anchor_components_vs_engine_both_signs():
    """The printed components use the opposite circle-normal orientation:
    components 1 and 2 flip sign against the engine, component 3 agrees."""
    u, phi = sample_params(TORUS_SPEC, 200, seed=29, min_cos=0.16)
    comps = anchor_ring_laplacian_components(TORUS_SPEC, u, phi)
    jet = surface_jet(tube_surface(TORUS_SPEC), u, phi)
    lap = laplacian_gauss(jet, "II")
    np.testing.assert_allclose(comps[..., 0], -lap[..., 0], atol=1e-9)
    np.testing.assert_allclose(comps[..., 1], -lap[..., 1], atol=1e-9)
    np.testing.assert_allclose(comps[..., 2], lap[..., 2], atol=1e-9)
    # and emphatically not the same sign on the first two components
    assert np.max(np.abs(comps[..., 0] - lap[..., 0])) > 0.1


def test_anchor_formulas_require_circle():
    with pytest.raises(WrongCaseError):
        anchor_ring_laplacian_components(HELIX_SPEC, 0.0, 0.3)
    with pytest.raises(WrongCaseError):
        anchor_a33_profile(HELIX_SPEC, 0.3)


def test_a33_profile_spot_values_and_spread():
    assert anchor_a33_profile(TORUS_SPEC, 0.0) == pytest.approx(2.0, abs=1e-14)
    assert anchor_a33_profile(TORUS_SPEC, np.pi / 2) == pytest.approx(3.0, abs=1e-14)
    phis = np.linspace(0.0, np.pi / 2, 181)
    profile = anchor_a33_profile(TORUS_SPEC, phis)
    assert profile.max() - profile.min() == pytest.approx(1.0, abs=1e-12)


def test_fourier_tube_full_pipeline():
    """A curve with varying curvature and torsion runs through the whole
    closed-form vs engine cross-check."""
    curve = FourierCurve(
        kappa=FourierSeries1(1.0, cos_coeffs=[0.2]),
        tau=FourierSeries1(0.15, sin_coeffs=[0.1]),
    )
    spec = TubeSpec(curve=curve, radius=0.4)
    surf = tube_surface(spec)
    u, phi = sample_params(spec, 200, seed=30, min_cos=0.16)
    jet = surface_jet(surf, u, phi)
    g, b, _ = fundamental_forms(jet)
    first, second = tube_forms_closed(spec, u, phi)
    for closed, generic in zip(first.entries() + second.entries(), g.entries() + b.entries()):
        np.testing.assert_allclose(closed, generic, atol=1e-8)
    lap_engine = laplacian_gauss(jet, "II")
    lap_closed = tube_laplacian_gauss_vector(spec, u, phi)
    assert np.max(np.linalg.norm(lap_closed - lap_engine, axis=-1)) < 1e-6


def test_phi_sampler_respects_band_and_count():
    for n in (8, 32, 101):
        phis = phi_values_avoiding_band(n, eps_band=0.15)
        assert len(phis) == n
        assert np.min(np.abs(np.cos(phis))) > 0.15
        assert np.all((phis >= 0.0) & (phis < 2 * np.pi))
    uniform = phi_values_avoiding_band(8, eps_band=0.0)
    np.testing.assert_allclose(uniform, np.arange(8) * 2 * np.pi / 8, atol=1e-15)
